#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "roundreach/decide.hpp"
#include "roundreach/polar.hpp"

using namespace roundreach;

namespace {

RoundingSpec polar_spec(std::int64_t r, RealRounding kind = RealRounding::Floor)
{
    return RoundingSpec::polar(kind, r, 1);
}

std::vector<ComplexValue> polar_values(const std::vector<std::pair<Rational, Angle>>& v)
{
    std::vector<ComplexValue> out;
    for (const auto& [m, a] : v) {
        out.push_back(PolarValue{m, a});
    }
    return out;
}

const PolarPoint& at(const State& s, std::size_t i)
{
    return std::get<PolarPoint>(s.points[i]);
}

// Angle between two grid directions, as a multiple of pi/r in [0, r].
std::int64_t grid_angle(std::int64_t i, std::int64_t j, std::int64_t r)
{
    const std::int64_t diff = ((i - j) % (2 * r) + 2 * r) % (2 * r);
    return std::min(diff, 2 * r - diff);
}

} // namespace

TEST_CASE("relative angle phi")
{
    const JnfSystem quarter({JordanBlock{2, 1, Angle(1, 2)}}, polar_values({{1, Angle()}, {1, Angle()}}),
                            polar_values({{0, Angle()}, {0, Angle()}}), polar_spec(2));
    CHECK(phi(quarter, quarter.initial(), 0, 2) == Angle(1, 2));

    const JnfSystem flat({JordanBlock{2, 1, Angle()}}, polar_values({{1, Angle()}, {1, Angle()}}),
                         polar_values({{0, Angle()}, {0, Angle()}}), polar_spec(2));
    CHECK(phi(flat, flat.initial(), 0, 2) == Angle());

    const JnfSystem opposite({JordanBlock{2, 1, Angle(1, 2)}}, polar_values({{1, Angle()}, {1, Angle(1, 1)}}),
                             polar_values({{0, Angle()}, {0, Angle()}}), polar_spec(2));
    CHECK(phi(opposite, opposite.initial(), 0, 2) == Angle(1, 2));

    const JnfSystem zero({JordanBlock{2, 1, Angle(1, 2)}}, polar_values({{0, Angle()}, {1, Angle()}}),
                         polar_values({{0, Angle()}, {0, Angle()}}), polar_spec(2));
    CHECK_FALSE(phi(zero, zero.initial(), 0, 2).has_value());
}

TEST_CASE("divergence rule")
{
    CHECK(stop_fires(10, 11, true, 8));
    CHECK_FALSE(stop_fires(10, 10, true, 8));
    CHECK_FALSE(stop_fires(7, 11, true, 8));
    CHECK_FALSE(stop_fires(10, 11, false, 8));
}

TEST_CASE("resource bounds")
{
    auto b = resource_bounds(1, 7, 3, 2, 1);
    REQUIRE(b.t.size() == 1);
    CHECK(b.t[0] == 1);
    CHECK(b.u[0] == 7);

    b = resource_bounds(2, 9, 2, 2, 1);
    REQUIRE(b.exact);
    CHECK(b.u[1] == 9);
    CHECK(b.u[0] == 9 + 2 * Rational(b.t[1]) * b.u[1]);
    CHECK(b.t[0] > b.t[1]);
    CHECK(b.closed_form_holds);

    for (std::int64_t d = 1; d <= 4; ++d) {
        CHECK(resource_bounds(d, 5, 5, 3, 1).closed_form_holds);
    }
}

TEST_CASE("small-angle helper for R = 3 .. 100")
{
    for (std::int64_t r = 3; r <= 100; ++r) {
        // ceil(R/4)/R + 1/(2R) <= 1/2, all in units of pi
        const Rational lhs = make_rational((r + 3) / 4, r) + make_rational(1, 2 * r);
        CHECK(lhs <= Rational(1, 2));
        CHECK(small_angle_helper_holds(r));
    }
    CHECK_FALSE(small_angle_helper_holds(2));
}

TEST_CASE("polar decisions")
{
    const auto quarter = [](const PolarValue& y) {
        return JnfSystem({JordanBlock{1, 1, Angle(1, 2)}}, {PolarValue{3, Angle()}}, {y}, polar_spec(2));
    };
    auto v = decide_polar(quarter(PolarValue{3, Angle(1, 1)}));
    REQUIRE(std::holds_alternative<Reached>(v));
    CHECK(std::get<Reached>(v).step == 2);

    v = decide_polar(quarter(PolarValue{2, Angle()}));
    CHECK(std::holds_alternative<NotReached>(v));

    const JnfSystem example({JordanBlock{2, 1, Angle(1, 2)}}, polar_values({{5, Angle()}, {4, Angle()}}),
                            polar_values({{17, Angle()}, {4, Angle()}}),
                            polar_spec(2, RealRounding::MinimalErrorUp));
    v = decide_polar(example);
    CHECK(std::holds_alternative<NotReached>(v));
    Rational top = 0;
    for (const auto& s : simulate(example, 2000).states) {
        top = std::max(top, at(s, 0).modulus);
        CHECK(at(s, 1).modulus == 4);
    }
    CHECK(top == 16);

    const JnfSystem argand({JordanBlock{1, 1, Angle(1, 2)}}, {Cartesian{1, 0}}, {Cartesian{1, 0}},
                           RoundingSpec::argand(RealRounding::Floor, 1));
    CHECK_THROWS_AS(decide_polar(argand), Error);
}

TEST_CASE("angle order is preserved by adding an admissible vector")
{
    std::mt19937_64 rng(8080);
    std::uniform_int_distribution<int> mod(0, 12);
    std::uniform_int_distribution<int> den(1, 4);
    std::uniform_int_distribution<int> slot(0, 119);
    for (int t = 0; t < 2000; ++t) {
        const std::int64_t r = 2 + t % 4;
        const auto spec = polar_spec(r, t % 2 == 0 ? RealRounding::Floor : RealRounding::MinimalErrorUp);
        const std::int64_t order = 240;
        const auto a = embed_polar(make_rational(mod(rng), den(rng)), Angle(slot(rng), 60), order);
        const auto b_point = PolarPoint{mod(rng), static_cast<std::int64_t>(slot(rng)) % (2 * r)};
        const auto b = grid_value(b_point, spec, order);
        const auto ra = std::get<PolarPoint>(round_scalar(a, spec).point);
        const auto rab = std::get<PolarPoint>(round_scalar(a + b, spec).point);
        if (ra.modulus == 0 || rab.modulus == 0 || b_point.modulus == 0) {
            continue;
        }
        CHECK(grid_angle(ra.index, b_point.index, r) >= grid_angle(rab.index, b_point.index, r));
    }
}

TEST_CASE("oracle equivalence and post-stop growth")
{
    std::mt19937_64 rng(1234);
    const Angle angles[] = {Angle(1, 2), Angle(1, 3), Angle(1, 4)};
    std::uniform_int_distribution<int> mod(0, 8);
    std::uniform_int_distribution<int> idx(0, 7);
    int reached = 0;
    int stops = 0;
    for (int t = 0; t < 60; ++t) {
        const std::int64_t d = 1 + t % 2;
        const std::int64_t r = 2 + t % 3;
        const auto spec = polar_spec(r, t % 2 == 0 ? RealRounding::Floor : RealRounding::MinimalErrorUp);
        std::vector<ComplexValue> x;
        std::vector<ComplexValue> y;
        for (std::int64_t k = 0; k < d; ++k) {
            x.push_back(PolarValue{mod(rng), Angle(idx(rng) % (2 * r), r)});
            y.push_back(PolarValue{mod(rng), Angle(idx(rng) % (2 * r), r)});
        }
        const JordanBlock block{d, 1, angles[t % 3]};
        JnfSystem sys({block}, x, y, spec);
        if (t % 3 == 0) {
            const auto probe = simulate(sys, 5);
            std::vector<ComplexValue> hit;
            for (const auto& p : probe.states.back().points) {
                const auto& pp = std::get<PolarPoint>(p);
                hit.push_back(PolarValue{pp.modulus, Angle(pp.index, r)});
            }
            sys = JnfSystem({block}, x, hit, spec);
        }

        const auto verdict = decide_polar(sys);
        const auto bounds = resource_bounds(sys, 0);
        BruteForceOptions o;
        o.ball_bound = 2 * *std::max_element(bounds.u.begin(), bounds.u.end()) + bounds.y_s;
        o.step_bound = 10000000;
        const auto oracle = brute_force_decide(sys, o);
        CHECK(is_reached(verdict) == is_reached(oracle));
        if (is_reached(verdict)) {
            ++reached;
            CHECK(std::get<Reached>(verdict).step == std::get<Reached>(oracle).step);
        }

        if (d == 2) {
            const auto trace = simulate(sys, 400);
            for (std::size_t i = 0; i + 1 < trace.states.size(); ++i) {
                if (!stop_check(sys, trace.states[i], trace.states[i + 1], 0, 2)) {
                    continue;
                }
                ++stops;
                const Rational floor_modulus = at(trace.states[i], 0).modulus;
                const auto after = simulate(sys, i + 101);
                for (std::size_t j = i + 1; j < after.states.size(); ++j) {
                    CHECK(at(after.states[j], 0).modulus > floor_modulus);
                }
                break;
            }
        }
    }
    CHECK(reached > 5);
    MESSAGE("stop events checked: " << stops);
}
