#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "roundreach/argand.hpp"
#include "roundreach/decide.hpp"

using namespace roundreach;

namespace {

RoundingSpec argand(RealRounding kind)
{
    return RoundingSpec::argand(kind, 1);
}

bool near_one_of(double v, std::initializer_list<double> values)
{
    for (double w : values) {
        if (std::abs(v - w) < 1e-9) {
            return true;
        }
    }
    return false;
}

JnfSystem rotation(std::int64_t size, const Angle& a, std::vector<ComplexValue> x, std::vector<ComplexValue> y,
                   RealRounding kind)
{
    return JnfSystem({JordanBlock{size, 1, a}}, std::move(x), std::move(y), argand(kind));
}

Rational modulus_sq_at(const State& s, std::size_t i)
{
    return grid_modulus_sq(s.points[i]);
}

} // namespace

TEST_CASE("niven classification")
{
    auto c = niven_classify(Angle(1, 2));
    CHECK(c.sin_rational);
    CHECK(c.cos_rational);
    CHECK(c.axis_multiple_90);
    CHECK_FALSE(c.tan_rational.has_value());

    c = niven_classify(Angle(1, 3));
    CHECK(c.cos_rational);
    CHECK_FALSE(c.sin_rational);
    CHECK_FALSE(c.axis_multiple_90);
    CHECK(c.tan_rational == false);

    c = niven_classify(Angle(1, 4));
    CHECK(c.tan_rational == true);
    CHECK_FALSE(c.sin_rational);
    CHECK_FALSE(c.cos_rational);
    CHECK_FALSE(c.axis_multiple_90);

    // floating-point cross-check against the admissible rational values
    for (std::int64_t q = 1; q <= 12; ++q) {
        for (std::int64_t p = 0; p < 2 * q; ++p) {
            const Angle a(p, q);
            const double x = M_PI * static_cast<double>(p) / static_cast<double>(q);
            const auto k = niven_classify(a);
            CHECK(k.sin_rational == near_one_of(std::sin(x), {0, 0.5, -0.5, 1, -1}));
            CHECK(k.cos_rational == near_one_of(std::cos(x), {0, 0.5, -0.5, 1, -1}));
            if (std::abs(std::cos(x)) > 1e-9) {
                REQUIRE(k.tan_rational.has_value());
                CHECK(*k.tan_rational == near_one_of(std::tan(x), {0, 1, -1}));
            }
        }
    }
}

TEST_CASE("truncation decisions")
{
    auto v = decide_truncation(
        rotation(1, Angle(1, 4), {Cartesian{3, 0}}, {Cartesian{0, 0}}, RealRounding::Truncate));
    CHECK(std::holds_alternative<Reached>(v));

    v = decide_truncation(rotation(1, Angle(1, 2), {Cartesian{3, 4}}, {Cartesian{-4, 3}}, RealRounding::Truncate));
    REQUIRE(std::holds_alternative<Reached>(v));
    CHECK(std::get<Reached>(v).step == 1);

    v = decide_truncation(rotation(1, Angle(1, 2), {Cartesian{3, 4}}, {Cartesian{5, 0}}, RealRounding::Truncate));
    CHECK(std::holds_alternative<NotReached>(v));

    CHECK_THROWS_AS(
        decide_truncation(rotation(1, Angle(1, 2), {Cartesian{1, 0}}, {Cartesian{1, 0}}, RealRounding::Floor)),
        Error);
}

TEST_CASE("expansion decisions")
{
    auto v = decide_expansion(rotation(1, Angle(1, 4), {Cartesian{1, 0}}, {Cartesian{1, 0}}, RealRounding::Expand));
    REQUIRE(std::holds_alternative<Reached>(v));
    CHECK(std::get<Reached>(v).step == 0);

    v = decide_expansion(rotation(1, Angle(1, 4), {Cartesian{2, 0}}, {Cartesian{1, 0}}, RealRounding::Expand));
    REQUIRE(std::holds_alternative<NotReached>(v));
    CHECK(std::holds_alternative<DivergedPastTarget>(std::get<NotReached>(v).certificate));

    // top dimension at zero: decided on the lower dimension alone
    v = decide_expansion(rotation(2, Angle(1, 2), {Cartesian{2, 1}, Cartesian{0, 0}},
                                  {Cartesian{-1, 2}, Cartesian{0, 0}}, RealRounding::Expand));
    REQUIRE(std::holds_alternative<Reached>(v));
    CHECK(std::get<Reached>(v).step == 1);
}

TEST_CASE("truncation bounds")
{
    auto b = truncation_bounds(1, 5, 1);
    CHECK(b.u[0] == 5);
    CHECK(b.t[0] == 10);

    b = truncation_bounds(2, 5, 1);
    REQUIRE(b.exact);
    CHECK(b.u[1] == 5);
    CHECK(b.t[1] == 100);
    CHECK(b.u[0] == 5 + 2 * Rational(b.t[1]) * b.u[1]);
    CHECK(b.closed_form_holds);
}

TEST_CASE("no integer orbit keeps its modulus under a 45 degree rotation")
{
    for (auto kind : {RealRounding::Truncate, RealRounding::Expand}) {
        const auto sys = rotation(1, Angle(1, 4), {Cartesian{1, 0}}, {Cartesian{0, 0}}, kind);
        for (int a = -50; a <= 50; ++a) {
            for (int b = -50; b <= 50; ++b) {
                if (a * a + b * b > 2500 || (a == 0 && b == 0)) {
                    continue;
                }
                const auto s = sys.make_state({ArgandPoint{a, b}});
                const auto next = sys.step(s);
                if (kind == RealRounding::Truncate) {
                    CHECK(modulus_sq_at(next, 0) < a * a + b * b);
                } else {
                    CHECK(modulus_sq_at(next, 0) > a * a + b * b);
                }
            }
        }
    }
}

TEST_CASE("monotone moduli and oracle equivalence on random instances")
{
    std::mt19937_64 rng(4711);
    const Angle angles[] = {Angle(1, 4), Angle(1, 3), Angle(1, 2)};
    std::uniform_int_distribution<int> c(-8, 8);
    int reached = 0;
    for (int t = 0; t < 80; ++t) {
        const std::int64_t d = 1 + t % 2;
        const auto kind = t % 4 < 2 ? RealRounding::Truncate : RealRounding::Expand;
        std::vector<ComplexValue> x;
        std::vector<ComplexValue> y;
        for (std::int64_t k = 0; k < d; ++k) {
            x.push_back(Cartesian{c(rng), c(rng)});
            y.push_back(Cartesian{c(rng), c(rng)});
        }
        auto sys = rotation(d, angles[t % 3], x, y, kind);
        if (t % 3 == 1) {
            const auto probe = simulate(sys, 4);
            std::vector<ComplexValue> hit;
            for (const auto& p : probe.states.back().points) {
                const auto& ap = std::get<ArgandPoint>(p);
                hit.push_back(Cartesian{ap.re, ap.im});
            }
            sys = rotation(d, angles[t % 3], x, hit, kind);
        }

        const auto trace = simulate(sys, 200);
        for (std::size_t i = 0; i + 1 < trace.states.size(); ++i) {
            const auto before = modulus_sq_at(trace.states[i], d - 1);
            const auto after = modulus_sq_at(trace.states[i + 1], d - 1);
            if (kind == RealRounding::Truncate) {
                CHECK(after <= before);
            } else {
                CHECK(after >= before);
            }
        }

        const auto verdict = kind == RealRounding::Truncate ? decide_truncation(sys) : decide_expansion(sys);
        Rational ball = 0;
        if (kind == RealRounding::Truncate) {
            const auto b = truncation_bounds(sys, 0);
            for (const auto& u : b.u) {
                ball = std::max(ball, u);
            }
        } else {
            ball = 10000;
        }
        BruteForceOptions o;
        o.ball_bound = ball;
        o.step_bound = 10000000;
        const auto oracle = brute_force_decide(sys, o);
        CHECK(is_reached(verdict) == is_reached(oracle));
        if (is_reached(verdict)) {
            ++reached;
            CHECK(std::get<Reached>(verdict).step == std::get<Reached>(oracle).step);
        }
    }
    CHECK(reached > 5);
}
