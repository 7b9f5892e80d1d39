// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>

#include <CLI11.hpp>

#include "roundreach/argand.hpp"
#include "roundreach/decide.hpp"
#include "roundreach/hyperbolic.hpp"
#include "roundreach/polar.hpp"
#include "roundreach/qbf.hpp"
#include "roundreach/rotation.hpp"

using namespace roundreach;

namespace {

struct Result {
    bool pass = true;
    std::string detail;
};

class Tally {
public:
    void check(bool ok, const std::string& what)
    {
        if (!ok) {
            ++failed_;
            if (first_.empty()) {
                first_ = what;
            }
        }
        ++total_;
    }
    Result result(const std::string& summary) const
    {
        std::ostringstream out;
        out << summary << "; " << total_ - failed_ << "/" << total_ << " checks";
        if (failed_ > 0) {
            out << "; first failure: " << first_;
        }
        return {failed_ == 0, out.str()};
    }

private:
    long total_ = 0;
    long failed_ = 0;
    std::string first_;
};

// ---------------------------------------------------------------------------
// 1. gadget truth tables

Result gadget_tables()
{
    Tally t;
    const GadgetFamily families[] = {GadgetFamily::Floor, GadgetFamily::Ceil, GadgetFamily::MinimalError};
    for (auto family : families) {
        const auto kind = family_rounding(family);
        for (int a = 0; a <= 1; ++a) {
            for (int b = 0; b <= 1; ++b) {
                for (int na = 0; na <= 1; ++na) {
                    for (int nb = 0; nb <= 1; ++nb) {
                        const std::vector<Rational> v{1, a, b};
                        const Operand oa{1, na == 1};
                        const Operand ob{2, nb == 1};
                        const bool va = (a == 1) != (na == 1);
                        const bool vb = (b == 1) != (nb == 1);
                        const std::string at = std::string(family_name(family)) + " inputs " + std::to_string(a) +
                                               std::to_string(b) + " negations " + std::to_string(na) +
                                               std::to_string(nb);
                        t.check(apply_row(gadget_row(GadgetOp::And, family, 0, oa, ob), v, kind) == (va && vb),
                                "and " + at);
                        t.check(apply_row(gadget_row(GadgetOp::Or, family, 0, oa, ob), v, kind) == (va || vb),
                                "or " + at);
                        t.check(apply_row(gadget_row(GadgetOp::Not, family, 0, oa), v, kind) == !va, "not " + at);
                        t.check(apply_row(gadget_row(GadgetOp::Copy, family, 0, oa), v, kind) == va, "copy " + at);
                    }
                }
            }
        }
    }
    return t.result("and/or/not/copy in floor, ceil and minerr families");
}

// ---------------------------------------------------------------------------
// 2 and 3. QBF end to end and perturbation

// Every expression over x1..xn with exactly `ops` operators.
std::vector<std::string> expressions(std::size_t n, int ops)
{
    static std::map<std::pair<std::size_t, int>, std::vector<std::string>> memo;
    const auto key = std::make_pair(n, ops);
    if (auto it = memo.find(key); it != memo.end()) {
        return it->second;
    }
    std::vector<std::string> out;
    if (ops == 0) {
        for (std::size_t i = 1; i <= n; ++i) {
            out.push_back("x" + std::to_string(i));
        }
    } else {
        for (const auto& e : expressions(n, ops - 1)) {
            out.push_back("!" + e);
        }
        for (int left = 0; left < ops; ++left) {
            for (const auto& l : expressions(n, left)) {
                for (const auto& r : expressions(n, ops - 1 - left)) {
                    out.push_back("(" + l + " & " + r + ")");
                    out.push_back("(" + l + " | " + r + ")");
                }
            }
        }
    }
    memo[key] = out;
    return out;
}

std::string random_expression(std::mt19937_64& rng, std::size_t n, int ops)
{
    if (ops == 0) {
        return "x" + std::to_string(std::uniform_int_distribution<std::size_t>(1, n)(rng));
    }
    const int kind = std::uniform_int_distribution<int>(0, 4)(rng);
    if (kind == 0) {
        return "!" + random_expression(rng, n, ops - 1);
    }
    const int left = std::uniform_int_distribution<int>(0, ops - 1)(rng);
    return "(" + random_expression(rng, n, left) + (kind % 2 == 0 ? " & " : " | ") +
           random_expression(rng, n, ops - 1 - left) + ")";
}

std::string prefix(std::size_t n)
{
    std::string out;
    for (std::size_t i = 1; i <= n; ++i) {
        out += (i % 2 == 1 ? "forall x" : "exists x") + std::to_string(i) + " ";
    }
    return out + ": ";
}

struct QbfCase {
    std::string text;
    GadgetFamily family;
};

std::vector<QbfCase> qbf_cases(std::mt19937_64& rng)
{
    std::vector<QbfCase> out;
    const GadgetFamily families[] = {GadgetFamily::Floor, GadgetFamily::Ceil, GadgetFamily::MinimalError};
    // n = 2: every matrix with at most three operators, families in rotation
    std::size_t i = 0;
    for (int ops = 0; ops <= 3; ++ops) {
        for (const auto& e : expressions(2, ops)) {
            out.push_back({prefix(2) + e, families[i++ % 3]});
        }
    }
    // n = 2 with 4..6 operators and n = 4 with 0..6 operators: seeded samples
    for (int ops = 4; ops <= 6; ++ops) {
        for (int k = 0; k < 12; ++k) {
            out.push_back({prefix(2) + random_expression(rng, 2, ops), families[k % 3]});
        }
    }
    for (int ops = 0; ops <= 6; ++ops) {
        for (int k = 0; k < 6; ++k) {
            out.push_back({prefix(4) + random_expression(rng, 4, ops), families[k % 3]});
        }
    }
    return out;
}

std::pair<Result, Result> qbf_end_to_end(std::mt19937_64& rng)
{
    Tally reach;
    Tally scaled;
    const auto cases = qbf_cases(rng);
    std::size_t true_count = 0;
    for (const auto& c : cases) {
        const auto f = parse_qbf(c.text);
        const bool truth = evaluate_qbf(f);
        true_count += truth ? 1 : 0;
        const auto program = lower_qbf_to_program(f, c.family);
        const auto inst = explode_program_to_matrix(program);
        const std::size_t n = f.n();
        const std::size_t ell = f.ell();
        reach.check(inst.meta.dimension == (3 * n + 1 + ell) * (4 * n + 15 + ell) &&
                        inst.system.dimension() == inst.meta.dimension,
                    "dimension of " + c.text);
        const std::uint64_t horizon = ((std::uint64_t{1} << n) + 1) * program.m();
        const auto trace = simulate(inst.system, horizon);
        reach.check(trace.hit.has_value() == truth, std::string(family_name(c.family)) + ": " + c.text);

        const Rational factor = c.family == GadgetFamily::Ceil ? Rational(10, 11) : Rational(11, 10);
        try {
            const auto p = perturb(inst, program, factor);
            scaled.check(simulate(p.system, horizon).states == trace.states, c.text);
        } catch (const Error& e) {
            scaled.check(false, c.text + ": " + e.what());
        }
    }
    std::ostringstream s2;
    s2 << cases.size() << " formulas (n=2 exhaustive up to 3 operators, seeded n=2/n=4 up to 6), " << true_count
       << " true";
    return {reach.result(s2.str()), scaled.result("factor 11/10 (10/11 for the ceil family)")};
}

// ---------------------------------------------------------------------------
// 4. hyperbolic oracle equivalence

JordanBlock real_block(std::int64_t size, const Rational& lambda)
{
    return JordanBlock{size, abs_of(lambda), lambda < 0 ? Angle(1, 1) : Angle()};
}

Result hyperbolic_oracle(std::mt19937_64& rng)
{
    Tally t;
    const Rational moduli[] = {Rational(1, 3), Rational(1, 2), 2, 3};
    const RealRounding kinds[] = {RealRounding::Floor, RealRounding::MinimalErrorUp, RealRounding::Truncate};
    std::uniform_int_distribution<int> coord(-10, 10);
    std::uniform_int_distribution<int> pick(0, 3);
    std::uniform_int_distribution<int> dim(1, 3);
    int reached = 0;
    for (int i = 0; i < 200; ++i) {
        const std::int64_t d = dim(rng);
        Rational lambda = moduli[pick(rng)];
        if (pick(rng) == 0) {
            lambda = -lambda;
        }
        std::vector<ComplexValue> x;
        std::vector<ComplexValue> y;
        for (std::int64_t k = 0; k < d; ++k) {
            x.push_back(Cartesian{coord(rng), 0});
            y.push_back(Cartesian{coord(rng), 0});
        }
        const auto spec = RoundingSpec::argand(kinds[i % 3], 1);
        JnfSystem sys({real_block(d, lambda)}, x, y, spec);
        if (i % 3 == 0) {
            const auto probe = simulate(sys, 1 + i % 4);
            std::vector<ComplexValue> hit;
            for (const auto& p : probe.states.back().points) {
                hit.push_back(Cartesian{std::get<ArgandPoint>(p).re, 0});
            }
            sys = JnfSystem({real_block(d, lambda)}, x, hit, spec);
        }
        const auto table = hyperbolic_bounds(sys).front();
        const Rational gap = abs_of(abs_of(lambda) - 1);
        Rational ratio = 1;
        for (std::int64_t k = 0; k < d; ++k) {
            ratio *= 2 / gap;
        }
        for (const auto& c : table.c) {
            t.check(c > 0 && c <= table.ell * (d + 1) * (1 + ratio), "radius bound, instance " + std::to_string(i));
        }
        const auto verdict = decide_jnf(sys);
        BruteForceOptions o;
        o.ball_bound = *std::max_element(table.c.begin(), table.c.end());
        o.step_bound = table.step_bound;
        const auto oracle = brute_force_decide(sys, o);
        bool same = is_reached(verdict) == is_reached(oracle);
        if (same && is_reached(verdict)) {
            ++reached;
            same = std::get<Reached>(verdict).step == std::get<Reached>(oracle).step;
        }
        t.check(same, "verdict mismatch, instance " + std::to_string(i) + " (" + describe(verdict) + " vs " +
                          describe(oracle) + ")");
    }
    return t.result("200 instances, " + std::to_string(reached) + " reached");
}

// ---------------------------------------------------------------------------
// 5. Example 9

Result example_nine()
{
    Tally t;
    std::ostringstream summary;
    for (std::int64_t d : {2, 3}) {
        std::vector<ComplexValue> x;
        std::vector<ComplexValue> y;
        for (std::int64_t k = 0; k < d; ++k) {
            x.push_back(PolarValue{Rational(3 + d - k), Angle()});
            y.push_back(PolarValue{0, Angle()});
        }
        const JnfSystem sys({JordanBlock{d, 1, Angle(1, 2)}}, x, y,
                            RoundingSpec::polar(RealRounding::MinimalErrorUp, 2, 1));
        std::unordered_set<State, StateHash> seen;
        std::vector<Rational> top(static_cast<std::size_t>(d), Rational(0));
        State s = sys.initial();
        const std::uint64_t limit = 10000000;
        std::uint64_t step = 0;
        bool periodic = false;
        for (; step <= limit; ++step) {
            for (std::int64_t k = 0; k < d; ++k) {
                top[k] = std::max(top[k], std::get<PolarPoint>(s.points[k]).modulus);
            }
            if (!seen.insert(s).second) {
                periodic = true;
                break;
            }
            s = sys.step(s);
        }
        t.check(periodic, "d=" + std::to_string(d) + " not periodic within 10^7 steps");
        summary << "d=" << d << ": periodic after " << step << " steps, maxima";
        for (std::int64_t k = 1; k <= d; ++k) {
            Integer expected = 4;
            for (std::int64_t j = 0; j < d - k; ++j) {
                expected *= expected;
            }
            summary << " " << to_string(top[k - 1]);
            t.check(top[k - 1] == Rational(expected), "d=" + std::to_string(d) + " dim " + std::to_string(k) +
                                                          " max " + to_string(top[k - 1]) + ", expected " +
                                                          expected.get_str());
        }
        summary << (d == 2 ? "; " : "");
    }
    return t.result(summary.str());
}

// ---------------------------------------------------------------------------
// 6. polar oracle equivalence

Result polar_oracle(std::mt19937_64& rng)
{
    Tally t;
    const Angle angles[] = {Angle(1, 2), Angle(1, 3), Angle(1, 4)};
    std::uniform_int_distribution<int> mod(0, 8);
    std::uniform_int_distribution<int> pick(0, 2);
    std::uniform_int_distribution<int> idx(0, 7);
    int reached = 0;
    for (int i = 0; i < 100; ++i) {
        const std::int64_t d = 1 + pick(rng) % 2;
        const std::int64_t r = 2 + pick(rng);
        const auto kind = i % 2 == 0 ? RealRounding::Floor : RealRounding::MinimalErrorUp;
        const auto spec = RoundingSpec::polar(kind, r, 1);
        std::vector<ComplexValue> x;
        std::vector<ComplexValue> y;
        for (std::int64_t k = 0; k < d; ++k) {
            x.push_back(PolarValue{mod(rng), Angle(idx(rng) % (2 * r), r)});
            y.push_back(PolarValue{mod(rng), Angle(idx(rng) % (2 * r), r)});
        }
        const JordanBlock block{d, 1, angles[pick(rng)]};
        JnfSystem sys({block}, x, y, spec);
        if (i % 3 == 0) {
            const auto probe = simulate(sys, 1 + i % 7);
            std::vector<ComplexValue> hit;
            for (const auto& p : probe.states.back().points) {
                const auto& pp = std::get<PolarPoint>(p);
                hit.push_back(PolarValue{pp.modulus, Angle(pp.index, r)});
            }
            sys = JnfSystem({block}, x, hit, spec);
        }
        try {
            const auto verdict = decide_polar(sys);
            const auto bounds = resource_bounds(sys, 0);
            BruteForceOptions o;
            o.ball_bound = 2 * *std::max_element(bounds.u.begin(), bounds.u.end()) + bounds.y_s;
            o.step_bound = bounds.exact ? bounds.t.front() * 4 * r : Integer(10000000);
            const auto oracle = brute_force_decide(sys, o);
            bool same = is_reached(verdict) == is_reached(oracle);
            if (same && is_reached(verdict)) {
                ++reached;
                same = std::get<Reached>(verdict).step == std::get<Reached>(oracle).step;
            }
            t.check(same, "instance " + std::to_string(i) + " (" + describe(verdict) + " vs " + describe(oracle) +
                              ")");
        } catch (const Error& e) {
            // internal errors are the runtime-checked invariants
            t.check(false, "instance " + std::to_string(i) + ": " + e.what());
        }
    }
    return t.result("100 instances, " + std::to_string(reached) + " reached, invariants asserted at every step");
}

// ---------------------------------------------------------------------------
// 7. truncation / expansion oracle equivalence

Result argand_oracle(std::mt19937_64& rng)
{
    Tally t;
    const Angle angles[] = {Angle(1, 4), Angle(1, 3), Angle(1, 2)};
    std::uniform_int_distribution<int> c(-8, 8);
    std::uniform_int_distribution<int> pick(0, 2);
    int reached = 0;
    for (int i = 0; i < 100; ++i) {
        const std::int64_t d = 1 + pick(rng) % 2;
        const auto kind = i % 2 == 0 ? RealRounding::Truncate : RealRounding::Expand;
        const auto spec = RoundingSpec::argand(kind, 1);
        std::vector<ComplexValue> x;
        std::vector<ComplexValue> y;
        for (std::int64_t k = 0; k < d; ++k) {
            x.push_back(Cartesian{c(rng), c(rng)});
            y.push_back(Cartesian{c(rng), c(rng)});
        }
        const JordanBlock block{d, 1, angles[pick(rng)]};
        JnfSystem sys({block}, x, y, spec);
        if (i % 3 == 0) {
            const auto probe = simulate(sys, 1 + i % 5);
            std::vector<ComplexValue> hit;
            for (const auto& p : probe.states.back().points) {
                const auto& ap = std::get<ArgandPoint>(p);
                hit.push_back(Cartesian{ap.re, ap.im});
            }
            sys = JnfSystem({block}, x, hit, spec);
        }
        try {
            const auto verdict = kind == RealRounding::Truncate ? decide_truncation(sys) : decide_expansion(sys);
            BruteForceOptions o;
            if (kind == RealRounding::Truncate) {
                const auto b = truncation_bounds(sys, 0);
                o.ball_bound = *std::max_element(b.u.begin(), b.u.end());
                o.step_bound = b.exact ? b.t.front() : Integer(10000000);
            } else {
                o.ball_bound = 100000;
                o.step_bound = 10000000;
            }
            const auto oracle = brute_force_decide(sys, o);
            bool same = is_reached(verdict) == is_reached(oracle);
            if (same && is_reached(verdict)) {
                ++reached;
                same = std::get<Reached>(verdict).step == std::get<Reached>(oracle).step;
            }
            t.check(same, "instance " + std::to_string(i) + " (" + describe(verdict) + " vs " + describe(oracle) +
                              ")");
        } catch (const Error& e) {
            t.check(false, "instance " + std::to_string(i) + ": " + e.what());
        }
    }
    return t.result("100 instances, " + std::to_string(reached) + " reached, stabilization guard never fired");
}

// ---------------------------------------------------------------------------
// 8. Niven classifier

bool near_one_of(double v, std::initializer_list<double> values)
{
    for (double w : values) {
        if (std::abs(v - w) < 1e-9) {
            return true;
        }
    }
    return false;
}

Result niven_table()
{
    Tally t;
    int angles = 0;
    for (std::int64_t q = 1; q <= 24; ++q) {
        for (std::int64_t p = 0; p < 2 * q; ++p) {
            if (std::gcd(p, q) != 1 && !(p == 0 && q == 1)) {
                continue;
            }
            ++angles;
            const double x = M_PI * static_cast<double>(p) / static_cast<double>(q);
            const auto k = niven_classify(Angle(p, q));
            const std::string at = std::to_string(p) + "/" + std::to_string(q) + " pi";
            t.check(k.sin_rational == near_one_of(std::sin(x), {0, 0.5, -0.5, 1, -1}), "sin " + at);
            t.check(k.cos_rational == near_one_of(std::cos(x), {0, 0.5, -0.5, 1, -1}), "cos " + at);
            t.check(k.axis_multiple_90 == (2 * p % q == 0), "axis " + at);
            if (std::abs(std::cos(x)) > 1e-9) {
                t.check(k.tan_rational.has_value() && *k.tan_rational == near_one_of(std::tan(x), {0, 1, -1}),
                        "tan " + at);
            } else {
                t.check(!k.tan_rational.has_value(), "tan undefined " + at);
            }
        }
    }
    return t.result(std::to_string(angles) + " reduced angles p pi/q with q <= 24");
}

// ---------------------------------------------------------------------------
// 9. rotation lab

Result rotation_lab()
{
    Tally t;
    std::ostringstream summary;
    const auto a = RotationAngle::parse("pi/42");
    const auto ra = run_disk(10, a, 1000000);
    t.check(ra.orbits.size() == 317, "(a) start count " + std::to_string(ra.orbits.size()));
    t.check(ra.unresolved.empty(), "(a) unresolved starts");
    summary << "(a) " << ra.orbits.size() << " starts, " << ra.unresolved.size() << " unresolved, max transient "
            << ra.max_transient << ", max period " << ra.max_period;

    const auto d = RotationAngle::parse("pi/14");
    const auto rd = run_disk(20, d, 1000000);
    t.check(rd.orbits.size() == disk_point_count(20), "(d) start count");
    t.check(rd.unresolved.empty(), "(d) unresolved starts");
    summary << "; (d) " << rd.orbits.size() << " starts, " << rd.unresolved.size() << " unresolved";

    std::ostringstream csv1;
    std::ostringstream csv2;
    emit_grid(ra, csv1);
    emit_grid(run_disk(10, a, 1000000), csv2);
    t.check(csv1.str() == csv2.str(), "CSV differs between runs");

    // exact and interval paths, 10^4 steps per start
    std::size_t compared = 0;
    for (const auto& [theta, radius] : {std::pair<const char*, std::int64_t>{"pi/42", 10}, {"pi/91", 15}, {"pi/14", 20}}) {
        const auto angle = RotationAngle::parse(theta);
        Rotator exact(angle, RotationPath::Exact);
        Rotator interval(angle, RotationPath::Interval);
        for (std::int64_t x = -radius; x <= radius; x += 3) {
            for (std::int64_t y = -radius; y <= radius; y += 3) {
                if (x * x + y * y > radius * radius) {
                    continue;
                }
                const auto e = run_orbit({x, y}, exact, 10000, false);
                const auto i = run_orbit({x, y}, interval, 10000, false);
                t.check(!i.error.has_value(), std::string(theta) + " interval tie");
                t.check(e.transient == i.transient && e.period == i.period,
                        std::string(theta) + " paths disagree at (" + std::to_string(x) + "," + std::to_string(y) +
                            ")");
                ++compared;
            }
        }
    }
    summary << "; CSV deterministic; " << compared << " orbits compared across paths";
    return t.result(summary.str());
}

// ---------------------------------------------------------------------------
// 10. numerics

CycloNum random_element(std::mt19937_64& rng, std::int64_t order)
{
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 7);
    std::uniform_int_distribution<std::int64_t> k(0, order - 1);
    CycloNum z(order);
    for (int t = 0; t < 3; ++t) {
        z += CycloNum::zeta_power(k(rng), order) * make_rational(num(rng), den(rng));
    }
    return z;
}

Result numerics(std::mt19937_64& rng)
{
    Tally t;
    const std::int64_t orders[] = {4, 8, 12, 20, 24, 28, 84};
    constexpr int kCases = 10000;
    for (int i = 0; i < kCases; ++i) {
        const auto order = orders[i % 7];
        const auto a = random_element(rng, order);
        const auto b = random_element(rng, order);
        const auto c = random_element(rng, order);
        const bool laws = (a + b) + c == a + (b + c) && (a * b) * c == a * (b * c) && a * (b + c) == a * b + a * c &&
                          a * b == b * a && a + CycloNum(order) == a && a * CycloNum::from_rational(1, order) == a &&
                          a - a == CycloNum(order);
        t.check(laws, "field laws, order " + std::to_string(order));
    }
    for (int i = 0; i < kCases; ++i) {
        const auto z = random_element(rng, 24);
        const auto r = z + z.conj();
        const Rational g = make_rational(1 + i % 5, 1 + i % 3);
        const Rational f = certified_floor(r, g);
        const bool ok = certified_floor(CycloNum::from_rational(f, 24), g) == f &&
                        compare_real(CycloNum::from_rational(f, 24), r) <= 0 &&
                        compare_real(CycloNum::from_rational(f + g, 24), r) > 0 && Rational(f / g).get_den() == 1;
        t.check(ok, "certified_floor idempotence");
        const Rational grid = g * (i % 41 - 20);
        t.check(certified_floor(CycloNum::from_rational(grid, 24), g) == grid, "grid fixpoint");
    }
    int zero = 0;
    for (int i = 0; i < kCases; ++i) {
        const auto z = random_element(rng, orders[i % 7]);
        const auto r = z + z.conj();
        const double f = r.approx().real();
        const int s = sign_of_real(r);
        if (std::abs(f) > 1e-9) {
            t.check(s == (f > 0 ? 1 : -1), "sign disagrees with floating point");
        } else {
            ++zero;
            // near zero the symbolic test decides; it must agree with exact cancellation
            t.check((s == 0) == r.is_zero(), "sign zero test");
        }
        t.check(sign_of_real(-r) == -s, "sign antisymmetry");
    }
    return t.result("3 x 10^4 randomized cases, " + std::to_string(zero) + " near-zero signs decided symbolically");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance criteria"};
    std::uint64_t seed = 20240611;
    app.add_option("--seed", seed, "Seed for the randomized criteria")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    std::cout << "seed " << seed << "; all tolerances exact\n";
    int failures = 0;
    auto report = [&](int n, const char* title, const std::function<Result()>& run) {
        const auto start = std::chrono::steady_clock::now();
        Result r;
        try {
            r = run();
        } catch (const std::exception& e) {
            r = {false, std::string("aborted: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += r.pass ? 0 : 1;
        std::cout << "criterion " << n << ": " << (r.pass ? "PASS" : "FAIL") << " - " << title << " - " << r.detail
                  << " (" << std::fixed << std::setprecision(1) << secs << " s)" << std::endl;
    };

    std::mt19937_64 rng(seed);
    std::pair<Result, Result> qbf;
    report(1, "gadget truth tables", gadget_tables);
    report(2, "QBF compilation end to end", [&] {
        qbf = qbf_end_to_end(rng);
        return qbf.first;
    });
    report(3, "perturbed instances keep the boolean orbit", [&] { return qbf.second; });
    report(4, "escape-radius decider vs brute force", [&] { return hyperbolic_oracle(rng); });
    report(5, "quarter-turn polar example maxima", example_nine);
    report(6, "polar decider vs brute force", [&] { return polar_oracle(rng); });
    report(7, "truncation/expansion deciders vs brute force", [&] { return argand_oracle(rng); });
    report(8, "rational trigonometric values of rational angles", niven_table);
    report(9, "rounded rotation disks", rotation_lab);
    report(10, "cyclotomic numerics", [&] { return numerics(rng); });
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
    return failures == 0 ? 0 : 1;
}
