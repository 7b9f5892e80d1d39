#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>

#include "roundreach/qbf.hpp"

using namespace roundreach;

namespace {

const GadgetFamily kFamilies[] = {GadgetFamily::Floor, GadgetFamily::Ceil, GadgetFamily::MinimalError};

ErrorCode code_of(auto&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Internal;
}

std::string random_expr(std::mt19937_64& rng, std::size_t n, int budget)
{
    std::uniform_int_distribution<int> pick(0, 9);
    std::uniform_int_distribution<std::size_t> var(1, n);
    if (budget <= 0 || pick(rng) < 3) {
        return "x" + std::to_string(var(rng));
    }
    const int op = pick(rng) % 3;
    if (op == 0) {
        return "!" + random_expr(rng, n, budget - 1);
    }
    const int left = budget - 1 > 0 ? std::uniform_int_distribution<int>(0, budget - 1)(rng) : 0;
    return "(" + random_expr(rng, n, left) + (op == 1 ? " & " : " | ") + random_expr(rng, n, budget - 1 - left) +
           ")";
}

std::string prefix(std::size_t n)
{
    std::string out;
    for (std::size_t i = 1; i <= n; ++i) {
        out += (i % 2 == 1 ? "forall x" : "exists x") + std::to_string(i) + " ";
    }
    return out + ": ";
}

// Index of the first sweep boundary at which the program state is all ones.
std::optional<std::size_t> sweeps_to_all_ones(const Program& p, std::size_t max_sweeps)
{
    auto state = p.initial();
    for (std::size_t s = 0; s <= max_sweeps; ++s) {
        if (state == p.all_ones()) {
            return s;
        }
        state = p.run_sweep(state);
    }
    return std::nullopt;
}

} // namespace

TEST_CASE("gadget truth tables in every family")
{
    for (auto family : kFamilies) {
        const auto kind = family_rounding(family);
        for (int a = 0; a <= 1; ++a) {
            for (int b = 0; b <= 1; ++b) {
                for (int na = 0; na <= 1; ++na) {
                    for (int nb = 0; nb <= 1; ++nb) {
                        const std::vector<Rational> values{1, a, b};
                        const Operand oa{1, na == 1};
                        const Operand ob{2, nb == 1};
                        const bool va = (a == 1) != (na == 1);
                        const bool vb = (b == 1) != (nb == 1);
                        CHECK(apply_row(gadget_row(GadgetOp::And, family, 0, oa, ob), values, kind) == (va && vb));
                        CHECK(apply_row(gadget_row(GadgetOp::Or, family, 0, oa, ob), values, kind) == (va || vb));
                        CHECK(apply_row(gadget_row(GadgetOp::Not, family, 0, oa), values, kind) == !va);
                        CHECK(apply_row(gadget_row(GadgetOp::Copy, family, 0, oa), values, kind) == va);
                        CHECK(apply_row(gadget_row(GadgetOp::Zero, family, 0, oa), values, kind) == 0);
                    }
                }
            }
        }
    }
    // the minimal-error OR on (0, 0) rounds 1/3 down
    CHECK(apply_row(gadget_row(GadgetOp::Or, GadgetFamily::MinimalError, 0, {1}, {2}), {1, 0, 0},
                    RealRounding::MinimalErrorUp) == 0);
}

TEST_CASE("formula parsing and evaluation")
{
    const auto f_or = parse_qbf("forall x1 exists x2 : (x1 | x2)");
    CHECK(f_or.n() == 2);
    CHECK(f_or.ell() == 1);
    CHECK(f_or.is_canonical());
    CHECK(evaluate_qbf(f_or));
    CHECK_FALSE(evaluate_qbf(parse_qbf("forall x1 exists x2 : (x1 & x2)")));
    CHECK(evaluate_qbf(parse_qbf("forall x1 exists x2 : true")));
    CHECK(evaluate_qbf(parse_qbf("forall x1 exists x2 : !(x1 & !x2)")));

    const auto qd = parse_qdimacs("p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n-1 2 0\n");
    CHECK(evaluate_qbf(qd));
    CHECK(code_of([] { parse_qbf("forall x1 : (x1 |"); }) == ErrorCode::Parse);

    const auto padded = pad_to_canonical(parse_qbf("exists x1 : x1"));
    CHECK(padded.is_canonical());
    CHECK(evaluate_qbf(padded));
}

TEST_CASE("dimension accounting")
{
    CHECK(hardness_dimension(2, 1) == 192);
    for (auto family : kFamilies) {
        const auto f = parse_qbf("forall x1 exists x2 : (x1 | x2)");
        const auto program = lower_qbf_to_program(f, family);
        const auto inst = explode_program_to_matrix(program);
        CHECK(inst.meta.dimension == 192);
        CHECK(inst.system.dimension() == 192);
        CHECK(program.m() == 3 * 2 + 1 + 1);
        CHECK(program.t == 4 * 2 + 15 + 1);
    }
    CHECK(code_of([] { lower_qbf_to_program(parse_qbf("exists x1 forall x2 : x1")); }) ==
          ErrorCode::NonCanonicalPrefix);
}

TEST_CASE("single-instruction program explodes to itself")
{
    Program p;
    p.t = 2;
    p.true_slot = 0;
    p.steps = {{gadget_row(GadgetOp::Copy, GadgetFamily::Floor, 0, {0}), gadget_row(GadgetOp::Not, GadgetFamily::Floor, 0, {1})}};
    const auto inst = explode_program_to_matrix(p);
    CHECK(inst.system.dimension() == 2);
    const auto dense = inst.system.matrix().to_dense();
    CHECK(dense == Matrix({{1, 0}, {1, -1}}));
}

TEST_CASE("programs decide their formulas")
{
    const auto yes = lower_qbf_to_program(parse_qbf("forall x1 exists x2 : (x1 | x2)"));
    CHECK(sweeps_to_all_ones(yes, 5).has_value());
    const auto no = lower_qbf_to_program(parse_qbf("forall x1 exists x2 : (x1 & x2)"));
    CHECK_FALSE(sweeps_to_all_ones(no, 2 * 4).has_value());
    const auto trivial = lower_qbf_to_program(parse_qbf("forall x1 exists x2 : true"));
    CHECK(sweeps_to_all_ones(trivial, 5).has_value());
}

TEST_CASE("matrix orbit, program run and perturbation agree on random formulas")
{
    std::mt19937_64 rng(606);
    int true_count = 0;
    for (int t = 0; t < 36; ++t) {
        const std::size_t n = t < 30 ? 2 : 4;
        const auto family = kFamilies[t % 3];
        const auto f = parse_qbf(prefix(n) + random_expr(rng, n, 1 + t % 5));
        if (f.ell() > 6) {
            continue;
        }
        const bool truth = evaluate_qbf(f);
        true_count += truth ? 1 : 0;
        const auto program = lower_qbf_to_program(f, family);
        const auto inst = explode_program_to_matrix(program);
        const std::size_t m = program.m();
        const std::size_t tt = program.t;
        CHECK(inst.meta.dimension == hardness_dimension(n, f.ell()));

        const std::uint64_t horizon = ((std::uint64_t{1} << n) + 1) * m;
        const auto trace = simulate(inst.system, horizon);
        CHECK(trace.hit.has_value() == truth);

        // copy k mod m carries the program state, all other copies stay zero
        auto state = program.initial();
        for (std::size_t k = 0; k < trace.states.size(); ++k) {
            const auto& v = trace.states[k];
            for (std::size_t c = 0; c < m; ++c) {
                for (std::size_t s = 0; s < tt; ++s) {
                    const Rational& x = v[c * tt + s];
                    CHECK((x == 0 || x == 1));
                    if (c == k % m) {
                        CHECK(x == state[s]);
                    } else {
                        CHECK(x == 0);
                    }
                }
            }
            CHECK(v[(k % m) * tt + program.true_slot] == 1);
            state = program.run_step(k % m, state);
        }

        const Rational factor = family == GadgetFamily::Ceil ? Rational(10, 11) : Rational(11, 10);
        CHECK(perturbation_preserves(program, factor));
        const auto scaled = perturb(inst, program, factor);
        CHECK(scaled.meta.factor == factor);
        const auto scaled_trace = simulate(scaled.system, horizon);
        CHECK(scaled_trace.states == trace.states);
    }
    CHECK(true_count > 0);
}

TEST_CASE("perturbation checks")
{
    const auto f = parse_qbf("forall x1 exists x2 : (x1 | x2)");
    const auto program = lower_qbf_to_program(f);
    const auto inst = explode_program_to_matrix(program);
    CHECK(code_of([&] { perturb(inst, program, 3); }) == ErrorCode::GadgetBroken);
    const auto same = perturb(inst, program, 1);
    CHECK(same.system.matrix().to_dense() == inst.system.matrix().to_dense());

    const auto ceil_program = lower_qbf_to_program(f, GadgetFamily::Ceil);
    CHECK_FALSE(perturbation_preserves(ceil_program, Rational(11, 10)));
    CHECK(perturbation_preserves(ceil_program, Rational(10, 11)));
}
