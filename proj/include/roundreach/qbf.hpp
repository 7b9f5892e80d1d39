#ifndef ROUNDREACH_QBF_HPP
#define ROUNDREACH_QBF_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "roundreach/linalg.hpp"
#include "roundreach/rounding.hpp"
#include "roundreach/system.hpp"

namespace roundreach {

// ---------------------------------------------------------------------------
// Formulas

enum class ExprKind { Var, Const, Not, And, Or };

struct ExprNode {
    ExprKind kind = ExprKind::Const;
    /// Var: variable index (0-based); Const: 0 or 1.
    std::size_t value = 0;
    std::size_t lhs = 0;
    std::size_t rhs = 0;
};

/// Boolean expression stored as an arena; children precede their parents.
struct BoolExpr {
    std::vector<ExprNode> nodes;
    std::size_t root = 0;

    std::size_t add(ExprNode node);
    bool evaluate(const std::vector<bool>& assignment) const;
    /// Number of And/Or/Not nodes reachable from the root.
    std::size_t operator_count() const;
    std::size_t max_variable() const;
};

enum class Quantifier { ForAll, Exists };

struct QbfFormula {
    /// prefix[i] quantifies variable i.
    std::vector<Quantifier> prefix;
    BoolExpr matrix;
    std::vector<std::string> names;

    std::size_t n() const noexcept { return prefix.size(); }
    std::size_t ell() const { return matrix.operator_count(); }
    /// Strictly alternating, starting with ForAll and ending with Exists.
    bool is_canonical() const;
};

/// `forall x1 exists x2 : (x1 | x2)`; operators ! (or ~), &, |, constants true/false.
QbfFormula parse_qbf(std::string_view text);
/// QDIMACS; free variables are bound existentially outermost.
QbfFormula parse_qdimacs(std::string_view text);
/// Reads either syntax (QDIMACS when the text has a "p cnf" line).
QbfFormula parse_qbf_any(std::string_view text);
std::string to_string(const QbfFormula& formula);

/// Inserts unused variables until the prefix is canonical.
QbfFormula pad_to_canonical(const QbfFormula& formula);

/// Brute force over all assignments; too-large above `limit` variables.
bool evaluate_qbf(const QbfFormula& formula, std::size_t limit = 16);

// ---------------------------------------------------------------------------
// Gadgets

enum class GadgetFamily { Floor, Ceil, MinimalError };

const char* family_name(GadgetFamily family) noexcept;
GadgetFamily parse_family(std::string_view name);
RealRounding family_rounding(GadgetFamily family) noexcept;

enum class GadgetOp { And, Or, Not, Copy, Zero };

/// A slot read either directly or negated (as true - slot).
struct Operand {
    std::size_t slot = 0;
    bool negated = false;
};

/// One instruction row: new value = round(sum coef * slot).
using AffineRow = std::vector<std::pair<std::size_t, Rational>>;

AffineRow gadget_row(GadgetOp op, GadgetFamily family, std::size_t true_slot, Operand a, Operand b = {});

/// round(row . values) with the family's rounding.
Rational apply_row(const AffineRow& row, const std::vector<Rational>& values, RealRounding kind);

// ---------------------------------------------------------------------------
// Programs

struct Program {
    std::size_t t = 0;
    std::size_t true_slot = 0;
    GadgetFamily family = GadgetFamily::Floor;
    std::size_t n = 0;
    std::size_t ell = 0;
    /// steps[i][v] is the row computing variable v in step i + 1.
    std::vector<std::vector<AffineRow>> steps;
    std::vector<std::string> names;
    std::vector<std::string> step_labels;

    std::size_t m() const noexcept { return steps.size(); }
    std::vector<Rational> initial() const;
    std::vector<Rational> all_ones() const;
    std::vector<Rational> run_step(std::size_t step, const std::vector<Rational>& state) const;
    /// All m steps in order.
    std::vector<Rational> run_sweep(std::vector<Rational> state) const;
};

/// The program reaches the all-ones state iff the (canonical) formula is true.
Program lower_qbf_to_program(const QbfFormula& formula, GadgetFamily family = GadgetFamily::Floor);

struct HardnessMeta {
    std::size_t n = 0;
    std::size_t ell = 0;
    std::size_t m = 0;
    std::size_t t = 0;
    std::size_t dimension = 0;
    GadgetFamily family = GadgetFamily::Floor;
    Rational factor = 1;
};

struct HardnessInstance {
    RationalSystem system;
    HardnessMeta meta;
};

/// Block-cyclic system: copy (i+1) mod m <- f_{i+1}(copy i).
HardnessInstance explode_program_to_matrix(const Program& program);

/// Scales every entry by `factor` after checking that each row keeps its
/// value on boolean inputs (gadget-broken otherwise).
HardnessInstance perturb(const HardnessInstance& instance, const Program& program,
                         const Rational& factor = Rational(11, 10));

/// Checks that scaling by `factor` preserves every row of the program on boolean inputs.
bool perturbation_preserves(const Program& program, const Rational& factor);

/// dimension (3n+1+ell)(4n+15+ell)
std::size_t hardness_dimension(std::size_t n, std::size_t ell);

} // namespace roundreach

#endif
