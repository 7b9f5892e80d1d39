#ifndef ROUNDREACH_HYPERBOLIC_HPP
#define ROUNDREACH_HYPERBOLIC_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "roundreach/decide.hpp"
#include "roundreach/linalg.hpp"
#include "roundreach/system.hpp"

namespace roundreach {

/// Escape radii of one Jordan block with |lambda| != 1.
struct RadiusTable {
    /// c[k] bounds dimension k + 1 of the block.
    std::vector<Rational> c;
    Rational ell;
    /// (2 * max c / g)^d, the bounding-hypercube count.
    Integer hypercube;
    /// Steps after which an orbit inside the radii must have repeated.
    Integer step_bound;
};

/// `target` and `initial` hold upper bounds on the coordinate moduli of the block.
RadiusTable radii(const JordanBlock& block, const Rational& delta, const std::vector<Rational>& target,
                  const std::vector<Rational>& initial, const Rational& g);

/// Radii for every block of a system (all blocks need |lambda| != 1).
std::vector<RadiusTable> hyperbolic_bounds(const JnfSystem& system);

Verdict decide_hyperbolic_jnf(const JnfSystem& system, const DecideOptions& options = {});

/// z -> P^{-1} [P z] with its effect bound.
struct ConjugatedRounding {
    Matrix p;
    Matrix p_inv;
    RoundingSpec spec;
    Rational delta;

    RationalVector apply(const RationalVector& z) const;
};

ConjugatedRounding conjugate_rounding(const Matrix& p, const RoundingSpec& spec);

struct JordanForm {
    Matrix p;
    Matrix j;
    /// (eigenvalue, block size) in the order the blocks appear in j.
    std::vector<std::pair<Rational, std::int64_t>> blocks;
};

/// Exact Jordan form of a matrix whose eigenvalues are all rational.
JordanForm jnf_rational(const Matrix& m);

/// Splits a Jordan matrix into its blocks; validation-failed if j is not in Jordan form.
std::vector<std::pair<Rational, std::int64_t>> jordan_blocks_of(const Matrix& j);

struct GeneralBounds {
    ConjugatedRounding rounding;
    std::vector<std::pair<Rational, std::int64_t>> blocks;
    std::vector<RadiusTable> tables;
    Integer step_bound;
};

GeneralBounds hyperbolic_general_bounds(const RationalSystem& system, const Matrix& p, const Matrix& j);

Verdict decide_hyperbolic_general(const RationalSystem& system, const Matrix& p, const Matrix& j,
                                  const DecideOptions& options = {});
/// Computes the Jordan form with jnf_rational first.
Verdict decide_hyperbolic_general(const RationalSystem& system, const DecideOptions& options = {});

} // namespace roundreach

#endif
