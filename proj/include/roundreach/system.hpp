#ifndef ROUNDREACH_SYSTEM_HPP
#define ROUNDREACH_SYSTEM_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "roundreach/linalg.hpp"
#include "roundreach/numerics.hpp"
#include "roundreach/rounding.hpp"

namespace roundreach {

struct Cartesian {
    Rational re;
    Rational im;
    friend bool operator==(const Cartesian&, const Cartesian&) = default;
};

struct PolarValue {
    Rational modulus;
    Angle angle;
    friend bool operator==(const PolarValue&, const PolarValue&) = default;
};

using ComplexValue = std::variant<Cartesian, PolarValue>;

/// size x size block with eigenvalue modulus * e^{i angle} on the diagonal and
/// ones on the superdiagonal.
struct JordanBlock {
    std::int64_t size = 1;
    Rational modulus = 1;
    Angle angle;
    friend bool operator==(const JordanBlock&, const JordanBlock&) = default;
};

struct State {
    std::vector<CycloNum> values;
    std::vector<GridPoint> points;
    friend bool operator==(const State& a, const State& b) { return a.points == b.points; }
};

struct StateHash {
    std::size_t operator()(const State& s) const;
};

class JnfSystem {
public:
    JnfSystem(std::vector<JordanBlock> blocks, std::vector<ComplexValue> initial,
              std::vector<ComplexValue> target, RoundingSpec spec);

    const std::vector<JordanBlock>& blocks() const noexcept { return blocks_; }
    const RoundingSpec& spec() const noexcept { return spec_; }
    std::int64_t order() const noexcept { return order_; }
    std::size_t dimension() const noexcept { return initial_.values.size(); }
    std::size_t block_offset(std::size_t b) const { return offsets_[b]; }

    const std::vector<ComplexValue>& raw_initial() const noexcept { return raw_initial_; }
    const std::vector<ComplexValue>& raw_target() const noexcept { return raw_target_; }
    /// [x] and [y].
    const State& initial() const noexcept { return initial_; }
    const State& target() const noexcept { return target_; }

    State make_state(const std::vector<GridPoint>& points) const;
    State step(const State& s) const;
    /// The exact (unrounded) image of one block coordinate.
    CycloNum image(const State& s, std::size_t coordinate) const;

private:
    std::vector<JordanBlock> blocks_;
    std::vector<ComplexValue> raw_initial_;
    std::vector<ComplexValue> raw_target_;
    RoundingSpec spec_;
    std::int64_t order_ = 4;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> block_of_;
    std::vector<std::int64_t> zeta_exponent_;
    State initial_;
    State target_;
};

/// A rational matrix system with real Argand rounding.
class RationalSystem {
public:
    RationalSystem(RowSparseMatrix matrix, RationalVector initial, RationalVector target, RoundingSpec spec);

    const RowSparseMatrix& matrix() const noexcept { return matrix_; }
    const RoundingSpec& spec() const noexcept { return spec_; }
    std::size_t dimension() const noexcept { return matrix_.size(); }
    const RationalVector& raw_initial() const noexcept { return raw_initial_; }
    const RationalVector& raw_target() const noexcept { return raw_target_; }
    const RationalVector& initial() const noexcept { return initial_; }
    const RationalVector& target() const noexcept { return target_; }

    RationalVector round(const RationalVector& v) const;
    RationalVector step(const RationalVector& v) const;

private:
    RowSparseMatrix matrix_;
    RationalVector raw_initial_;
    RationalVector raw_target_;
    RoundingSpec spec_;
    RationalVector initial_;
    RationalVector target_;
};

struct RationalVectorHash {
    std::size_t operator()(const RationalVector& v) const;
};

// ---------------------------------------------------------------------------
// Verdicts

struct CycleDetected {
    Integer step_bound;
};
/// `dimension` is 1-based over the whole state vector.
struct EscapedRadius {
    std::size_t dimension = 0;
    Rational radius;
};
struct DivergedPastTarget {
    std::size_t dimension = 0;
};
struct StabilizedMismatch {
    std::size_t dimension = 0;
};

using Certificate = std::variant<CycleDetected, EscapedRadius, DivergedPastTarget, StabilizedMismatch>;

struct Reached {
    std::uint64_t step = 0;
};

struct NotReached {
    Certificate certificate;
    std::uint64_t steps_simulated = 0;
};

using Verdict = std::variant<Reached, NotReached>;

bool is_reached(const Verdict& v);
std::string describe(const Verdict& v);
const char* certificate_name(const Certificate& c);

// ---------------------------------------------------------------------------
// Reference semantics

struct Trace {
    std::vector<State> states;
    std::optional<std::uint64_t> hit;
};

struct RationalTrace {
    std::vector<RationalVector> states;
    std::optional<std::uint64_t> hit;
};

/// trace[0] = [x], trace[i+1] = step(trace[i]); stops at the first target hit.
Trace simulate(const JnfSystem& system, std::uint64_t max_steps);
RationalTrace simulate(const RationalSystem& system, std::uint64_t max_steps);

struct BruteForceOptions {
    /// NotReached(EscapedRadius) once some coordinate modulus strictly exceeds this.
    Rational ball_bound;
    /// NotReached(CycleDetected) once more than this many steps were taken.
    Integer step_bound;
    /// Maximum number of stored states for repeat detection (0 = counter only).
    std::size_t memory_budget = std::size_t{1} << 20;
};

Verdict brute_force_decide(const JnfSystem& system, const BruteForceOptions& options);
Verdict brute_force_decide(const RationalSystem& system, const BruteForceOptions& options);

} // namespace roundreach

#endif
