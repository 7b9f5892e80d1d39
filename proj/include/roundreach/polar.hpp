#ifndef ROUNDREACH_POLAR_HPP
#define ROUNDREACH_POLAR_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "roundreach/decide.hpp"
#include "roundreach/system.hpp"

namespace roundreach {

/// Phases of the lower dimension k-1 while dimension k only rotates:
/// obtuse phi after a non-decreasing step, obtuse phi after a decreasing
/// step, and phi <= pi/2.
enum class PhiMode { Increasing, Decreasing, Small };

const char* phi_mode_name(PhiMode mode) noexcept;

struct DimensionPhase {
    std::size_t dim = 0;
    std::optional<Angle> phi;
    PhiMode mode = PhiMode::Small;
    Integer steps_in_state = 0;
};

/// Angle in [0, pi] between lambda * x_{k-1} and x_k of one block (k local,
/// 2 <= k <= block size); nullopt if either vector is zero.
std::optional<Angle> phi(const JnfSystem& system, const State& state, std::size_t block, std::size_t k);

/// Whether the angle between lambda x_{k-1} + x_k and lambda x_{k-1} is at most
/// pi/2 (decided exactly; the angle itself is generally irrational).
bool gamma_at_most_right_angle(const JnfSystem& system, const State& state, std::size_t block, std::size_t k);
double gamma_approx(const JnfSystem& system, const State& state, std::size_t block, std::size_t k);

/// Dimension k-1 repeats phi and its modulus from `before` to `after`.
bool just_rotating_check(const JnfSystem& system, const State& before, const State& after, std::size_t block,
                         std::size_t k);

/// The divergence rule for dimension k-1: a modulus-increasing rounded step
/// with gamma <= pi/2 taken from a modulus at or above the target modulus.
bool stop_fires(const Rational& modulus_before, const Rational& modulus_after, bool gamma_small,
                const Rational& target_modulus);
std::optional<Certificate> stop_check(const JnfSystem& system, const State& before, const State& after,
                                      std::size_t block, std::size_t k);

struct ResourceBounds {
    /// t[k-1] and u[k-1] belong to dimension k.
    std::vector<Integer> t;
    std::vector<Rational> u;
    Rational i_s;
    Rational y_s;
    Rational f;
    /// U_{d-j} <= (F * max(1, i_s))^(2^j) for every j.
    bool closed_form_holds = true;
    /// False when the recurrences are too large to evaluate.
    bool exact = true;
};

ResourceBounds resource_bounds(std::int64_t d, const Rational& i_s, const Rational& y_s, std::int64_t r,
                               const Rational& g);
ResourceBounds resource_bounds(const JnfSystem& system, std::size_t block);

/// ceil((pi/4) / theta) * theta + theta / 2 <= pi/2 for theta = pi/r.
bool small_angle_helper_holds(std::int64_t r);

/// Polar rounding with R >= 2; all blocks decided in lock step.
Verdict decide_polar(const JnfSystem& system, const DecideOptions& options = {});

} // namespace roundreach

#endif
