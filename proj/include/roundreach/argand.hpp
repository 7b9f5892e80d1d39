#ifndef ROUNDREACH_ARGAND_HPP
#define ROUNDREACH_ARGAND_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "roundreach/decide.hpp"
#include "roundreach/system.hpp"

namespace roundreach {

/// Which trigonometric values of a rational multiple of pi are rational.
struct AngleClass {
    bool sin_rational = false;
    bool cos_rational = false;
    /// Absent when cos = 0.
    std::optional<bool> tan_rational;
    bool axis_multiple_90 = false;

    friend bool operator==(const AngleClass&, const AngleClass&) = default;
};

AngleClass niven_classify(const Angle& angle);

struct TruncationBounds {
    std::vector<Integer> t;
    std::vector<Rational> u;
    Rational i_s;
    Rational f;
    /// U_{d-j} <= (F * max(1, i_s))^((d+1)^j) for every j.
    bool closed_form_holds = true;
    bool exact = true;
};

TruncationBounds truncation_bounds(std::int64_t d, const Rational& i_s, const Rational& g);
TruncationBounds truncation_bounds(const JnfSystem& system, std::size_t block);

/// Argand truncation (modulus never grows under rounding).
Verdict decide_truncation(const JnfSystem& system, const DecideOptions& options = {});
/// Argand expansion (modulus never shrinks under rounding).
Verdict decide_expansion(const JnfSystem& system, const DecideOptions& options = {});

} // namespace roundreach

#endif
