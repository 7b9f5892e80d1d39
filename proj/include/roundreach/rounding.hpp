#ifndef ROUNDREACH_ROUNDING_HPP
#define ROUNDREACH_ROUNDING_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "roundreach/numerics.hpp"

namespace roundreach {

enum class RealRounding { Floor, Ceil, Truncate, Expand, MinimalErrorUp };

const char* rounding_name(RealRounding kind) noexcept;
RealRounding parse_rounding_kind(std::string_view name);

enum class Shape { Argand, Polar };

/// Argand rounding rounds real and imaginary parts with `kind`; polar rounding
/// rounds the modulus with `kind` and the angle to the nearest multiple of
/// pi/r (ties counterclockwise).
struct RoundingSpec {
    Shape shape = Shape::Argand;
    RealRounding kind = RealRounding::Floor;
    std::int64_t r = 0;
    Rational g = 1;

    static RoundingSpec argand(RealRounding kind, const Rational& g);
    static RoundingSpec polar(RealRounding modulus_kind, std::int64_t r, const Rational& g);

    void validate() const;
    friend bool operator==(const RoundingSpec&, const RoundingSpec&) = default;
};

struct ArgandPoint {
    Rational re;
    Rational im;
    friend bool operator==(const ArgandPoint&, const ArgandPoint&) = default;
};

struct PolarPoint {
    Rational modulus;
    std::int64_t index = 0;
    friend bool operator==(const PolarPoint&, const PolarPoint&) = default;
};

using GridPoint = std::variant<ArgandPoint, PolarPoint>;

std::size_t hash_grid_point(const GridPoint& p);
std::string to_string(const GridPoint& p);

/// Squared modulus of a grid point (always rational).
Rational grid_modulus_sq(const GridPoint& p);
/// The grid point as an element of Q(zeta_order).
CycloNum grid_value(const GridPoint& p, const RoundingSpec& spec, std::int64_t order);
bool is_grid_point(const GridPoint& p, const RoundingSpec& spec);

Rational round_real(const Rational& x, RealRounding kind, const Rational& g);
/// Rounds a real field element.
Rational round_real(const CycloNum& x, RealRounding kind, const Rational& g);

struct Rounded {
    CycloNum value;
    GridPoint point;
};

Rounded round_scalar(const CycloNum& z, const RoundingSpec& spec);
std::vector<GridPoint> round_vector(const std::vector<CycloNum>& v, const RoundingSpec& spec);

/// Delta with |x - [x]| <= Delta per component (Argand) or
/// ||x| - |[x]|| <= Delta (polar, modulus only).
Rational effect_bound(const RoundingSpec& spec);

/// Number of admissible points of modulus at most k.
Integer kball_count(const Rational& k, const RoundingSpec& spec);

} // namespace roundreach

#endif
