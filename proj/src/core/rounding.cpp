#include "roundreach/rounding.hpp"

#include <functional>

namespace roundreach {

const char* rounding_name(RealRounding kind) noexcept
{
    switch (kind) {
    case RealRounding::Floor: return "floor";
    case RealRounding::Ceil: return "ceil";
    case RealRounding::Truncate: return "truncate";
    case RealRounding::Expand: return "expand";
    case RealRounding::MinimalErrorUp: return "minerr";
    }
    return "?";
}

RealRounding parse_rounding_kind(std::string_view name)
{
    for (auto kind : {RealRounding::Floor, RealRounding::Ceil, RealRounding::Truncate, RealRounding::Expand,
                      RealRounding::MinimalErrorUp}) {
        if (name == rounding_name(kind)) {
            return kind;
        }
    }
    fail(ErrorCode::Parse, "unknown rounding kind '" + std::string(name) +
                               "' (expected floor, ceil, truncate, expand or minerr)");
}

RoundingSpec RoundingSpec::argand(RealRounding kind, const Rational& g)
{
    RoundingSpec s;
    s.shape = Shape::Argand;
    s.kind = kind;
    s.g = g;
    s.validate();
    return s;
}

RoundingSpec RoundingSpec::polar(RealRounding modulus_kind, std::int64_t r, const Rational& g)
{
    RoundingSpec s;
    s.shape = Shape::Polar;
    s.kind = modulus_kind;
    s.r = r;
    s.g = g;
    s.validate();
    return s;
}

void RoundingSpec::validate() const
{
    if (sgn(g) <= 0) {
        fail(ErrorCode::InvalidArgument, "granularity must be positive");
    }
    if (shape == Shape::Polar && r < 2) {
        fail(ErrorCode::InvalidArgument, "polar rounding needs R >= 2");
    }
}

std::size_t hash_grid_point(const GridPoint& p)
{
    if (const auto* a = std::get_if<ArgandPoint>(&p)) {
        return hash_rational(a->re) * 31u + hash_rational(a->im);
    }
    const auto& q = std::get<PolarPoint>(p);
    return hash_rational(q.modulus) * 31u + std::hash<std::int64_t>{}(q.index) + 7u;
}

std::string to_string(const GridPoint& p)
{
    if (const auto* a = std::get_if<ArgandPoint>(&p)) {
        return "(" + to_string(a->re) + ", " + to_string(a->im) + ")";
    }
    const auto& q = std::get<PolarPoint>(p);
    return "(" + to_string(q.modulus) + ", #" + std::to_string(q.index) + ")";
}

Rational grid_modulus_sq(const GridPoint& p)
{
    if (const auto* a = std::get_if<ArgandPoint>(&p)) {
        return a->re * a->re + a->im * a->im;
    }
    const auto& q = std::get<PolarPoint>(p);
    return q.modulus * q.modulus;
}

CycloNum grid_value(const GridPoint& p, const RoundingSpec& spec, std::int64_t order)
{
    if (const auto* a = std::get_if<ArgandPoint>(&p)) {
        return CycloNum::from_cartesian(a->re, a->im, order);
    }
    const auto& q = std::get<PolarPoint>(p);
    return embed_polar(q.modulus, Angle(q.index, spec.r), order);
}

namespace {

bool is_multiple(const Rational& x, const Rational& g)
{
    const Rational ratio = x / g;
    return ratio.get_den() == 1;
}

} // namespace

bool is_grid_point(const GridPoint& p, const RoundingSpec& spec)
{
    if (const auto* a = std::get_if<ArgandPoint>(&p)) {
        return spec.shape == Shape::Argand && is_multiple(a->re, spec.g) && is_multiple(a->im, spec.g);
    }
    const auto& q = std::get<PolarPoint>(p);
    return spec.shape == Shape::Polar && sgn(q.modulus) >= 0 && is_multiple(q.modulus, spec.g) &&
           q.index >= 0 && q.index < 2 * spec.r && (sgn(q.modulus) != 0 || q.index == 0);
}

Rational round_real(const Rational& x, RealRounding kind, const Rational& g)
{
    const Rational t = x / g;
    Integer m;
    switch (kind) {
    case RealRounding::Floor: m = floor_of(t); break;
    case RealRounding::Ceil: m = ceil_of(t); break;
    case RealRounding::Truncate: m = sgn(t) >= 0 ? floor_of(t) : ceil_of(t); break;
    case RealRounding::Expand: m = sgn(t) >= 0 ? ceil_of(t) : floor_of(t); break;
    case RealRounding::MinimalErrorUp: m = floor_of(t + Rational(1, 2)); break;
    }
    return Rational(m) * g;
}

namespace {

// Rounded multiple index of Re(t) or Im(t); `t` is already divided by g.
Integer round_part(const CycloNum& t, bool imaginary, RealRounding kind)
{
    auto floor_at = [&](const CycloNum& z, const Rational& shift) {
        return imaginary ? floor_imag_part(z, shift) : floor_real_part(z, shift);
    };
    auto sign = [&]() { return imaginary ? sign_im_minus(t, Rational(0)) : sign_re_minus(t, Rational(0)); };
    switch (kind) {
    case RealRounding::Floor: return floor_at(t, Rational(0));
    case RealRounding::Ceil: return -floor_at(-t, Rational(0));
    case RealRounding::Truncate:
        return sign() >= 0 ? floor_at(t, Rational(0)) : Integer(-floor_at(-t, Rational(0)));
    case RealRounding::Expand:
        return sign() >= 0 ? Integer(-floor_at(-t, Rational(0))) : floor_at(t, Rational(0));
    case RealRounding::MinimalErrorUp: return floor_at(t, Rational(1, 2));
    }
    fail(ErrorCode::Internal, "unknown rounding kind");
}

Integer round_modulus_index(const CycloNum& msq, RealRounding kind, const Rational& g)
{
    const Integer below = floor_sqrt_ratio(msq, g);
    auto square = [&](const Rational& m) -> Rational { return m * m * g * g; };
    switch (kind) {
    case RealRounding::Floor:
    case RealRounding::Truncate: return below;
    case RealRounding::Ceil:
    case RealRounding::Expand:
        return sign_re_minus(msq, square(Rational(below))) == 0 ? below : Integer(below + 1);
    case RealRounding::MinimalErrorUp:
        return sign_re_minus(msq, square(Rational(below) + Rational(1, 2))) >= 0 ? Integer(below + 1) : below;
    }
    fail(ErrorCode::Internal, "unknown rounding kind");
}

} // namespace

Rational round_real(const CycloNum& x, RealRounding kind, const Rational& g)
{
    if (!is_real(x)) {
        fail(ErrorCode::NotReal, "round_real needs a real value");
    }
    if (x.is_rational()) {
        return round_real(x.rational_value(), kind, g);
    }
    return Rational(round_part(x * Rational(1 / g), false, kind)) * g;
}

Rounded round_scalar(const CycloNum& z, const RoundingSpec& spec)
{
    const auto order = z.order();
    if (spec.shape == Shape::Argand) {
        if (z.is_rational()) {
            const Rational re = round_real(z.rational_value(), spec.kind, spec.g);
            return {CycloNum::from_rational(re, order), ArgandPoint{re, Rational(0)}};
        }
        const CycloNum t = z * Rational(1 / spec.g);
        const Rational re = Rational(round_part(t, false, spec.kind)) * spec.g;
        const Rational im = Rational(round_part(t, true, spec.kind)) * spec.g;
        return {CycloNum::from_cartesian(re, im, order), ArgandPoint{re, im}};
    }
    if (z.is_zero()) {
        return {CycloNum(order), PolarPoint{Rational(0), 0}};
    }
    const Integer m = round_modulus_index(modulus_sq(z), spec.kind, spec.g);
    if (m == 0) {
        return {CycloNum(order), PolarPoint{Rational(0), 0}};
    }
    const auto index = nearest_angle_index(z, spec.r);
    const Rational modulus = Rational(m) * spec.g;
    PolarPoint p{modulus, index};
    return {grid_value(p, spec, order), p};
}

std::vector<GridPoint> round_vector(const std::vector<CycloNum>& v, const RoundingSpec& spec)
{
    std::vector<GridPoint> out;
    out.reserve(v.size());
    for (const auto& z : v) {
        out.push_back(round_scalar(z, spec).point);
    }
    return out;
}

Rational effect_bound(const RoundingSpec& spec)
{
    return spec.kind == RealRounding::MinimalErrorUp ? Rational(spec.g / 2) : spec.g;
}

Integer kball_count(const Rational& k, const RoundingSpec& spec)
{
    if (sgn(k) < 0) {
        fail(ErrorCode::InvalidArgument, "ball radius must be nonnegative");
    }
    const Rational scaled = k / spec.g;
    const Integer a = floor_of(scaled);
    if (spec.shape == Shape::Polar) {
        return 1 + a * 2 * spec.r;
    }
    if (a > 100000000) {
        fail(ErrorCode::TooLarge, "ball too large to count exactly");
    }
    const Rational k2 = scaled * scaled;
    Integer total = 0;
    const long rows = a.get_si();
    for (long i = -rows; i <= rows; ++i) {
        const Integer rest = floor_of(k2 - Rational(i) * i);
        Integer b;
        mpz_sqrt(b.get_mpz_t(), rest.get_mpz_t());
        total += 2 * b + 1;
    }
    return total;
}

} // namespace roundreach
