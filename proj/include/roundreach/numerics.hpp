#ifndef ROUNDREACH_NUMERICS_HPP
#define ROUNDREACH_NUMERICS_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "roundreach/error.hpp"

namespace roundreach {

using Integer = mpz_class;
// gmpxx keeps mpq_class values canonical (reduced, positive denominator) after
// every arithmetic operation; values built from raw parts are canonicalized in
// make_rational.
using Rational = mpq_class;

Rational make_rational(const Integer& numerator, const Integer& denominator);
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& value);
Integer floor_of(const Rational& value);
Integer ceil_of(const Rational& value);
Rational abs_of(const Rational& value);

/// An angle p*pi/q with 0 <= p < 2q and gcd(p, q) = 1 (or p = 0, q = 1).
class Angle {
public:
    Angle() = default;
    Angle(std::int64_t p, std::int64_t q);

    static Angle pi_over(std::int64_t r) { return Angle(1, r); }
    static Angle from_pi_fraction(const Rational& fraction);
    static Angle parse(std::string_view text);

    std::int64_t p() const noexcept { return p_; }
    std::int64_t q() const noexcept { return q_; }

    /// Coefficient of pi, in [0, 2).
    Rational pi_fraction() const { return make_rational(p_, q_); }
    double radians() const;

    /// Representative of the same undirected angle folded into [0, pi].
    Angle folded() const;
    bool is_multiple_of(const Angle& base) const;

    Angle operator+(const Angle& other) const;
    Angle operator-(const Angle& other) const;
    Angle operator-() const;
    Angle times(std::int64_t k) const;

    friend bool operator==(const Angle&, const Angle&) = default;
    friend bool operator<(const Angle& a, const Angle& b);
    friend bool operator<=(const Angle& a, const Angle& b) { return !(b < a); }
    friend bool operator>(const Angle& a, const Angle& b) { return b < a; }
    friend bool operator>=(const Angle& a, const Angle& b) { return !(a < b); }

    /// "p/q pi" form; "0 pi" for zero.
    std::string to_string() const;

private:
    std::int64_t p_ = 0;
    std::int64_t q_ = 1;
};

std::int64_t euler_phi(std::int64_t n);
std::int64_t lcm_of(std::int64_t a, std::int64_t b);

/// Coefficients (low to high degree) of the n-th cyclotomic polynomial.
const std::vector<std::int64_t>& cyclotomic_polynomial(std::int64_t n);

/// Smallest field order hosting every angle and the polar grid pi/R (r = 0 for
/// no polar grid). The order is always a multiple of 4 so that i is available.
std::int64_t field_order_for(const std::vector<Angle>& angles, std::int64_t r);

/// Element of Q(zeta_L), zeta_L = e^{2 pi i / L}, stored in the power basis
/// reduced modulo the L-th cyclotomic polynomial.
class CycloNum {
public:
    CycloNum() = default;
    explicit CycloNum(std::int64_t order);

    static CycloNum from_rational(const Rational& value, std::int64_t order);
    static CycloNum zeta_power(std::int64_t k, std::int64_t order);
    static CycloNum imaginary_unit(std::int64_t order);
    static CycloNum from_cartesian(const Rational& re, const Rational& im, std::int64_t order);

    std::int64_t order() const noexcept { return order_; }
    const std::vector<Rational>& coefficients() const noexcept { return coeffs_; }

    bool is_zero() const;
    bool is_rational() const;
    /// Requires is_rational().
    const Rational& rational_value() const;

    CycloNum conj() const;
    CycloNum mul_zeta(std::int64_t k) const;

    CycloNum& operator+=(const CycloNum& other);
    CycloNum& operator-=(const CycloNum& other);
    CycloNum& operator*=(const CycloNum& other);
    CycloNum& operator*=(const Rational& scalar);

    friend CycloNum operator+(CycloNum a, const CycloNum& b) { return a += b; }
    friend CycloNum operator-(CycloNum a, const CycloNum& b) { return a -= b; }
    friend CycloNum operator*(CycloNum a, const CycloNum& b) { return a *= b; }
    friend CycloNum operator*(CycloNum a, const Rational& s) { return a *= s; }
    friend CycloNum operator*(const Rational& s, CycloNum a) { return a *= s; }
    CycloNum operator-() const;

    friend bool operator==(const CycloNum& a, const CycloNum& b);

    std::complex<double> approx() const;
    std::size_t hash() const;

private:
    void check_same_order(const CycloNum& other) const;

    std::int64_t order_ = 0;
    std::vector<Rational> coeffs_;
};

struct CycloNumHash {
    std::size_t operator()(const CycloNum& z) const { return z.hash(); }
};

std::size_t hash_rational(const Rational& value);

/// modulus * e^{i angle}; requires 2q | L for angle = p pi / q.
CycloNum embed_polar(const Rational& modulus, const Angle& angle, std::int64_t order);

CycloNum real_part(const CycloNum& z);
CycloNum imag_part(const CycloNum& z);
bool is_real(const CycloNum& z);

/// Exact sign of a real field element. Zero is detected symbolically, nonzero
/// signs by interval evaluation with doubling precision.
int sign_of_real(const CycloNum& z);
/// Signs of Re(z) - offset and Im(z) - offset, for arbitrary z.
int sign_re_minus(const CycloNum& z, const Rational& offset);
int sign_im_minus(const CycloNum& z, const Rational& offset);
int compare_real(const CycloNum& a, const CycloNum& b);

/// floor(Re(z) + shift) and floor(Im(z) + shift).
Integer floor_real_part(const CycloNum& z, const Rational& shift = Rational(0));
Integer floor_imag_part(const CycloNum& z, const Rational& shift = Rational(0));

/// g * m with g*m <= z < g*(m+1), for real z and g > 0.
Rational certified_floor(const CycloNum& z, const Rational& g);

CycloNum modulus_sq(const CycloNum& z);

/// Largest m >= 0 with (m * unit)^2 <= value, for a real nonnegative element.
Integer floor_sqrt_ratio(const CycloNum& value, const Rational& unit);

/// k in [0, 2R) minimising the angular distance between arg(z) and k*pi/R; a
/// tie at exactly half the grid step goes to the counterclockwise neighbour.
std::int64_t nearest_angle_index(const CycloNum& z, std::int64_t r);

/// Index of the half-open sector [k pi/R, (k+1) pi/R) containing arg(z).
std::int64_t angle_sector(const CycloNum& z, std::int64_t r);

} // namespace roundreach

#endif
