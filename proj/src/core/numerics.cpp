#include "roundreach/numerics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>

#include "interval.hpp"

namespace roundreach {

using detail::Part;

const char* error_code_name(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::Parse: return "parse-error";
    case ErrorCode::OrderMismatch: return "order-mismatch";
    case ErrorCode::NotReal: return "not-real";
    case ErrorCode::ZeroInput: return "zero-input";
    case ErrorCode::ModulusOne: return "modulus-one";
    case ErrorCode::Singular: return "singular";
    case ErrorCode::ValidationFailed: return "validation-failed";
    case ErrorCode::NonrationalSpectrum: return "nonrational-spectrum";
    case ErrorCode::UnsupportedAngle: return "unsupported-angle";
    case ErrorCode::UnsupportedCombination: return "unsupported-combination";
    case ErrorCode::GadgetBroken: return "gadget-broken";
    case ErrorCode::NonCanonicalPrefix: return "non-canonical-prefix";
    case ErrorCode::TooLarge: return "too-large";
    case ErrorCode::UndecidableTie: return "undecidable-tie";
    case ErrorCode::Io: return "io-error";
    case ErrorCode::Internal: return "internal-error";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Rationals

Rational make_rational(const Integer& numerator, const Integer& denominator)
{
    if (denominator == 0) {
        fail(ErrorCode::InvalidArgument, "zero denominator");
    }
    Rational r(numerator, denominator);
    r.canonicalize();
    return r;
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

bool all_digits(std::string_view s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

} // namespace

Rational parse_rational(std::string_view text)
{
    auto s = trim(text);
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    Rational value;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = s.substr(0, slash);
        auto den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) {
            fail(ErrorCode::Parse, "malformed rational '" + std::string(text) + "'");
        }
        value = make_rational(Integer(std::string(num), 10), Integer(std::string(den), 10));
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        auto whole = s.substr(0, dot);
        auto frac = s.substr(dot + 1);
        if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
            (whole.empty() && frac.empty())) {
            fail(ErrorCode::Parse, "malformed rational '" + std::string(text) + "'");
        }
        Integer scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        Integer digits(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
        value = make_rational(digits, scale);
    } else {
        if (!all_digits(s)) {
            fail(ErrorCode::Parse, "malformed rational '" + std::string(text) + "'");
        }
        value = Rational(Integer(std::string(s), 10));
    }
    return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& value)
{
    return value.get_str();
}

Integer floor_of(const Rational& value)
{
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
    return r;
}

Integer ceil_of(const Rational& value)
{
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
    return r;
}

Rational abs_of(const Rational& value)
{
    return sgn(value) < 0 ? Rational(-value) : value;
}

std::size_t hash_rational(const Rational& value)
{
    auto mix = [](std::size_t seed, std::size_t v) {
        return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
    };
    std::size_t h = 0;
    for (auto z : {value.get_num_mpz_t(), value.get_den_mpz_t()}) {
        h = mix(h, static_cast<std::size_t>(mpz_sgn(z) + 2));
        const auto limbs = mpz_size(z);
        for (std::size_t i = 0; i < limbs; ++i) {
            h = mix(h, static_cast<std::size_t>(mpz_getlimbn(z, static_cast<mp_size_t>(i))));
        }
    }
    return h;
}

// ---------------------------------------------------------------------------
// Angles

namespace {

std::int64_t checked_int64(const Integer& v, const char* what)
{
    if (!v.fits_slong_p()) {
        fail(ErrorCode::TooLarge, std::string(what) + " does not fit in 64 bits");
    }
    return v.get_si();
}

} // namespace

Angle::Angle(std::int64_t p, std::int64_t q)
{
    if (q <= 0) {
        fail(ErrorCode::InvalidArgument, "angle denominator must be positive");
    }
    const std::int64_t period = 2 * q;
    p %= period;
    if (p < 0) {
        p += period;
    }
    if (p == 0) {
        p_ = 0;
        q_ = 1;
        return;
    }
    const auto g = std::gcd(p, q);
    p_ = p / g;
    q_ = q / g;
}

Angle Angle::from_pi_fraction(const Rational& fraction)
{
    return Angle(checked_int64(fraction.get_num(), "angle numerator"),
                 checked_int64(fraction.get_den(), "angle denominator"));
}

Angle Angle::parse(std::string_view text)
{
    auto s = trim(text);
    if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
        auto coeff = trim(s.substr(0, s.size() - 2));
        if (!coeff.empty() && coeff.back() == '*') {
            coeff = trim(coeff.substr(0, coeff.size() - 1));
        }
        if (coeff.empty() || coeff == "+") {
            return Angle(1, 1);
        }
        if (coeff == "-") {
            return Angle(-1, 1);
        }
        return from_pi_fraction(parse_rational(coeff));
    }
    if (s.size() > 3 && s.substr(0, 3) == "pi/") {
        auto den = trim(s.substr(3));
        if (!all_digits(den)) {
            fail(ErrorCode::Parse, "malformed angle '" + std::string(text) + "'");
        }
        return from_pi_fraction(make_rational(1, Integer(std::string(den), 10)));
    }
    if (s == "0") {
        return Angle();
    }
    fail(ErrorCode::Parse, "malformed angle '" + std::string(text) + "' (expected e.g. '1/4 pi')");
}

double Angle::radians() const
{
    return std::numbers::pi * static_cast<double>(p_) / static_cast<double>(q_);
}

Angle Angle::folded() const
{
    if (p_ > q_) {
        return Angle(2 * q_ - p_, q_);
    }
    return *this;
}

bool Angle::is_multiple_of(const Angle& base) const
{
    if (base.p_ == 0) {
        return p_ == 0;
    }
    // (p/q) / (bp/bq) = p*bq / (q*bp) must be an integer.
    const Integer num = Integer(p_) * Integer(base.q_);
    const Integer den = Integer(q_) * Integer(base.p_);
    return mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()) != 0;
}

Angle Angle::operator+(const Angle& other) const
{
    return from_pi_fraction(pi_fraction() + other.pi_fraction());
}

Angle Angle::operator-(const Angle& other) const
{
    return from_pi_fraction(pi_fraction() - other.pi_fraction());
}

Angle Angle::operator-() const
{
    return Angle(-p_, q_);
}

Angle Angle::times(std::int64_t k) const
{
    const Integer p = (Integer(p_) * k) % Integer(2 * q_);
    return Angle(p.get_si(), q_);
}

bool operator<(const Angle& a, const Angle& b)
{
    return static_cast<__int128>(a.p_) * b.q_ < static_cast<__int128>(b.p_) * a.q_;
}

std::string Angle::to_string() const
{
    if (p_ == 0) {
        return "0 pi";
    }
    if (q_ == 1) {
        return std::to_string(p_) + " pi";
    }
    return std::to_string(p_) + "/" + std::to_string(q_) + " pi";
}

// ---------------------------------------------------------------------------
// Cyclotomic fields

std::int64_t euler_phi(std::int64_t n)
{
    if (n <= 0) {
        fail(ErrorCode::InvalidArgument, "euler_phi needs a positive argument");
    }
    std::int64_t result = n;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) {
                n /= p;
            }
            result -= result / p;
        }
    }
    if (n > 1) {
        result -= result / n;
    }
    return result;
}

std::int64_t lcm_of(std::int64_t a, std::int64_t b)
{
    const auto l = static_cast<__int128>(a / std::gcd(a, b)) * b;
    if (l > (static_cast<__int128>(1) << 40)) {
        fail(ErrorCode::TooLarge, "field order too large");
    }
    return static_cast<std::int64_t>(l);
}

const std::vector<std::int64_t>& cyclotomic_polynomial(std::int64_t n)
{
    static std::recursive_mutex mutex;
    static std::map<std::int64_t, std::vector<std::int64_t>> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) {
        return it->second;
    }
    if (n <= 0) {
        fail(ErrorCode::InvalidArgument, "cyclotomic order must be positive");
    }
    constexpr std::int64_t kMaxOrder = 1 << 14;
    if (n > kMaxOrder) {
        fail(ErrorCode::TooLarge, "cyclotomic order " + std::to_string(n) + " exceeds " +
                                      std::to_string(kMaxOrder));
    }
    // x^n - 1 divided by every Phi_d with d | n, d < n.
    std::vector<std::int64_t> poly(static_cast<std::size_t>(n + 1), 0);
    poly[0] = -1;
    poly[static_cast<std::size_t>(n)] = 1;
    for (std::int64_t d = 1; d < n; ++d) {
        if (n % d != 0) {
            continue;
        }
        const auto& divisor = cyclotomic_polynomial(d);
        const auto dd = divisor.size() - 1;
        std::vector<std::int64_t> quotient(poly.size() - dd, 0);
        for (std::size_t k = poly.size() - 1; k + 1 > dd; --k) {
            const auto c = poly[k];
            quotient[k - dd] = c;
            if (c != 0) {
                for (std::size_t i = 0; i <= dd; ++i) {
                    poly[k - dd + i] -= c * divisor[i];
                }
            }
            if (k == dd) {
                break;
            }
        }
        poly = std::move(quotient);
    }
    auto [it, inserted] = cache.emplace(n, std::move(poly));
    return it->second;
}

std::int64_t field_order_for(const std::vector<Angle>& angles, std::int64_t r)
{
    std::int64_t order = 4;
    for (const auto& a : angles) {
        order = lcm_of(order, 2 * a.q());
    }
    if (r > 0) {
        order = lcm_of(order, 2 * r);
    }
    return order;
}

// ---------------------------------------------------------------------------
// CycloNum

CycloNum::CycloNum(std::int64_t order) : order_(order)
{
    const auto tables = detail::field_tables(order);
    coeffs_.assign(static_cast<std::size_t>(tables->degree), Rational(0));
}

CycloNum CycloNum::from_rational(const Rational& value, std::int64_t order)
{
    CycloNum z(order);
    z.coeffs_[0] = value;
    return z;
}

CycloNum CycloNum::zeta_power(std::int64_t k, std::int64_t order)
{
    CycloNum z(order);
    z.coeffs_[0] = 1;
    return z.mul_zeta(k);
}

CycloNum CycloNum::imaginary_unit(std::int64_t order)
{
    if (order % 4 != 0) {
        fail(ErrorCode::OrderMismatch, "field order is not a multiple of 4");
    }
    return zeta_power(order / 4, order);
}

CycloNum CycloNum::from_cartesian(const Rational& re, const Rational& im, std::int64_t order)
{
    CycloNum z = imaginary_unit(order);
    z *= im;
    z.coeffs_[0] += re;
    return z;
}

bool CycloNum::is_zero() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return sgn(c) == 0; });
}

bool CycloNum::is_rational() const
{
    return std::all_of(coeffs_.begin() + (coeffs_.empty() ? 0 : 1), coeffs_.end(),
                       [](const Rational& c) { return sgn(c) == 0; });
}

const Rational& CycloNum::rational_value() const
{
    if (coeffs_.empty() || !is_rational()) {
        fail(ErrorCode::NotReal, "field element is not rational");
    }
    return coeffs_[0];
}

CycloNum CycloNum::conj() const
{
    const auto tables = detail::field_tables(order_);
    CycloNum out(order_);
    out.coeffs_[0] = coeffs_[0];
    for (std::size_t j = 1; j < coeffs_.size(); ++j) {
        if (sgn(coeffs_[j]) == 0) {
            continue;
        }
        const auto& row = tables->zeta[static_cast<std::size_t>(order_) - j];
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i] != 0) {
                out.coeffs_[i] += coeffs_[j] * row[i];
            }
        }
    }
    return out;
}

CycloNum CycloNum::mul_zeta(std::int64_t k) const
{
    const auto tables = detail::field_tables(order_);
    k %= order_;
    if (k < 0) {
        k += order_;
    }
    if (k == 0) {
        return *this;
    }
    CycloNum out(order_);
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        if (sgn(coeffs_[j]) == 0) {
            continue;
        }
        const auto& row = tables->zeta[static_cast<std::size_t>((static_cast<std::int64_t>(j) + k) % order_)];
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i] != 0) {
                out.coeffs_[i] += coeffs_[j] * row[i];
            }
        }
    }
    return out;
}

void CycloNum::check_same_order(const CycloNum& other) const
{
    if (order_ != other.order_) {
        fail(ErrorCode::OrderMismatch, "field orders differ (" + std::to_string(order_) + " vs " +
                                           std::to_string(other.order_) + ")");
    }
}

CycloNum& CycloNum::operator+=(const CycloNum& other)
{
    check_same_order(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        coeffs_[i] += other.coeffs_[i];
    }
    return *this;
}

CycloNum& CycloNum::operator-=(const CycloNum& other)
{
    check_same_order(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        coeffs_[i] -= other.coeffs_[i];
    }
    return *this;
}

CycloNum& CycloNum::operator*=(const CycloNum& other)
{
    check_same_order(other);
    const auto tables = detail::field_tables(order_);
    const auto n = coeffs_.size();
    if (other.is_rational()) {
        return *this *= other.coeffs_[0];
    }
    if (is_rational()) {
        const Rational s = coeffs_[0];
        *this = other;
        return *this *= s;
    }
    std::vector<Rational> product(2 * n - 1, Rational(0));
    for (std::size_t a = 0; a < n; ++a) {
        if (sgn(coeffs_[a]) == 0) {
            continue;
        }
        for (std::size_t b = 0; b < n; ++b) {
            if (sgn(other.coeffs_[b]) != 0) {
                product[a + b] += coeffs_[a] * other.coeffs_[b];
            }
        }
    }
    const auto& phi = tables->phi;
    for (std::size_t deg = 2 * n - 2; deg >= n; --deg) {
        const Rational c = product[deg];
        if (sgn(c) != 0) {
            for (std::size_t i = 0; i < n; ++i) {
                if (phi[i] != 0) {
                    product[deg - n + i] -= c * phi[i];
                }
            }
        }
    }
    product.resize(n);
    coeffs_ = std::move(product);
    return *this;
}

CycloNum& CycloNum::operator*=(const Rational& scalar)
{
    for (auto& c : coeffs_) {
        c *= scalar;
    }
    return *this;
}

CycloNum CycloNum::operator-() const
{
    CycloNum out = *this;
    for (auto& c : out.coeffs_) {
        c = -c;
    }
    return out;
}

bool operator==(const CycloNum& a, const CycloNum& b)
{
    return a.order_ == b.order_ && a.coeffs_ == b.coeffs_;
}

std::complex<double> CycloNum::approx() const
{
    const auto tables = detail::field_tables(order_);
    double re = 0.0;
    double im = 0.0;
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        if (sgn(coeffs_[j]) == 0) {
            continue;
        }
        const double c = coeffs_[j].get_d();
        re += c * tables->cos_approx[j];
        im += c * tables->sin_approx[j];
    }
    return {re, im};
}

std::size_t CycloNum::hash() const
{
    std::size_t h = static_cast<std::size_t>(order_);
    for (const auto& c : coeffs_) {
        h = h * 1000003u ^ hash_rational(c);
    }
    return h;
}

CycloNum embed_polar(const Rational& modulus, const Angle& angle, std::int64_t order)
{
    if (order % (2 * angle.q()) != 0) {
        fail(ErrorCode::OrderMismatch, "angle " + angle.to_string() + " is not representable in order " +
                                           std::to_string(order));
    }
    auto z = CycloNum::zeta_power(angle.p() * (order / (2 * angle.q())), order);
    return z *= modulus;
}

CycloNum real_part(const CycloNum& z)
{
    auto r = z + z.conj();
    return r *= Rational(1, 2);
}

CycloNum imag_part(const CycloNum& z)
{
    // (z - conj z) / (2i) = (z - conj z) * (-i) / 2
    auto d = z - z.conj();
    d = d.mul_zeta(-z.order() / 4);
    return d *= Rational(1, 2);
}

bool is_real(const CycloNum& z)
{
    return z == z.conj();
}

// ---------------------------------------------------------------------------
// Certified signs and floors

namespace {

bool symbolic_zero(const CycloNum& z, Part part, const Rational& offset)
{
    const auto conj = z.conj();
    if (part == Part::Re) {
        auto w = z + conj;
        if (sgn(offset) != 0) {
            w -= CycloNum::from_rational(2 * offset, z.order());
        }
        return w.is_zero();
    }
    auto w = z - conj;
    if (sgn(offset) != 0) {
        w -= CycloNum::imaginary_unit(z.order()) * Rational(2 * offset);
    }
    return w.is_zero();
}

int certified_sign(const CycloNum& z, Part part, const Rational& offset)
{
    const auto tables = detail::field_tables(z.order());
    if (auto s = detail::fast_sign(*tables, z.coefficients(), part, offset)) {
        return *s;
    }
    if (symbolic_zero(z, part, offset)) {
        return 0;
    }
    for (mpfr_prec_t prec = detail::kStartPrecision; prec <= detail::kMaxPrecision; prec *= 2) {
        if (auto s = detail::interval_sign(*tables, z.coefficients(), part, offset, prec)) {
            return *s;
        }
    }
    fail(ErrorCode::Internal, "sign of a nonzero field element not resolved at maximum precision");
}

// Candidate for floor(Part(z) / unit^k): exact up to +-1 in practice, corrected by callers.
Integer approx_floor(const CycloNum& z, Part part)
{
    const auto tables = detail::field_tables(z.order());
    const auto& table = part == Part::Re ? tables->cos_approx : tables->sin_approx;
    double value = 0.0;
    double magnitude = 0.0;
    bool usable = true;
    for (std::size_t j = 0; j < z.coefficients().size() && usable; ++j) {
        const auto& c = z.coefficients()[j];
        if (sgn(c) == 0) {
            continue;
        }
        const double d = c.get_d();
        usable = std::isfinite(d);
        value += d * table[j];
        magnitude += std::fabs(d * table[j]);
    }
    if (usable && magnitude < 0x1p45) {
        return Integer(std::floor(value));
    }
    for (mpfr_prec_t prec = detail::kStartPrecision; prec <= detail::kMaxPrecision; prec *= 2) {
        auto e = detail::enclose(*tables, z.coefficients(), part, Rational(0), prec);
        Integer lo;
        Integer hi;
        mpfr_get_z(lo.get_mpz_t(), e.lo.get(), MPFR_RNDD);
        mpfr_get_z(hi.get_mpz_t(), e.hi.get(), MPFR_RNDD);
        if (hi - lo <= 1) {
            return lo;
        }
    }
    fail(ErrorCode::Internal, "floor not resolved at maximum precision");
}

Integer floor_part(const CycloNum& z, Part part, const Rational& shift)
{
    Integer m = approx_floor(z, part) + floor_of(shift);
    while (certified_sign(z, part, Rational(m) - shift) < 0) {
        --m;
    }
    while (certified_sign(z, part, Rational(m + 1) - shift) >= 0) {
        ++m;
    }
    return m;
}

} // namespace

int sign_of_real(const CycloNum& z)
{
    if (!is_real(z)) {
        fail(ErrorCode::NotReal, "sign requested for a non-real field element");
    }
    return certified_sign(z, Part::Re, Rational(0));
}

int sign_re_minus(const CycloNum& z, const Rational& offset)
{
    return certified_sign(z, Part::Re, offset);
}

int sign_im_minus(const CycloNum& z, const Rational& offset)
{
    return certified_sign(z, Part::Im, offset);
}

int compare_real(const CycloNum& a, const CycloNum& b)
{
    return certified_sign(a - b, Part::Re, Rational(0));
}

Integer floor_real_part(const CycloNum& z, const Rational& shift)
{
    return floor_part(z, Part::Re, shift);
}

Integer floor_imag_part(const CycloNum& z, const Rational& shift)
{
    return floor_part(z, Part::Im, shift);
}

Rational certified_floor(const CycloNum& z, const Rational& g)
{
    if (sgn(g) <= 0) {
        fail(ErrorCode::InvalidArgument, "grid step must be positive");
    }
    if (!is_real(z)) {
        fail(ErrorCode::NotReal, "floor requested for a non-real field element");
    }
    const Rational inv = 1 / g;
    return Rational(floor_real_part(z * inv)) * g;
}

CycloNum modulus_sq(const CycloNum& z)
{
    return z * z.conj();
}

Integer floor_sqrt_ratio(const CycloNum& value, const Rational& unit)
{
    if (sgn(unit) <= 0) {
        fail(ErrorCode::InvalidArgument, "unit must be positive");
    }
    if (certified_sign(value, Part::Re, Rational(0)) < 0) {
        fail(ErrorCode::InvalidArgument, "square root of a negative value");
    }
    // floor(sqrt(v) / u) = floor(sqrt(floor(v / u^2))) since isqrt commutes with floor.
    const Integer scaled = floor_part(value * Rational(1 / (unit * unit)), Part::Re, Rational(0));
    Integer root;
    mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
    return root;
}

namespace {

std::int64_t grid_step(std::int64_t order, std::int64_t r)
{
    if (r < 1) {
        fail(ErrorCode::InvalidArgument, "angular resolution must be positive");
    }
    if (order % (2 * r) != 0) {
        fail(ErrorCode::OrderMismatch, "field order " + std::to_string(order) +
                                           " does not contain the angle grid pi/" + std::to_string(r));
    }
    return order / (2 * r);
}

bool in_sector(const CycloNum& z, std::int64_t k, std::int64_t step)
{
    const auto w = z.mul_zeta(-k * step);
    if (certified_sign(w, Part::Im, Rational(0)) < 0) {
        return false;
    }
    return certified_sign(w.mul_zeta(-step), Part::Im, Rational(0)) < 0;
}

} // namespace

std::int64_t angle_sector(const CycloNum& z, std::int64_t r)
{
    if (z.is_zero()) {
        fail(ErrorCode::ZeroInput, "argument of zero is undefined");
    }
    if (r == 1) {
        return angle_sector(z, 2) / 2;
    }
    const auto step = grid_step(z.order(), r);
    const auto count = 2 * r;
    const auto a = z.approx();
    double arg = std::atan2(a.imag(), a.real());
    if (arg < 0) {
        arg += 2 * std::numbers::pi;
    }
    auto guess = static_cast<std::int64_t>(std::floor(arg * static_cast<double>(r) / std::numbers::pi));
    guess = ((guess % count) + count) % count;
    for (std::int64_t delta : {0, -1, 1}) {
        const auto k = ((guess + delta) % count + count) % count;
        if (in_sector(z, k, step)) {
            return k;
        }
    }
    for (std::int64_t k = 0; k < count; ++k) {
        if (in_sector(z, k, step)) {
            return k;
        }
    }
    fail(ErrorCode::Internal, "no angular sector contains a nonzero element");
}

std::int64_t nearest_angle_index(const CycloNum& z, std::int64_t r)
{
    if (r < 2) {
        fail(ErrorCode::InvalidArgument, "angular resolution must be at least 2");
    }
    const auto k = angle_sector(z, r);
    const auto step = grid_step(z.order(), r);
    // With alpha = arg(z) - k*theta in [0, theta), theta <= pi/2, the lower ray
    // is strictly closer iff sin(alpha) < sin(theta - alpha).
    const auto w = z.mul_zeta(-k * step) + z.mul_zeta(-(k + 1) * step);
    const int s = certified_sign(w, Part::Im, Rational(0));
    return s < 0 ? k : (k + 1) % (2 * r);
}

} // namespace roundreach
