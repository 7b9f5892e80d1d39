#ifndef ROUNDREACH_SRC_INTERVAL_HPP
#define ROUNDREACH_SRC_INTERVAL_HPP

// Internal: per-order field tables and MPFR-backed certified evaluation.

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include <mpfr.h>

#include "roundreach/numerics.hpp"

namespace roundreach::detail {

class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t precision) { mpfr_init2(value_, precision); }
    BigFloat(const BigFloat& other)
    {
        mpfr_init2(value_, mpfr_get_prec(other.value_));
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    BigFloat& operator=(const BigFloat& other)
    {
        if (this != &other) {
            mpfr_set_prec(value_, mpfr_get_prec(other.value_));
            mpfr_set(value_, other.value_, MPFR_RNDN);
        }
        return *this;
    }
    ~BigFloat() { mpfr_clear(value_); }

    mpfr_ptr get() noexcept { return value_; }
    mpfr_srcptr get() const noexcept { return value_; }

private:
    mpfr_t value_;
};

struct Enclosure {
    explicit Enclosure(mpfr_prec_t precision) : lo(precision), hi(precision) {}
    BigFloat lo;
    BigFloat hi;
};

enum class Part { Re, Im };

struct FieldTables {
    std::int64_t order = 0;
    std::int64_t degree = 0;
    std::vector<std::int64_t> phi;
    // zeta[j] = coordinates of zeta^j, 0 <= j < order, in the reduced basis.
    std::vector<std::vector<std::int64_t>> zeta;
    std::vector<double> cos_approx;
    std::vector<double> sin_approx;
};

std::shared_ptr<const FieldTables> field_tables(std::int64_t order);

/// Double-precision filter for the sign of Part(sum c_j zeta^j) - offset.
std::optional<int> fast_sign(const FieldTables& tables, const std::vector<Rational>& coeffs,
                             Part part, const Rational& offset);

/// Encloses Part(sum c_j zeta^j) - offset at the given precision.
Enclosure enclose(const FieldTables& tables, const std::vector<Rational>& coeffs, Part part,
                  const Rational& offset, mpfr_prec_t precision);

/// Sign certified by interval evaluation; nullopt when the enclosure meets zero.
std::optional<int> interval_sign(const FieldTables& tables, const std::vector<Rational>& coeffs,
                                 Part part, const Rational& offset, mpfr_prec_t precision);

constexpr mpfr_prec_t kStartPrecision = 64;
constexpr mpfr_prec_t kMaxPrecision = 65536;

} // namespace roundreach::detail

#endif
