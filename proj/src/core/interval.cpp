#include "interval.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace roundreach::detail {

namespace {

std::vector<std::vector<std::int64_t>> build_zeta_rows(std::int64_t order,
                                                      const std::vector<std::int64_t>& phi)
{
    const auto degree = static_cast<std::int64_t>(phi.size()) - 1;
    std::vector<std::vector<std::int64_t>> rows(static_cast<std::size_t>(order),
                                                std::vector<std::int64_t>(static_cast<std::size_t>(degree), 0));
    for (std::int64_t j = 0; j < order; ++j) {
        auto& row = rows[static_cast<std::size_t>(j)];
        if (j < degree) {
            row[static_cast<std::size_t>(j)] = 1;
            continue;
        }
        // x * zeta^{j-1}, then fold the degree-n term using the monic phi.
        const auto& prev = rows[static_cast<std::size_t>(j - 1)];
        const std::int64_t top = prev[static_cast<std::size_t>(degree - 1)];
        for (std::int64_t i = degree - 1; i >= 1; --i) {
            row[static_cast<std::size_t>(i)] = prev[static_cast<std::size_t>(i - 1)];
        }
        row[0] = 0;
        if (top != 0) {
            for (std::int64_t i = 0; i < degree; ++i) {
                row[static_cast<std::size_t>(i)] -= top * phi[static_cast<std::size_t>(i)];
            }
        }
    }
    return rows;
}

// Exact values for the angles where cos/sin hit 0 or +-1.
std::optional<int> exact_cos(std::int64_t j, std::int64_t order)
{
    j %= order;
    if (j == 0) {
        return 1;
    }
    if (2 * j == order) {
        return -1;
    }
    if (4 * j == order || 4 * j == 3 * order) {
        return 0;
    }
    return std::nullopt;
}

std::int64_t sin_index(std::int64_t j, std::int64_t order)
{
    // sin(2 pi j / L) = cos(2 pi (j - L/4) / L); callers guarantee 4 | L.
    return ((j - order / 4) % order + order) % order;
}

struct TableKey {
    std::int64_t order;
    mpfr_prec_t precision;
    auto operator<=>(const TableKey&) const = default;
};

struct TrigEnclosures {
    std::vector<Enclosure> cos;
    std::vector<Enclosure> sin;
};

void enclose_cos(std::int64_t j, std::int64_t order, mpfr_prec_t precision, Enclosure& out)
{
    if (auto exact = exact_cos(j, order)) {
        mpfr_set_si(out.lo.get(), *exact, MPFR_RNDN);
        mpfr_set_si(out.hi.get(), *exact, MPFR_RNDN);
        return;
    }
    const mpfr_prec_t work = precision + 32;
    BigFloat angle(work);
    mpfr_const_pi(angle.get(), MPFR_RNDN);
    mpfr_mul_si(angle.get(), angle.get(), 2 * j, MPFR_RNDN);
    mpfr_div_si(angle.get(), angle.get(), order, MPFR_RNDN);
    BigFloat value(work);
    mpfr_cos(value.get(), angle.get(), MPFR_RNDN);
    // cos is 1-Lipschitz; the evaluation error is far below 2^-precision.
    BigFloat margin(work);
    mpfr_set_ui_2exp(margin.get(), 1, -precision, MPFR_RNDN);
    mpfr_sub(out.lo.get(), value.get(), margin.get(), MPFR_RNDD);
    mpfr_add(out.hi.get(), value.get(), margin.get(), MPFR_RNDU);
}

std::shared_ptr<const TrigEnclosures> trig_enclosures(const FieldTables& tables, mpfr_prec_t precision)
{
    static std::mutex mutex;
    static std::map<TableKey, std::shared_ptr<const TrigEnclosures>> cache;
    const TableKey key{tables.order, precision};
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) {
            return it->second;
        }
    }
    auto result = std::make_shared<TrigEnclosures>();
    for (std::int64_t j = 0; j < tables.degree; ++j) {
        result->cos.emplace_back(precision);
        enclose_cos(j, tables.order, precision, result->cos.back());
        result->sin.emplace_back(precision);
        enclose_cos(sin_index(j, tables.order), tables.order, precision, result->sin.back());
    }
    std::lock_guard lock(mutex);
    auto [it, inserted] = cache.emplace(key, std::move(result));
    return it->second;
}

void interval_mul(const Enclosure& a, const Enclosure& b, Enclosure& out, mpfr_prec_t precision)
{
    BigFloat t(precision);
    bool first = true;
    for (auto x : {a.lo.get(), a.hi.get()}) {
        for (auto y : {b.lo.get(), b.hi.get()}) {
            mpfr_mul(t.get(), x, y, MPFR_RNDD);
            if (first || mpfr_less_p(t.get(), out.lo.get())) {
                mpfr_set(out.lo.get(), t.get(), MPFR_RNDD);
            }
            mpfr_mul(t.get(), x, y, MPFR_RNDU);
            if (first || mpfr_greater_p(t.get(), out.hi.get())) {
                mpfr_set(out.hi.get(), t.get(), MPFR_RNDU);
            }
            first = false;
        }
    }
}

} // namespace

std::shared_ptr<const FieldTables> field_tables(std::int64_t order)
{
    thread_local std::int64_t last_order = 0;
    thread_local std::shared_ptr<const FieldTables> last;
    if (last && last_order == order) {
        return last;
    }

    static std::mutex mutex;
    static std::map<std::int64_t, std::shared_ptr<const FieldTables>> cache;
    std::shared_ptr<const FieldTables> found;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(order); it != cache.end()) {
            found = it->second;
        }
    }
    if (!found) {
        if (order <= 0 || order % 4 != 0) {
            fail(ErrorCode::InvalidArgument, "field order must be a positive multiple of 4, got " +
                                                 std::to_string(order));
        }
        auto tables = std::make_shared<FieldTables>();
        tables->order = order;
        tables->phi = cyclotomic_polynomial(order);
        tables->degree = static_cast<std::int64_t>(tables->phi.size()) - 1;
        tables->zeta = build_zeta_rows(order, tables->phi);
        Enclosure e(128);
        for (std::int64_t j = 0; j < tables->degree; ++j) {
            enclose_cos(j, order, 128, e);
            tables->cos_approx.push_back(exact_cos(j, order) ? *exact_cos(j, order)
                                                             : mpfr_get_d(e.hi.get(), MPFR_RNDN));
            const auto s = sin_index(j, order);
            enclose_cos(s, order, 128, e);
            tables->sin_approx.push_back(exact_cos(s, order) ? *exact_cos(s, order)
                                                             : mpfr_get_d(e.hi.get(), MPFR_RNDN));
        }
        std::lock_guard lock(mutex);
        auto [it, inserted] = cache.emplace(order, std::move(tables));
        found = it->second;
    }
    last_order = order;
    last = found;
    return found;
}

std::optional<int> fast_sign(const FieldTables& tables, const std::vector<Rational>& coeffs, Part part,
                             const Rational& offset)
{
    const auto& table = part == Part::Re ? tables.cos_approx : tables.sin_approx;
    constexpr double kHuge = 1e280;
    constexpr double kTiny = 1e-280;
    double sum = 0.0;
    double magnitude = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (sgn(coeffs[j]) == 0 || table[j] == 0.0) {
            continue;
        }
        const double c = mpq_get_d(coeffs[j].get_mpq_t());
        const double a = std::fabs(c);
        if (!std::isfinite(c) || a > kHuge || a < kTiny) {
            return std::nullopt;
        }
        const double term = c * table[j];
        sum += term;
        magnitude += std::fabs(term);
    }
    double off = 0.0;
    if (sgn(offset) != 0) {
        off = mpq_get_d(offset.get_mpq_t());
        const double a = std::fabs(off);
        if (!std::isfinite(off) || a > kHuge || a < kTiny) {
            return std::nullopt;
        }
    }
    const double value = sum - off;
    const double n = static_cast<double>(coeffs.size()) + 8.0;
    const double bound = (magnitude * n + std::fabs(off) * 4.0) * 0x1p-52 + 1e-290;
    if (value > 2.0 * bound) {
        return 1;
    }
    if (value < -2.0 * bound) {
        return -1;
    }
    return std::nullopt;
}

Enclosure enclose(const FieldTables& tables, const std::vector<Rational>& coeffs, Part part,
                  const Rational& offset, mpfr_prec_t precision)
{
    auto trig = trig_enclosures(tables, precision);
    const auto& table = part == Part::Re ? trig->cos : trig->sin;
    Enclosure total(precision);
    mpfr_set_q(total.lo.get(), offset.get_mpq_t(), MPFR_RNDU);
    mpfr_neg(total.lo.get(), total.lo.get(), MPFR_RNDD);
    mpfr_set_q(total.hi.get(), offset.get_mpq_t(), MPFR_RNDD);
    mpfr_neg(total.hi.get(), total.hi.get(), MPFR_RNDU);
    Enclosure c(precision);
    Enclosure term(precision);
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (sgn(coeffs[j]) == 0) {
            continue;
        }
        mpfr_set_q(c.lo.get(), coeffs[j].get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(c.hi.get(), coeffs[j].get_mpq_t(), MPFR_RNDU);
        interval_mul(c, table[j], term, precision);
        mpfr_add(total.lo.get(), total.lo.get(), term.lo.get(), MPFR_RNDD);
        mpfr_add(total.hi.get(), total.hi.get(), term.hi.get(), MPFR_RNDU);
    }
    return total;
}

std::optional<int> interval_sign(const FieldTables& tables, const std::vector<Rational>& coeffs, Part part,
                                 const Rational& offset, mpfr_prec_t precision)
{
    const auto e = enclose(tables, coeffs, part, offset, precision);
    if (mpfr_sgn(e.lo.get()) > 0) {
        return 1;
    }
    if (mpfr_sgn(e.hi.get()) < 0) {
        return -1;
    }
    return std::nullopt;
}

} // namespace roundreach::detail
