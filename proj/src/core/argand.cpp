#include "roundreach/argand.hpp"

#include <unordered_set>

#include "lockstep.hpp"

namespace roundreach {

AngleClass niven_classify(const Angle& angle)
{
    // angle = x * pi with x = p/q in [0, 2).
    const std::int64_t p = angle.p();
    const std::int64_t q = angle.q();
    auto multiple_of = [&](std::int64_t n) { return (n * p) % q == 0; };

    AngleClass out;
    out.axis_multiple_90 = multiple_of(2);
    if (multiple_of(6)) {
        const std::int64_t six = (6 * p / q) % 6;
        out.sin_rational = six != 2 && six != 4;
    }
    out.cos_rational = multiple_of(3) || multiple_of(2);
    const bool cos_zero = multiple_of(2) && ((2 * p / q) % 2) == 1;
    if (!cos_zero) {
        out.tan_rational = multiple_of(4);
    }
    return out;
}

namespace {

constexpr std::size_t kMaxBits = std::size_t{1} << 22;

Integer pow_int(const Integer& base, std::int64_t e)
{
    Integer out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
    return out;
}

bool too_big(const Integer& v)
{
    return mpz_sizeinbase(v.get_mpz_t(), 2) > kMaxBits;
}

const ArgandPoint& argand_at(const State& s, std::size_t index)
{
    return std::get<ArgandPoint>(s.points[index]);
}

bool is_origin(const ArgandPoint& p)
{
    return sgn(p.re) == 0 && sgn(p.im) == 0;
}

struct GridPointHash {
    std::size_t operator()(const GridPoint& p) const { return hash_grid_point(p); }
};

void require_kind(const JnfSystem& system, RealRounding kind)
{
    if (system.spec().shape != Shape::Argand || system.spec().kind != kind) {
        fail(ErrorCode::UnsupportedCombination,
             std::string("this decider needs Argand ") + rounding_name(kind) + " rounding");
    }
}

class ArgandMonitor final : public detail::BlockMonitor {
public:
    ArgandMonitor(const JnfSystem& system, std::size_t block, const DecideOptions& options)
        : system_(system), view_(detail::block_view(system, block)), options_(options),
          expand_(system.spec().kind == RealRounding::Expand),
          axis_(niven_classify(system.blocks()[block].angle).axis_multiple_90)
    {
        const auto bounds = truncation_bounds(system, block);
        if (bounds.exact) {
            Rational y_s = 0;
            Rational u_max = 0;
            for (std::size_t k = 0; k < view_.size; ++k) {
                y_s += detail::modulus_upper_bound(grid_modulus_sq(system.target().points[view_.offset + k]));
            }
            for (const auto& u : bounds.u) {
                u_max = std::max(u_max, u);
            }
            ceiling_ = 2 * bounds.t.front() + 2 * ceil_of((y_s + u_max) / system.spec().g) + 8;
        }
    }

    detail::Observation start(const State& initial) override
    {
        k_ = view_.size;
        return settle(initial);
    }

    detail::Observation observe(std::uint64_t, const State& before, const State& after) override
    {
        if (watching_) {
            const auto c = index(k_ - 1);
            const Rational m0 = grid_modulus_sq(before.points[c]);
            const Rational m1 = grid_modulus_sq(after.points[c]);
            // |x|^2 is a convex quadratic in the step count once the dimension
            // above rotates exactly, so one increase means growth forever.
            if (m1 > m0 && m1 > grid_modulus_sq(system_.target().points[c])) {
                detail::log_event(options_, "dimension " + std::to_string(c + 1) + " grows without bound");
                return detail::Observation::concluded(DivergedPastTarget{c + 1});
            }
            return detail::Observation::running();
        }
        if (done_) {
            return detail::Observation::bounded(period_);
        }
        const auto c = index(k_);
        const int trend = sgn(grid_modulus_sq(after.points[c]) - grid_modulus_sq(before.points[c]));
        ensure(expand_ ? trend >= 0 : trend <= 0, "top dimension modulus moved against the rounding direction");
        return settle(after);
    }

    std::optional<Integer> step_ceiling() const override { return ceiling_; }

private:
    std::size_t index(std::size_t k) const { return view_.offset + k - 1; }

    detail::Observation settle(const State& s)
    {
        for (;;) {
            const auto c = index(k_);
            const auto& p = argand_at(s, c);
            const auto& target = system_.target().points[c];
            if (is_origin(p)) {
                if (!is_origin(std::get<ArgandPoint>(target))) {
                    return detail::Observation::concluded(StabilizedMismatch{c + 1});
                }
                seen_.clear();
                if (k_ == 1) {
                    done_ = true;
                    period_ = 1;
                    return detail::Observation::bounded(period_);
                }
                detail::log_event(options_, "dimension " + std::to_string(c + 1) + " reached 0 and is removed");
                --k_;
                continue;
            }
            if (!seen_.insert(p).second) {
                ensure(axis_, "nonzero stable orbit under an eigenvalue angle off the axes");
                if (grid_modulus_sq(p) != grid_modulus_sq(target)) {
                    return detail::Observation::concluded(StabilizedMismatch{c + 1});
                }
                seen_.clear();
                if (k_ == 1) {
                    done_ = true;
                    period_ = 4;
                    return detail::Observation::bounded(period_);
                }
                detail::log_event(options_, "dimension " + std::to_string(c + 1) + " rotates exactly");
                watching_ = true;
                return detail::Observation::running();
            }
            if (expand_ && !axis_ && grid_modulus_sq(p) > grid_modulus_sq(target)) {
                return detail::Observation::concluded(DivergedPastTarget{c + 1});
            }
            return detail::Observation::running();
        }
    }

    const JnfSystem& system_;
    detail::BlockView view_;
    const DecideOptions& options_;
    bool expand_;
    bool axis_;
    std::optional<Integer> ceiling_;
    std::size_t k_ = 0;
    bool watching_ = false;
    bool done_ = false;
    std::int64_t period_ = 1;
    std::unordered_set<GridPoint, GridPointHash> seen_;
};

} // namespace

TruncationBounds truncation_bounds(std::int64_t d, const Rational& i_s, const Rational& g)
{
    if (d < 1 || sgn(g) <= 0) {
        fail(ErrorCode::InvalidArgument, "truncation bounds need d >= 1 and g > 0");
    }
    TruncationBounds out;
    out.i_s = i_s;
    const auto n = static_cast<std::size_t>(d);
    out.t.assign(n, Integer(0));
    out.u.assign(n, Rational(0));
    auto ball = [&](const Rational& u) { return pow_int(ceil_of(2 * u / g), d); };
    out.u[n - 1] = i_s;
    out.t[n - 1] = ball(i_s);
    for (std::size_t k = n - 1; k-- > 0;) {
        out.u[k] = i_s + Rational(d) * Rational(out.t[k + 1]) * out.u[k + 1];
        if (too_big(out.u[k].get_num()) || mpz_sizeinbase(out.u[k].get_num_mpz_t(), 2) * n > kMaxBits) {
            out.exact = false;
            out.t.erase(out.t.begin(), out.t.begin() + static_cast<std::ptrdiff_t>(k + 1));
            out.u.erase(out.u.begin(), out.u.begin() + static_cast<std::ptrdiff_t>(k + 1));
            break;
        }
        out.t[k] = ball(out.u[k]) + out.t[k + 1];
    }
    const Rational one(1);
    out.f = std::max(one, i_s) * Rational(d) * Rational(pow_int(ceil_of(2 / g), d)) * 2;
    out.closed_form_holds =
        detail::closed_form_dominates(out.u, out.f * std::max(one, i_s), static_cast<unsigned>(d + 1));
    return out;
}

TruncationBounds truncation_bounds(const JnfSystem& system, std::size_t block)
{
    const auto offset = system.block_offset(block);
    const auto size = static_cast<std::size_t>(system.blocks()[block].size);
    Rational i_s = 0;
    for (std::size_t k = 0; k < size; ++k) {
        i_s += detail::modulus_upper_bound(grid_modulus_sq(system.initial().points[offset + k]));
    }
    return truncation_bounds(static_cast<std::int64_t>(size), i_s, system.spec().g);
}

namespace detail {

std::unique_ptr<BlockMonitor> make_argand_monitor(const JnfSystem& system, std::size_t block,
                                                  const DecideOptions& options)
{
    return std::make_unique<ArgandMonitor>(system, block, options);
}

} // namespace detail

Verdict decide_truncation(const JnfSystem& system, const DecideOptions& options)
{
    require_kind(system, RealRounding::Truncate);
    return decide_jnf(system, options);
}

Verdict decide_expansion(const JnfSystem& system, const DecideOptions& options)
{
    require_kind(system, RealRounding::Expand);
    return decide_jnf(system, options);
}

} // namespace roundreach
