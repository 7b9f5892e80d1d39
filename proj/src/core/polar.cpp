#include "roundreach/polar.hpp"

#include <cmath>
#include <numeric>

#include "lockstep.hpp"

namespace roundreach {

namespace {

const Angle kRightAngle(1, 2);

const PolarPoint& polar_at(const State& s, std::size_t index)
{
    return std::get<PolarPoint>(s.points[index]);
}

Angle point_angle(const PolarPoint& p, std::int64_t r)
{
    return Angle(p.index, r);
}

void require_polar(const JnfSystem& system)
{
    if (system.spec().shape != Shape::Polar || system.spec().r < 2) {
        fail(ErrorCode::UnsupportedCombination, "polar decision needs polar rounding with R >= 2");
    }
}

std::size_t coordinate(const JnfSystem& system, std::size_t block, std::size_t k)
{
    const auto size = static_cast<std::size_t>(system.blocks()[block].size);
    if (k < 2 || k > size) {
        fail(ErrorCode::InvalidArgument, "dimension must satisfy 2 <= k <= block size");
    }
    return system.block_offset(block) + k - 1;
}

CycloNum lambda_of(const JnfSystem& system, std::size_t block)
{
    const auto& b = system.blocks()[block];
    return embed_polar(b.modulus, b.angle, system.order());
}

bool gamma_small(const CycloNum& a, const CycloNum& b)
{
    if (a.is_zero() || b.is_zero()) {
        return true;
    }
    return sign_re_minus((a + b) * a.conj(), Rational(0)) >= 0;
}

// Integers beyond this many bits are not evaluated.
constexpr std::size_t kMaxBits = std::size_t{1} << 22;

bool too_big(const Integer& v)
{
    return mpz_sizeinbase(v.get_mpz_t(), 2) > kMaxBits;
}

} // namespace

namespace detail {

double log2_of(const Rational& v)
{
    long e_num = 0;
    long e_den = 0;
    const double m_num = mpz_get_d_2exp(&e_num, v.get_num_mpz_t());
    const double m_den = mpz_get_d_2exp(&e_den, v.get_den_mpz_t());
    return static_cast<double>(e_num - e_den) + std::log2(m_num / m_den);
}

bool closed_form_dominates(const std::vector<Rational>& u, const Rational& base, unsigned growth)
{
    // u[size - 1 - j] must stay below base^(growth^j).
    double exponent = 1;
    for (std::size_t j = 0; j < u.size(); ++j, exponent *= growth) {
        const Rational& v = u[u.size() - 1 - j];
        if (sgn(v) <= 0) {
            continue;
        }
        const double log_bound = exponent * log2_of(base);
        const double log_v = log2_of(v);
        if (log_bound < 1e6 && std::abs(log_v - log_bound) < 1.0) {
            const auto e = static_cast<unsigned long>(exponent);
            Integer num;
            Integer den;
            mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
            mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
            if (v > make_rational(num, den)) {
                return false;
            }
        } else if (log_v > log_bound) {
            return false;
        }
    }
    return true;
}

} // namespace detail

const char* phi_mode_name(PhiMode mode) noexcept
{
    switch (mode) {
    case PhiMode::Increasing:
        return "phi-I";
    case PhiMode::Decreasing:
        return "phi-D";
    case PhiMode::Small:
        return "phi-small";
    }
    return "?";
}

std::optional<Angle> phi(const JnfSystem& system, const State& state, std::size_t block, std::size_t k)
{
    require_polar(system);
    const auto c = coordinate(system, block, k);
    const auto& lower = polar_at(state, c - 1);
    const auto& upper = polar_at(state, c);
    if (sgn(lower.modulus) == 0 || sgn(upper.modulus) == 0) {
        return std::nullopt;
    }
    const auto r = system.spec().r;
    return (system.blocks()[block].angle + point_angle(lower, r) - point_angle(upper, r)).folded();
}

bool gamma_at_most_right_angle(const JnfSystem& system, const State& state, std::size_t block, std::size_t k)
{
    require_polar(system);
    const auto c = coordinate(system, block, k);
    return gamma_small(lambda_of(system, block) * state.values[c - 1], state.values[c]);
}

double gamma_approx(const JnfSystem& system, const State& state, std::size_t block, std::size_t k)
{
    require_polar(system);
    const auto c = coordinate(system, block, k);
    const auto a = (lambda_of(system, block) * state.values[c - 1]).approx();
    const auto b = state.values[c].approx();
    if (std::abs(a) == 0.0) {
        return 0.0;
    }
    return std::abs(std::arg((a + b) / a));
}

bool just_rotating_check(const JnfSystem& system, const State& before, const State& after, std::size_t block,
                         std::size_t k)
{
    const auto c = coordinate(system, block, k);
    if (sgn(polar_at(before, c).modulus) == 0) {
        // Dimension k is zero, so k-1 is only ever rotated.
        return true;
    }
    const auto p0 = phi(system, before, block, k);
    const auto p1 = phi(system, after, block, k);
    return p0 && p1 && *p0 == *p1 && polar_at(before, c - 1).modulus == polar_at(after, c - 1).modulus;
}

bool stop_fires(const Rational& modulus_before, const Rational& modulus_after, bool gamma_small_flag,
                const Rational& target_modulus)
{
    return sgn(modulus_before) > 0 && modulus_after > modulus_before && gamma_small_flag &&
           modulus_before >= target_modulus;
}

std::optional<Certificate> stop_check(const JnfSystem& system, const State& before, const State& after,
                                      std::size_t block, std::size_t k)
{
    const auto c = coordinate(system, block, k);
    const bool small = gamma_at_most_right_angle(system, before, block, k);
    if (stop_fires(polar_at(before, c - 1).modulus, polar_at(after, c - 1).modulus, small,
                   polar_at(system.target(), c - 1).modulus)) {
        return DivergedPastTarget{c};
    }
    return std::nullopt;
}

ResourceBounds resource_bounds(std::int64_t d, const Rational& i_s, const Rational& y_s, std::int64_t r,
                               const Rational& g)
{
    if (d < 1 || r < 1 || sgn(g) <= 0) {
        fail(ErrorCode::InvalidArgument, "resource bounds need d >= 1, R >= 1 and g > 0");
    }
    ResourceBounds out;
    out.i_s = i_s;
    out.y_s = y_s;
    const auto n = static_cast<std::size_t>(d);
    out.t.assign(n, Integer(0));
    out.u.assign(n, Rational(0));
    const Integer turn = Integer(2 * r) * (2 * r);
    out.t[n - 1] = 1;
    out.u[n - 1] = i_s;
    for (std::size_t k = n - 1; k-- > 0;) {
        out.u[k] = i_s + Rational(d) * Rational(out.t[k + 1]) * out.u[k + 1];
        out.t[k] = ceil_of((y_s + out.u[k]) / g) * turn + out.t[k + 1];
        if (too_big(out.t[k]) || too_big(out.u[k].get_num())) {
            out.exact = false;
            out.t.erase(out.t.begin(), out.t.begin() + static_cast<std::ptrdiff_t>(k));
            out.u.erase(out.u.begin(), out.u.begin() + static_cast<std::ptrdiff_t>(k));
            break;
        }
    }

    const Rational one(1);
    out.f = std::max(one, i_s) * 3 * Rational(d) * std::max(one, y_s) * Rational(turn) *
            std::max(one, Rational(ceil_of(one / g)));
    out.closed_form_holds = detail::closed_form_dominates(out.u, out.f * std::max(one, i_s), 2);
    return out;
}

ResourceBounds resource_bounds(const JnfSystem& system, std::size_t block)
{
    require_polar(system);
    const auto offset = system.block_offset(block);
    const auto size = static_cast<std::size_t>(system.blocks()[block].size);
    Rational i_s = 0;
    Rational y_s = 0;
    for (std::size_t k = 0; k < size; ++k) {
        i_s += polar_at(system.initial(), offset + k).modulus;
        y_s += polar_at(system.target(), offset + k).modulus;
    }
    return resource_bounds(static_cast<std::int64_t>(size), i_s, y_s, system.spec().r, system.spec().g);
}

bool small_angle_helper_holds(std::int64_t r)
{
    if (r < 1) {
        fail(ErrorCode::InvalidArgument, "R must be positive");
    }
    // ceil(r/4) * pi/r + pi/(2r) <= pi/2  <=>  2 * ceil(r/4) + 1 <= r
    return 2 * ((r + 3) / 4) + 1 <= r;
}

namespace {

class PolarMonitor final : public detail::BlockMonitor {
public:
    PolarMonitor(const JnfSystem& system, std::size_t block, const DecideOptions& options)
        : system_(system), view_(detail::block_view(system, block)), options_(options),
          lambda_(lambda_of(system, block))
    {
        const auto shift = nearest_angle_index(lambda_, system.spec().r);
        const auto turn = 2 * system.spec().r;
        period_ = shift == 0 ? 1 : turn / std::gcd(shift, turn);
        const auto bounds = resource_bounds(system, block);
        if (bounds.exact) {
            ceiling_ = 2 * Integer(static_cast<long>(view_.size)) * bounds.t.front() + 4 * system.spec().r;
        }
    }

    detail::Observation start(const State& initial) override
    {
        k_ = view_.size;
        n_k_ = 0;
        return cascade(initial, 0);
    }

    detail::Observation observe(std::uint64_t step, const State& before, const State& after) override
    {
        for (std::size_t k = k_; k <= view_.size; ++k) {
            const auto c = index(k);
            if (after.points[c] != round_scalar(lambda_ * before.values[c], system_.spec()).point) {
                fail(ErrorCode::Internal, "rotating dimension " + std::to_string(c + 1) + " did not just rotate");
            }
        }
        if (k_ == 1) {
            return detail::Observation::bounded(period_);
        }
        const std::size_t j = k_ - 1;
        const auto cj = index(j);
        const auto ck = index(k_);
        const std::uint64_t i = step - 1;
        const Rational& m0 = polar_at(before, cj).modulus;
        const Rational& m1 = polar_at(after, cj).modulus;
        const auto phi0 = phi(system_, before, view_.block, k_);
        const auto phi1 = phi(system_, after, view_.block, k_);
        const CycloNum a = lambda_ * before.values[cj];
        const CycloNum& b = before.values[ck];
        const bool small = gamma_small(a, b);

        if (i >= n_k_ + 1 && phi0 && phi1) {
            ensure(*phi1 <= *phi0, "relative angle increased while the upper dimension rotates");
        }
        if (!a.is_zero() && !b.is_zero() && !small && phi1 &&
            compare_real(modulus_sq(a + b), modulus_sq(a)) > 0) {
            ensure(*phi1 <= kRightAngle, "axis crossing was not followed by an acute relative angle");
        }
        check_no_dip(i, phi0, phi1, m0, m1);

        if (just_rotating_check(system_, before, after, view_.block, k_)) {
            k_ = j;
            n_k_ = step;
            detail::log_event(options_, "dimension " + std::to_string(cj + 1) + " rotates from step " +
                                            std::to_string(step));
            return cascade(after, step);
        }
        const Rational& target = polar_at(system_.target(), cj).modulus;
        if (i >= n_k_ + 1 && stop_fires(m0, m1, small, target)) {
            detail::log_event(options_, "dimension " + std::to_string(cj + 1) + " grows past its target modulus");
            return detail::Observation::concluded(DivergedPastTarget{cj + 1});
        }
        if (step >= n_k_ + 1 && phi1 && *phi1 <= kRightAngle && m1 > target) {
            detail::log_event(options_, "dimension " + std::to_string(cj + 1) +
                                            " has an acute relative angle above its target modulus");
            return detail::Observation::concluded(DivergedPastTarget{cj + 1});
        }
        track_mode(phi1, m1 < m0);
        return detail::Observation::running();
    }

    std::optional<Integer> step_ceiling() const override { return ceiling_; }

private:
    std::size_t index(std::size_t k) const { return view_.offset + k - 1; }

    detail::Observation cascade(const State& s, std::uint64_t step)
    {
        if (auto mismatch = check_modulus(s, k_)) {
            return detail::Observation::concluded(*mismatch);
        }
        while (k_ > 1 && sgn(polar_at(s, index(k_)).modulus) == 0) {
            --k_;
            n_k_ = step;
            if (auto mismatch = check_modulus(s, k_)) {
                return detail::Observation::concluded(*mismatch);
            }
        }
        history_.clear();
        mode_.reset();
        if (k_ == 1) {
            detail::log_event(options_, "block " + std::to_string(view_.block + 1) + " is periodic with period " +
                                            std::to_string(period_));
            return detail::Observation::bounded(period_);
        }
        return detail::Observation::running();
    }

    std::optional<Certificate> check_modulus(const State& s, std::size_t k) const
    {
        const auto c = index(k);
        if (polar_at(s, c).modulus != polar_at(system_.target(), c).modulus) {
            return StabilizedMismatch{c + 1};
        }
        return std::nullopt;
    }

    // Three consecutive equal obtuse angles with a modulus dip in the middle
    // cannot occur.
    void check_no_dip(std::uint64_t i, const std::optional<Angle>& phi0, const std::optional<Angle>& phi1,
                      const Rational& m0, const Rational& m1)
    {
        history_.push_back({i, phi0, m0});
        if (history_.size() > 2) {
            history_.erase(history_.begin());
        }
        if (history_.size() == 2 && history_[0].step + 1 == i && history_[0].step >= n_k_) {
            const auto& prev = history_[0];
            if (prev.phi && phi0 && phi1 && *prev.phi == *phi0 && *phi0 == *phi1 && *phi0 > kRightAngle &&
                m1 > m0 && m0 < prev.modulus) {
                fail(ErrorCode::Internal, "modulus decreased then increased at a constant obtuse relative angle");
            }
        }
    }

    void track_mode(const std::optional<Angle>& p, bool decreased)
    {
        if (!p) {
            return;
        }
        const PhiMode mode = *p <= kRightAngle ? PhiMode::Small
                             : decreased        ? PhiMode::Decreasing
                                                : PhiMode::Increasing;
        if (!mode_ || mode_->mode != mode || mode_->phi != p) {
            mode_ = DimensionPhase{index(k_ - 1) + 1, p, mode, 0};
            detail::log_event(options_, "dimension " + std::to_string(mode_->dim) + ": " + phi_mode_name(mode) +
                                            " at phi = " + p->to_string());
        } else {
            mode_->steps_in_state += 1;
        }
    }

    struct Sample {
        std::uint64_t step;
        std::optional<Angle> phi;
        Rational modulus;
    };

    const JnfSystem& system_;
    detail::BlockView view_;
    const DecideOptions& options_;
    CycloNum lambda_;
    std::int64_t period_ = 1;
    std::optional<Integer> ceiling_;
    std::size_t k_ = 0;
    std::uint64_t n_k_ = 0;
    std::vector<Sample> history_;
    std::optional<DimensionPhase> mode_;
};

} // namespace

namespace detail {

std::unique_ptr<BlockMonitor> make_polar_monitor(const JnfSystem& system, std::size_t block,
                                                 const DecideOptions& options)
{
    require_polar(system);
    return std::make_unique<PolarMonitor>(system, block, options);
}

} // namespace detail

Verdict decide_polar(const JnfSystem& system, const DecideOptions& options)
{
    require_polar(system);
    return decide_jnf(system, options);
}

} // namespace roundreach
