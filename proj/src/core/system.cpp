#include "roundreach/system.hpp"

#include <sstream>
#include <unordered_set>

namespace roundreach {

std::size_t StateHash::operator()(const State& s) const
{
    std::size_t h = s.points.size();
    for (const auto& p : s.points) {
        h = h * 1000003u ^ hash_grid_point(p);
    }
    return h;
}

std::size_t RationalVectorHash::operator()(const RationalVector& v) const
{
    std::size_t h = v.size();
    for (const auto& x : v) {
        h = h * 1000003u ^ hash_rational(x);
    }
    return h;
}

namespace {

CycloNum embed_value(const ComplexValue& v, std::int64_t order)
{
    if (const auto* c = std::get_if<Cartesian>(&v)) {
        return CycloNum::from_cartesian(c->re, c->im, order);
    }
    const auto& p = std::get<PolarValue>(v);
    if (sgn(p.modulus) < 0) {
        fail(ErrorCode::InvalidArgument, "polar modulus must be nonnegative");
    }
    return embed_polar(p.modulus, p.angle, order);
}

} // namespace

JnfSystem::JnfSystem(std::vector<JordanBlock> blocks, std::vector<ComplexValue> initial,
                     std::vector<ComplexValue> target, RoundingSpec spec)
    : blocks_(std::move(blocks)), raw_initial_(std::move(initial)), raw_target_(std::move(target)),
      spec_(std::move(spec))
{
    spec_.validate();
    if (blocks_.empty()) {
        fail(ErrorCode::InvalidArgument, "system needs at least one Jordan block");
    }
    std::vector<Angle> angles;
    std::size_t dim = 0;
    for (const auto& b : blocks_) {
        if (b.size < 1) {
            fail(ErrorCode::InvalidArgument, "Jordan block size must be positive");
        }
        if (sgn(b.modulus) < 0) {
            fail(ErrorCode::InvalidArgument, "eigenvalue modulus must be nonnegative");
        }
        angles.push_back(b.angle);
        dim += static_cast<std::size_t>(b.size);
    }
    if (raw_initial_.size() != dim || raw_target_.size() != dim) {
        fail(ErrorCode::InvalidArgument, "initial and target vectors must have dimension " + std::to_string(dim));
    }
    for (const auto* vec : {&raw_initial_, &raw_target_}) {
        for (const auto& v : *vec) {
            if (const auto* p = std::get_if<PolarValue>(&v)) {
                angles.push_back(p->angle);
            }
        }
    }
    order_ = field_order_for(angles, spec_.shape == Shape::Polar ? spec_.r : 0);

    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        offsets_.push_back(block_of_.size());
        const auto& block = blocks_[b];
        for (std::int64_t k = 0; k < block.size; ++k) {
            block_of_.push_back(b);
        }
        zeta_exponent_.push_back(block.angle.p() * (order_ / (2 * block.angle.q())));
    }

    for (std::size_t k = 0; k < dim; ++k) {
        auto a = round_scalar(embed_value(raw_initial_[k], order_), spec_);
        initial_.values.push_back(std::move(a.value));
        initial_.points.push_back(std::move(a.point));
        auto t = round_scalar(embed_value(raw_target_[k], order_), spec_);
        target_.values.push_back(std::move(t.value));
        target_.points.push_back(std::move(t.point));
    }
}

State JnfSystem::make_state(const std::vector<GridPoint>& points) const
{
    if (points.size() != dimension()) {
        fail(ErrorCode::InvalidArgument, "state has the wrong dimension");
    }
    State s;
    for (const auto& p : points) {
        if (!is_grid_point(p, spec_)) {
            fail(ErrorCode::InvalidArgument, "state coordinate " + to_string(p) + " is not on the grid");
        }
        s.values.push_back(grid_value(p, spec_, order_));
        s.points.push_back(p);
    }
    return s;
}

CycloNum JnfSystem::image(const State& s, std::size_t k) const
{
    const auto b = block_of_[k];
    const auto& block = blocks_[b];
    CycloNum out = s.values[k].mul_zeta(zeta_exponent_[b]);
    out *= block.modulus;
    const bool last = k + 1 == offsets_[b] + static_cast<std::size_t>(block.size);
    if (!last) {
        out += s.values[k + 1];
    }
    return out;
}

State JnfSystem::step(const State& s) const
{
    State next;
    next.values.reserve(s.values.size());
    next.points.reserve(s.values.size());
    for (std::size_t k = 0; k < s.values.size(); ++k) {
        auto r = round_scalar(image(s, k), spec_);
        next.values.push_back(std::move(r.value));
        next.points.push_back(std::move(r.point));
    }
    return next;
}

RationalSystem::RationalSystem(RowSparseMatrix matrix, RationalVector initial, RationalVector target,
                               RoundingSpec spec)
    : matrix_(std::move(matrix)), raw_initial_(std::move(initial)), raw_target_(std::move(target)),
      spec_(std::move(spec))
{
    spec_.validate();
    if (spec_.shape != Shape::Argand) {
        fail(ErrorCode::UnsupportedCombination, "rational matrix systems use Argand rounding");
    }
    if (matrix_.size() == 0) {
        fail(ErrorCode::InvalidArgument, "empty matrix");
    }
    if (raw_initial_.size() != matrix_.size() || raw_target_.size() != matrix_.size()) {
        fail(ErrorCode::InvalidArgument, "initial and target vectors must have dimension " +
                                             std::to_string(matrix_.size()));
    }
    initial_ = round(raw_initial_);
    target_ = round(raw_target_);
}

RationalVector RationalSystem::round(const RationalVector& v) const
{
    RationalVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = round_real(v[i], spec_.kind, spec_.g);
    }
    return out;
}

RationalVector RationalSystem::step(const RationalVector& v) const
{
    return round(matrix_ * v);
}

// ---------------------------------------------------------------------------

bool is_reached(const Verdict& v)
{
    return std::holds_alternative<Reached>(v);
}

const char* certificate_name(const Certificate& c)
{
    return std::visit(
        [](const auto& x) -> const char* {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, CycleDetected>) {
                return "cycle-detected";
            } else if constexpr (std::is_same_v<T, EscapedRadius>) {
                return "escaped-radius";
            } else if constexpr (std::is_same_v<T, DivergedPastTarget>) {
                return "diverged-past-target";
            } else {
                return "stabilized-mismatch";
            }
        },
        c);
}

std::string describe(const Verdict& v)
{
    std::ostringstream out;
    if (const auto* r = std::get_if<Reached>(&v)) {
        out << "reached at step " << r->step;
        return out.str();
    }
    const auto& n = std::get<NotReached>(v);
    out << "not reached (" << certificate_name(n.certificate);
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, CycleDetected>) {
                out << ", step bound " << x.step_bound.get_str();
            } else if constexpr (std::is_same_v<T, EscapedRadius>) {
                out << ", dimension " << x.dimension << ", radius " << to_string(x.radius);
            } else {
                out << ", dimension " << x.dimension;
            }
        },
        n.certificate);
    out << ") after " << n.steps_simulated << " steps";
    return out.str();
}

Trace simulate(const JnfSystem& system, std::uint64_t max_steps)
{
    Trace trace;
    trace.states.push_back(system.initial());
    for (std::uint64_t i = 0;; ++i) {
        if (trace.states.back() == system.target()) {
            trace.hit = i;
            break;
        }
        if (i == max_steps) {
            break;
        }
        trace.states.push_back(system.step(trace.states.back()));
    }
    return trace;
}

RationalTrace simulate(const RationalSystem& system, std::uint64_t max_steps)
{
    RationalTrace trace;
    trace.states.push_back(system.initial());
    for (std::uint64_t i = 0;; ++i) {
        if (trace.states.back() == system.target()) {
            trace.hit = i;
            break;
        }
        if (i == max_steps) {
            break;
        }
        trace.states.push_back(system.step(trace.states.back()));
    }
    return trace;
}

namespace {

Rational modulus_sq_of(const GridPoint& p)
{
    return grid_modulus_sq(p);
}

template <typename StateT, typename Hash, typename System, typename ModSqAt>
Verdict brute_force(const System& system, const StateT& initial, const StateT& target,
                    const BruteForceOptions& options, ModSqAt modsq_at, std::size_t dim)
{
    if (sgn(options.ball_bound) < 0) {
        fail(ErrorCode::InvalidArgument, "ball bound must be nonnegative");
    }
    const Rational ball_sq = options.ball_bound * options.ball_bound;
    std::unordered_set<StateT, Hash> visited;
    StateT state = initial;
    for (std::uint64_t step = 0;; ++step) {
        if (state == target) {
            return Reached{step};
        }
        for (std::size_t k = 0; k < dim; ++k) {
            if (modsq_at(state, k) > ball_sq) {
                return NotReached{EscapedRadius{k + 1, options.ball_bound}, step};
            }
        }
        if (Integer(static_cast<unsigned long>(step)) > options.step_bound) {
            return NotReached{CycleDetected{options.step_bound}, step};
        }
        if (visited.size() < options.memory_budget) {
            if (!visited.insert(state).second) {
                return NotReached{CycleDetected{options.step_bound}, step};
            }
        }
        state = system.step(state);
    }
}

} // namespace

Verdict brute_force_decide(const JnfSystem& system, const BruteForceOptions& options)
{
    return brute_force<State, StateHash>(
        system, system.initial(), system.target(), options,
        [](const State& s, std::size_t k) { return modulus_sq_of(s.points[k]); }, system.dimension());
}

Verdict brute_force_decide(const RationalSystem& system, const BruteForceOptions& options)
{
    return brute_force<RationalVector, RationalVectorHash>(
        system, system.initial(), system.target(), options,
        [](const RationalVector& s, std::size_t k) { return Rational(s[k] * s[k]); }, system.dimension());
}

} // namespace roundreach
