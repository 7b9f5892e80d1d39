#include "roundreach/dispatch.hpp"

#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "roundreach/argand.hpp"
#include "roundreach/hyperbolic.hpp"
#include "roundreach/polar.hpp"

namespace roundreach {

using Json = nlohmann::json;

namespace {

Json point_json(const GridPoint& p, const RoundingSpec& spec)
{
    Json out = Json::object();
    if (const auto* a = std::get_if<ArgandPoint>(&p)) {
        out["re"] = to_string(a->re);
        out["im"] = to_string(a->im);
    } else {
        const auto& q = std::get<PolarPoint>(p);
        out["modulus"] = to_string(q.modulus);
        out["index"] = q.index;
        out["angle"] = Angle(q.index, spec.r).to_string();
    }
    return out;
}

Json state_json(const State& s, const RoundingSpec& spec)
{
    Json out = Json::array();
    for (const auto& p : s.points) {
        out.push_back(point_json(p, spec));
    }
    return out;
}

Json vector_json(const RationalVector& v)
{
    Json out = Json::array();
    for (const auto& x : v) {
        out.push_back(to_string(x));
    }
    return out;
}

Json certificate_json(const Certificate& c)
{
    Json out = Json::object();
    out["kind"] = certificate_name(c);
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, CycleDetected>) {
                out["step_bound"] = x.step_bound.get_str();
            } else if constexpr (std::is_same_v<T, EscapedRadius>) {
                out["dimension"] = x.dimension;
                out["radius"] = to_string(x.radius);
            } else {
                out["dimension"] = x.dimension;
            }
        },
        c);
    return out;
}

bool unit_modulus_supported(const RoundingSpec& spec)
{
    return spec.shape == Shape::Polar || spec.kind == RealRounding::Truncate || spec.kind == RealRounding::Expand;
}

std::string jnf_procedure(const JnfSystem& system)
{
    bool unit = false;
    bool other = false;
    for (const auto& b : system.blocks()) {
        (b.modulus == 1 ? unit : other) = true;
    }
    if (!unit) {
        return "hyperbolic";
    }
    if (other) {
        return "lock-step";
    }
    if (system.spec().shape == Shape::Polar) {
        return "polar";
    }
    return system.spec().kind == RealRounding::Truncate ? "truncation" : "expansion";
}

// Plain orbit exploration: Reached, a genuine repeat, or undecided on budget.
template <typename S, typename H, typename Sys, typename Show>
Outcome explore(const Sys& system, const S& initial, const S& target, const DispatchOptions& options, Show show)
{
    Outcome out;
    out.procedure = "oracle";
    std::unordered_set<S, H> seen;
    S state = initial;
    for (std::uint64_t step = 0;; ++step) {
        if (state == target) {
            out.verdict = Reached{step};
            out.witness = show(state);
            return out;
        }
        if (!seen.insert(state).second) {
            out.verdict = NotReached{CycleDetected{Integer(std::to_string(step))}, step};
            return out;
        }
        if (step == options.oracle_steps || seen.size() > options.decide.memory_budget) {
            out.reason = "orbit neither repeated nor hit the target within " + std::to_string(step) + " steps";
            return out;
        }
        state = system.step(state);
    }
}

std::string short_integer(const Integer& v)
{
    const std::string s = v.get_str();
    if (s.size() <= 40) {
        return s;
    }
    return s.substr(0, 1) + "." + s.substr(1, 5) + "e" + std::to_string(s.size() - 1);
}

std::string short_rational(const Rational& v)
{
    if (v.get_den() == 1) {
        return short_integer(v.get_num());
    }
    const std::string s = to_string(v);
    if (s.size() <= 40) {
        return s;
    }
    return "~" + short_integer(floor_of(v));
}

void radius_table(std::ostream& out, const RadiusTable& t)
{
    out << "  escape radii (ell = " << to_string(t.ell) << ")\n";
    for (std::size_t k = 0; k < t.c.size(); ++k) {
        out << "    C_" << (k + 1) << " = " << short_rational(t.c[k]) << "\n";
    }
    out << "  hypercube count  = " << short_integer(t.hypercube) << "\n";
    out << "  step bound       = " << short_integer(t.step_bound) << "\n";
}

void polar_table(std::ostream& out, const ResourceBounds& r)
{
    out << "  polar resources (i_s = " << to_string(r.i_s) << ", y_s = " << to_string(r.y_s) << ")\n";
    out << "    k  T_k  U_k\n";
    for (std::size_t k = 0; k < r.t.size(); ++k) {
        out << "    " << (k + 1) << "  " << short_integer(r.t[k]) << "  " << short_rational(r.u[k]) << "\n";
    }
    out << "  F = " << short_rational(r.f) << "\n";
    out << "  closed form U_{d-j} <= (F max(1, i_s))^(2^j): " << (r.closed_form_holds ? "holds" : "FAILS") << "\n";
    if (!r.exact) {
        out << "  (recurrences too large to evaluate exactly)\n";
    }
}

void truncation_table(std::ostream& out, const TruncationBounds& r)
{
    out << "  truncation resources (i_s = " << to_string(r.i_s) << ")\n";
    out << "    k  T_k  U_k\n";
    for (std::size_t k = 0; k < r.t.size(); ++k) {
        out << "    " << (k + 1) << "  " << short_integer(r.t[k]) << "  " << short_rational(r.u[k]) << "\n";
    }
    out << "  F = " << short_rational(r.f) << "\n";
    out << "  closed form U_{d-j} <= (F max(1, i_s))^((d+1)^j): " << (r.closed_form_holds ? "holds" : "FAILS")
        << "\n";
    if (!r.exact) {
        out << "  (recurrences too large to evaluate exactly)\n";
    }
}

} // namespace

Outcome dispatch(const Instance& instance, const DispatchOptions& options)
{
    if (const auto* jnf = std::get_if<JnfSystem>(&instance)) {
        if (options.oracle) {
            return explore<State, StateHash>(*jnf, jnf->initial(), jnf->target(), options, [&](const State& s) {
                return state_json(s, jnf->spec()).dump();
            });
        }
        Outcome out;
        out.procedure = jnf_procedure(*jnf);
        for (const auto& b : jnf->blocks()) {
            if (b.modulus == 1 && !unit_modulus_supported(jnf->spec())) {
                out.procedure = "none";
                out.reason = std::string("a modulus-one block under Argand ") + rounding_name(jnf->spec().kind) +
                             " rounding has no known decision procedure (this includes rounded planar rotations)";
                return out;
            }
        }
        out.verdict = decide_jnf(*jnf, options.decide);
        if (is_reached(*out.verdict)) {
            out.witness = state_json(jnf->target(), jnf->spec()).dump();
        }
        return out;
    }

    const auto& r = std::get<RationalInstance>(instance);
    if (options.oracle) {
        return explore<RationalVector, RationalVectorHash>(r.system, r.system.initial(), r.system.target(), options,
                                                           [](const RationalVector& s) { return vector_json(s).dump(); });
    }
    Outcome out;
    out.procedure = "hyperbolic-general";
    try {
        out.verdict = r.p ? decide_hyperbolic_general(r.system, *r.p, *r.j, options.decide)
                          : decide_hyperbolic_general(r.system, options.decide);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ModulusOne) {
            throw;
        }
        out.procedure = "none";
        out.reason = std::string("not hyperbolic: ") + e.what() +
                     "; modulus-one eigenvalues of general matrices have no known decision procedure";
        return out;
    }
    if (is_reached(*out.verdict)) {
        out.witness = vector_json(r.system.target()).dump();
    }
    return out;
}

std::string outcome_to_json(const Outcome& outcome)
{
    Json out = Json::object();
    out["procedure"] = outcome.procedure;
    if (!outcome.verdict) {
        out["outcome"] = "undecided-by-this-tool";
        out["reason"] = outcome.reason;
        return out.dump();
    }
    if (const auto* r = std::get_if<Reached>(&*outcome.verdict)) {
        out["outcome"] = "reached";
        out["step"] = r->step;
        out["witness"] = Json::parse(outcome.witness);
        return out.dump();
    }
    const auto& n = std::get<NotReached>(*outcome.verdict);
    out["outcome"] = "not-reached";
    out["certificate"] = certificate_json(n.certificate);
    out["steps_simulated"] = n.steps_simulated;
    return out.dump();
}

std::string trace_to_json(const Instance& instance, std::uint64_t steps)
{
    Json out = Json::object();
    Json states = Json::array();
    std::optional<std::uint64_t> hit;
    if (const auto* jnf = std::get_if<JnfSystem>(&instance)) {
        const auto trace = simulate(*jnf, steps);
        for (const auto& s : trace.states) {
            states.push_back(state_json(s, jnf->spec()));
        }
        hit = trace.hit;
    } else {
        const auto trace = simulate(std::get<RationalInstance>(instance).system, steps);
        for (const auto& s : trace.states) {
            states.push_back(vector_json(s));
        }
        hit = trace.hit;
    }
    out["hit"] = hit ? Json(*hit) : Json(nullptr);
    out["states"] = std::move(states);
    return out.dump();
}

std::string bounds_report(const Instance& instance, BoundsView view)
{
    std::ostringstream out;
    if (const auto* r = std::get_if<RationalInstance>(&instance)) {
        if (view == BoundsView::Polar || view == BoundsView::Truncation) {
            fail(ErrorCode::UnsupportedCombination, "rational systems only have hyperbolic bounds");
        }
        Matrix p;
        Matrix j;
        if (r->p) {
            p = *r->p;
            j = *r->j;
        } else {
            auto form = jnf_rational(r->system.matrix().to_dense());
            p = std::move(form.p);
            j = std::move(form.j);
        }
        const auto b = hyperbolic_general_bounds(r->system, p, j);
        out << "rational system, dimension " << r->system.dimension() << "\n";
        out << "conjugated rounding effect = " << to_string(b.rounding.delta) << "\n";
        for (std::size_t i = 0; i < b.blocks.size(); ++i) {
            out << "block " << (i + 1) << ": size " << b.blocks[i].second << ", eigenvalue "
                << to_string(b.blocks[i].first) << "\n";
            radius_table(out, b.tables[i]);
        }
        out << "step bound = " << short_integer(b.step_bound) << "\n";
        return out.str();
    }

    const auto& system = std::get<JnfSystem>(instance);
    const auto& spec = system.spec();
    out << "jnf system, dimension " << system.dimension() << ", rounding " << (spec.shape == Shape::Polar ? "polar " : "argand ")
        << rounding_name(spec.kind) << ", g = " << to_string(spec.g);
    if (spec.shape == Shape::Polar) {
        out << ", R = " << spec.r;
    }
    out << "\n";
    for (std::size_t b = 0; b < system.blocks().size(); ++b) {
        const auto& block = system.blocks()[b];
        out << "block " << (b + 1) << ": size " << block.size << ", eigenvalue " << to_string(block.modulus)
            << " e^(i " << block.angle.to_string() << ")\n";
        if (block.modulus != 1) {
            if (view != BoundsView::Auto && view != BoundsView::Hyperbolic) {
                out << "  (not applicable: |lambda| != 1)\n";
                continue;
            }
            // hyperbolic_bounds needs every block hyperbolic; compute per block instead.
            const auto first = static_cast<std::ptrdiff_t>(system.block_offset(b));
            const auto last = first + static_cast<std::ptrdiff_t>(block.size);
            std::vector<JordanBlock> one{block};
            std::vector<ComplexValue> init(system.raw_initial().begin() + first, system.raw_initial().begin() + last);
            std::vector<ComplexValue> target(system.raw_target().begin() + first, system.raw_target().begin() + last);
            const JnfSystem sub(one, init, target, spec);
            radius_table(out, hyperbolic_bounds(sub).front());
        } else if (spec.shape == Shape::Polar) {
            if (view != BoundsView::Auto && view != BoundsView::Polar) {
                out << "  (not applicable: polar rounding)\n";
                continue;
            }
            polar_table(out, resource_bounds(system, b));
        } else if (spec.kind == RealRounding::Truncate || spec.kind == RealRounding::Expand) {
            if (view != BoundsView::Auto && view != BoundsView::Truncation) {
                out << "  (not applicable: Argand " << rounding_name(spec.kind) << " rounding)\n";
                continue;
            }
            truncation_table(out, truncation_bounds(system, b));
        } else {
            out << "  (no bounds: modulus-one block under Argand " << rounding_name(spec.kind) << " rounding)\n";
        }
    }
    return out.str();
}

} // namespace roundreach
