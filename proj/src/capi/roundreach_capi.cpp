#include "roundreach/roundreach.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "roundreach/dispatch.hpp"
#include "roundreach/instance_io.hpp"
#include "roundreach/qbf.hpp"
#include "roundreach/rotation.hpp"

struct roundreach_instance {
    roundreach::Instance value;
};

namespace {

thread_local std::string last_error;

roundreach_status status_of(roundreach::ErrorCode code)
{
    using roundreach::ErrorCode;
    switch (code) {
    case ErrorCode::InvalidArgument: return ROUNDREACH_E_INVALID_ARGUMENT;
    case ErrorCode::Parse: return ROUNDREACH_E_PARSE;
    case ErrorCode::OrderMismatch: return ROUNDREACH_E_ORDER_MISMATCH;
    case ErrorCode::NotReal: return ROUNDREACH_E_NOT_REAL;
    case ErrorCode::ZeroInput: return ROUNDREACH_E_ZERO_INPUT;
    case ErrorCode::ModulusOne: return ROUNDREACH_E_MODULUS_ONE;
    case ErrorCode::Singular: return ROUNDREACH_E_SINGULAR;
    case ErrorCode::ValidationFailed: return ROUNDREACH_E_VALIDATION_FAILED;
    case ErrorCode::NonrationalSpectrum: return ROUNDREACH_E_NONRATIONAL_SPECTRUM;
    case ErrorCode::UnsupportedAngle: return ROUNDREACH_E_UNSUPPORTED_ANGLE;
    case ErrorCode::UnsupportedCombination: return ROUNDREACH_E_UNSUPPORTED_COMBINATION;
    case ErrorCode::GadgetBroken: return ROUNDREACH_E_GADGET_BROKEN;
    case ErrorCode::NonCanonicalPrefix: return ROUNDREACH_E_NONCANONICAL_PREFIX;
    case ErrorCode::TooLarge: return ROUNDREACH_E_TOO_LARGE;
    case ErrorCode::UndecidableTie: return ROUNDREACH_E_UNDECIDABLE_TIE;
    case ErrorCode::Io: return ROUNDREACH_E_IO;
    case ErrorCode::Internal: return ROUNDREACH_E_INTERNAL;
    }
    return ROUNDREACH_E_UNKNOWN;
}

template <typename F>
roundreach_status guarded(F&& body)
{
    try {
        last_error.clear();
        body();
        return ROUNDREACH_OK;
    } catch (const roundreach::Error& e) {
        last_error = std::string(roundreach::error_code_name(e.code())) + ": " + e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return ROUNDREACH_E_TOO_LARGE;
    } catch (const std::exception& e) {
        last_error = e.what();
        return ROUNDREACH_E_UNKNOWN;
    } catch (...) {
        last_error = "unknown failure";
        return ROUNDREACH_E_UNKNOWN;
    }
}

void require(bool ok, const char* what)
{
    if (!ok) {
        roundreach::fail(roundreach::ErrorCode::InvalidArgument, what);
    }
}

char* dup_string(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void put(char** dst, const std::string& s)
{
    if (dst != nullptr) {
        *dst = dup_string(s);
    }
}

} // namespace

extern "C" {

const char* roundreach_version(void)
{
    return "0.1.0";
}

const char* roundreach_status_name(roundreach_status status)
{
    switch (status) {
    case ROUNDREACH_OK: return "ok";
    case ROUNDREACH_E_INVALID_ARGUMENT: return "invalid-argument";
    case ROUNDREACH_E_PARSE: return "parse-error";
    case ROUNDREACH_E_ORDER_MISMATCH: return "order-mismatch";
    case ROUNDREACH_E_NOT_REAL: return "not-real";
    case ROUNDREACH_E_ZERO_INPUT: return "zero-input";
    case ROUNDREACH_E_MODULUS_ONE: return "modulus-one";
    case ROUNDREACH_E_SINGULAR: return "singular";
    case ROUNDREACH_E_VALIDATION_FAILED: return "validation-failed";
    case ROUNDREACH_E_NONRATIONAL_SPECTRUM: return "nonrational-spectrum";
    case ROUNDREACH_E_UNSUPPORTED_ANGLE: return "unsupported-angle";
    case ROUNDREACH_E_UNSUPPORTED_COMBINATION: return "unsupported-combination";
    case ROUNDREACH_E_GADGET_BROKEN: return "gadget-broken";
    case ROUNDREACH_E_NONCANONICAL_PREFIX: return "non-canonical-prefix";
    case ROUNDREACH_E_TOO_LARGE: return "too-large";
    case ROUNDREACH_E_UNDECIDABLE_TIE: return "undecidable-tie";
    case ROUNDREACH_E_IO: return "io-error";
    case ROUNDREACH_E_INTERNAL: return "internal-error";
    case ROUNDREACH_E_UNKNOWN: break;
    }
    return "unknown";
}

const char* roundreach_last_error(void)
{
    return last_error.c_str();
}

void roundreach_string_free(char* s)
{
    std::free(s);
}

void roundreach_decide_options_init(roundreach_decide_options* options)
{
    if (options != nullptr) {
        options->oracle = 0;
        options->oracle_steps = 1000000;
        options->memory_budget = std::uint64_t{1} << 20;
    }
}

roundreach_status roundreach_instance_parse(const char* json, roundreach_instance** out)
{
    return guarded([&] {
        require(json != nullptr && out != nullptr, "null argument");
        *out = new roundreach_instance{roundreach::parse_instance(json)};
    });
}

roundreach_status roundreach_instance_load(const char* path, roundreach_instance** out)
{
    return guarded([&] {
        require(path != nullptr && out != nullptr, "null argument");
        *out = new roundreach_instance{roundreach::load_instance(path)};
    });
}

roundreach_status roundreach_instance_save(const roundreach_instance* instance, const char* path)
{
    return guarded([&] {
        require(instance != nullptr && path != nullptr, "null argument");
        roundreach::save_instance(instance->value, path);
    });
}

roundreach_status roundreach_instance_serialize(const roundreach_instance* instance, char** out)
{
    return guarded([&] {
        require(instance != nullptr && out != nullptr, "null argument");
        *out = dup_string(roundreach::serialize_instance(instance->value));
    });
}

size_t roundreach_instance_dimension(const roundreach_instance* instance)
{
    return instance == nullptr ? 0 : roundreach::instance_dimension(instance->value);
}

void roundreach_instance_free(roundreach_instance* instance)
{
    delete instance;
}

roundreach_status roundreach_decide(const roundreach_instance* instance, const roundreach_decide_options* options,
                                    roundreach_outcome* outcome, char** verdict_json)
{
    return guarded([&] {
        require(instance != nullptr && outcome != nullptr, "null argument");
        roundreach::DispatchOptions opts;
        if (options != nullptr) {
            opts.oracle = options->oracle != 0;
            opts.oracle_steps = options->oracle_steps;
            opts.decide.memory_budget = static_cast<std::size_t>(options->memory_budget);
        }
        const auto result = roundreach::dispatch(instance->value, opts);
        if (!result.verdict) {
            *outcome = ROUNDREACH_UNDECIDED;
        } else {
            *outcome = roundreach::is_reached(*result.verdict) ? ROUNDREACH_REACHED : ROUNDREACH_NOT_REACHED;
        }
        put(verdict_json, roundreach::outcome_to_json(result));
    });
}

roundreach_status roundreach_simulate(const roundreach_instance* instance, uint64_t steps, char** trace_json)
{
    return guarded([&] {
        require(instance != nullptr && trace_json != nullptr, "null argument");
        *trace_json = dup_string(roundreach::trace_to_json(instance->value, steps));
    });
}

roundreach_status roundreach_bounds(const roundreach_instance* instance, roundreach_bounds_view view, char** report)
{
    return guarded([&] {
        require(instance != nullptr && report != nullptr, "null argument");
        roundreach::BoundsView v = roundreach::BoundsView::Auto;
        switch (view) {
        case ROUNDREACH_BOUNDS_AUTO: break;
        case ROUNDREACH_BOUNDS_HYPERBOLIC: v = roundreach::BoundsView::Hyperbolic; break;
        case ROUNDREACH_BOUNDS_POLAR: v = roundreach::BoundsView::Polar; break;
        case ROUNDREACH_BOUNDS_TRUNCATION: v = roundreach::BoundsView::Truncation; break;
        default: require(false, "unknown bounds view");
        }
        *report = dup_string(roundreach::bounds_report(instance->value, v));
    });
}

roundreach_status roundreach_compile_qbf(const char* qbf_text, const char* family, const char* perturb, int pad,
                                         roundreach_instance** out, char** summary_json)
{
    return guarded([&] {
        require(qbf_text != nullptr && out != nullptr, "null argument");
        auto formula = roundreach::parse_qbf_any(qbf_text);
        if (pad != 0) {
            formula = roundreach::pad_to_canonical(formula);
        }
        const auto fam = roundreach::parse_family(family == nullptr ? "floor" : family);
        const auto program = roundreach::lower_qbf_to_program(formula, fam);
        auto inst = roundreach::explode_program_to_matrix(program);
        if (perturb != nullptr) {
            inst = roundreach::perturb(inst, program, roundreach::parse_rational(perturb));
        }
        nlohmann::json summary = nlohmann::json::object();
        summary["formula"] = roundreach::to_string(formula);
        summary["n"] = inst.meta.n;
        summary["ell"] = inst.meta.ell;
        summary["m"] = inst.meta.m;
        summary["t"] = inst.meta.t;
        summary["dimension"] = inst.meta.dimension;
        summary["family"] = roundreach::family_name(fam);
        summary["factor"] = roundreach::to_string(inst.meta.factor);
        summary["steps"] = program.step_labels;
        summary["variables"] = program.names;
        put(summary_json, summary.dump());
        *out = new roundreach_instance{roundreach::to_instance(inst)};
    });
}

roundreach_status roundreach_evaluate_qbf(const char* qbf_text, int* value)
{
    return guarded([&] {
        require(qbf_text != nullptr && value != nullptr, "null argument");
        *value = roundreach::evaluate_qbf(roundreach::parse_qbf_any(qbf_text)) ? 1 : 0;
    });
}

roundreach_status roundreach_rotate_point(int64_t x, int64_t y, const char* theta, int64_t* out_x, int64_t* out_y)
{
    return guarded([&] {
        require(theta != nullptr && out_x != nullptr && out_y != nullptr, "null argument");
        const auto p = roundreach::rotate_round({x, y}, roundreach::RotationAngle::parse(theta));
        *out_x = p.x;
        *out_y = p.y;
    });
}

roundreach_status roundreach_rotate_disk(int64_t radius, const char* theta, uint64_t budget, const char* csv_path,
                                         char** summary_json)
{
    return guarded([&] {
        require(theta != nullptr, "null argument");
        const auto angle = roundreach::RotationAngle::parse(theta);
        const auto report = roundreach::run_disk(radius, angle, budget);
        if (csv_path != nullptr) {
            roundreach::emit_grid(report, std::string(csv_path));
        }
        nlohmann::json summary = nlohmann::json::object();
        summary["radius"] = radius;
        summary["theta"] = angle.text();
        summary["exact_path"] = angle.is_exact();
        summary["starts"] = report.orbits.size();
        summary["cells"] = report.cells.size();
        summary["max_transient"] = report.max_transient;
        summary["max_period"] = report.max_period;
        nlohmann::json unresolved = nlohmann::json::array();
        for (const auto& p : report.unresolved) {
            unresolved.push_back(nlohmann::json::array({p.x, p.y}));
        }
        summary["unresolved"] = std::move(unresolved);
        std::size_t outside = 0;
        for (const auto& [p, gen] : report.cells) {
            outside += p.x * p.x + p.y * p.y > radius * radius ? 1 : 0;
        }
        summary["cells_outside_disk"] = outside;
        put(summary_json, summary.dump());
    });
}

} // extern "C"
