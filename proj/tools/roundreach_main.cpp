// roundreach command-line frontend; talks to the library only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "roundreach/roundreach.h"

namespace {

constexpr int kExitDecided = 0;
constexpr int kExitError = 1;
constexpr int kExitUndecided = 2;

struct InstanceDeleter {
    void operator()(roundreach_instance* p) const { roundreach_instance_free(p); }
};
using InstancePtr = std::unique_ptr<roundreach_instance, InstanceDeleter>;

struct OwnedString {
    char* s = nullptr;
    ~OwnedString() { roundreach_string_free(s); }
    std::string str() const { return s == nullptr ? std::string() : std::string(s); }
};

int report(roundreach_status status)
{
    std::cerr << "roundreach: " << roundreach_last_error() << "\n";
    return status == ROUNDREACH_OK ? kExitDecided : kExitError;
}

std::string slurp(const std::string& path)
{
    if (path == "-") {
        return std::string(std::istreambuf_iterator<char>(std::cin), {});
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return {};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

roundreach_status load(const std::string& path, InstancePtr& out)
{
    roundreach_instance* raw = nullptr;
    const auto st = path == "-" ? roundreach_instance_parse(slurp(path).c_str(), &raw)
                                : roundreach_instance_load(path.c_str(), &raw);
    out.reset(raw);
    return st;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rounded point-to-point reachability for linear dynamical systems"};
    app.require_subcommand(1);
    app.set_version_flag("--version", roundreach_version());

    std::string path;
    bool oracle = false;
    std::uint64_t oracle_steps = 1000000;
    auto* decide = app.add_subcommand("decide", "Decide whether the target is reached; prints a JSON verdict");
    decide->add_option("instance", path, "Instance file (JSON, '-' for stdin)")->required();
    decide->add_flag("--oracle", oracle, "Explore the orbit with a visited set instead of a decision procedure");
    decide->add_option("--oracle-steps", oracle_steps, "Step budget for --oracle")->capture_default_str();

    std::uint64_t steps = 10;
    auto* simulate = app.add_subcommand("simulate", "Print the rounded orbit as JSON");
    simulate->add_option("instance", path, "Instance file")->required();
    simulate->add_option("--steps", steps, "Number of steps")->capture_default_str();

    bool polar = false;
    bool truncation = false;
    bool hyperbolic = false;
    auto* bounds = app.add_subcommand("bounds", "Print escape radii and resource bounds");
    bounds->add_option("instance", path, "Instance file")->required();
    auto* polar_flag = bounds->add_flag("--polar", polar, "Polar resource table only");
    auto* trunc_flag = bounds->add_flag("--truncation", truncation, "Truncation/expansion table only");
    auto* hyp_flag = bounds->add_flag("--hyperbolic", hyperbolic, "Escape radii only");
    polar_flag->excludes(trunc_flag)->excludes(hyp_flag);
    trunc_flag->excludes(hyp_flag);

    auto* format = app.add_subcommand("format", "Print the instance in canonical form");
    format->add_option("instance", path, "Instance file")->required();

    std::string qbf_path;
    std::string out_path;
    std::string family = "floor";
    std::string factor;
    bool pad = false;
    bool verbose = false;
    auto* compile = app.add_subcommand("compile-qbf", "Compile a QBF into a rational instance");
    compile->add_option("input", qbf_path, "QBF file (prefix form or QDIMACS, '-' for stdin)")->required();
    compile->add_option("-o,--out", out_path, "Instance file to write (stdout if omitted)");
    compile->add_option("--family", family, "Gadget family")
        ->check(CLI::IsMember({"floor", "ceil", "minerr"}))
        ->capture_default_str();
    compile->add_option("--perturb", factor, "Scale every entry by p/q after checking the gadgets");
    compile->add_flag("--pad", pad, "Insert unused variables until the prefix alternates");
    compile->add_flag("--verbose", verbose, "Print the program summary to stderr");

    std::int64_t radius = 10;
    std::string theta;
    std::uint64_t budget = 1000000;
    auto* rotate = app.add_subcommand("rotate", "Rounded rotation of every lattice point in a disk");
    rotate->add_option("--radius", radius, "Disk radius")->capture_default_str();
    rotate->add_option("--theta", theta, "Angle, e.g. 'pi/42' or '2^(2/5)/10 pi'")->required();
    rotate->add_option("--budget", budget, "Per-orbit step budget")->capture_default_str();
    rotate->add_option("--out", out_path, "CSV output path");

    CLI11_PARSE(app, argc, argv);

    if (decide->parsed()) {
        InstancePtr inst;
        if (auto st = load(path, inst); st != ROUNDREACH_OK) {
            return report(st);
        }
        roundreach_decide_options opts;
        roundreach_decide_options_init(&opts);
        opts.oracle = oracle ? 1 : 0;
        opts.oracle_steps = oracle_steps;
        roundreach_outcome outcome = ROUNDREACH_UNDECIDED;
        OwnedString json;
        if (auto st = roundreach_decide(inst.get(), &opts, &outcome, &json.s); st != ROUNDREACH_OK) {
            return report(st);
        }
        std::cout << json.str() << "\n";
        return outcome == ROUNDREACH_UNDECIDED ? kExitUndecided : kExitDecided;
    }

    if (simulate->parsed()) {
        InstancePtr inst;
        if (auto st = load(path, inst); st != ROUNDREACH_OK) {
            return report(st);
        }
        OwnedString json;
        if (auto st = roundreach_simulate(inst.get(), steps, &json.s); st != ROUNDREACH_OK) {
            return report(st);
        }
        std::cout << json.str() << "\n";
        return kExitDecided;
    }

    if (bounds->parsed()) {
        InstancePtr inst;
        if (auto st = load(path, inst); st != ROUNDREACH_OK) {
            return report(st);
        }
        auto view = ROUNDREACH_BOUNDS_AUTO;
        if (polar) {
            view = ROUNDREACH_BOUNDS_POLAR;
        } else if (truncation) {
            view = ROUNDREACH_BOUNDS_TRUNCATION;
        } else if (hyperbolic) {
            view = ROUNDREACH_BOUNDS_HYPERBOLIC;
        }
        OwnedString text;
        if (auto st = roundreach_bounds(inst.get(), view, &text.s); st != ROUNDREACH_OK) {
            return report(st);
        }
        std::cout << text.str();
        return kExitDecided;
    }

    if (format->parsed()) {
        InstancePtr inst;
        if (auto st = load(path, inst); st != ROUNDREACH_OK) {
            return report(st);
        }
        OwnedString json;
        if (auto st = roundreach_instance_serialize(inst.get(), &json.s); st != ROUNDREACH_OK) {
            return report(st);
        }
        std::cout << json.str();
        return kExitDecided;
    }

    if (compile->parsed()) {
        const std::string text = slurp(qbf_path);
        if (text.empty()) {
            std::cerr << "roundreach: cannot read '" << qbf_path << "'\n";
            return kExitError;
        }
        roundreach_instance* raw = nullptr;
        OwnedString summary;
        const auto st = roundreach_compile_qbf(text.c_str(), family.c_str(), factor.empty() ? nullptr : factor.c_str(),
                                               pad ? 1 : 0, &raw, &summary.s);
        InstancePtr inst(raw);
        if (st != ROUNDREACH_OK) {
            return report(st);
        }
        if (verbose) {
            std::cerr << summary.str() << "\n";
        }
        if (out_path.empty()) {
            OwnedString json;
            if (auto st2 = roundreach_instance_serialize(inst.get(), &json.s); st2 != ROUNDREACH_OK) {
                return report(st2);
            }
            std::cout << json.str();
        } else if (auto st2 = roundreach_instance_save(inst.get(), out_path.c_str()); st2 != ROUNDREACH_OK) {
            return report(st2);
        }
        return kExitDecided;
    }

    if (rotate->parsed()) {
        OwnedString summary;
        const auto st = roundreach_rotate_disk(radius, theta.c_str(), budget,
                                               out_path.empty() ? nullptr : out_path.c_str(), &summary.s);
        if (st != ROUNDREACH_OK) {
            return report(st);
        }
        std::cout << summary.str() << "\n";
        return kExitDecided;
    }
    return kExitError;
}
