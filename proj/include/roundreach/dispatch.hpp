#ifndef ROUNDREACH_DISPATCH_HPP
#define ROUNDREACH_DISPATCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "roundreach/decide.hpp"
#include "roundreach/instance_io.hpp"

namespace roundreach {

struct DispatchOptions {
    DecideOptions decide;
    /// Explore the orbit with a visited set instead of running a decider.
    bool oracle = false;
    std::uint64_t oracle_steps = 1000000;
};

struct Outcome {
    /// Empty when no procedure applies (undecided-by-this-tool).
    std::optional<Verdict> verdict;
    std::string procedure;
    std::string reason;
    /// JSON text of the state reached, for Reached verdicts.
    std::string witness;
};

Outcome dispatch(const Instance& instance, const DispatchOptions& options = {});

/// Single-line JSON object describing the outcome.
std::string outcome_to_json(const Outcome& outcome);

/// {"hit": step or null, "states": [...]} for the first `steps` steps.
std::string trace_to_json(const Instance& instance, std::uint64_t steps);

enum class BoundsView { Auto, Hyperbolic, Polar, Truncation };

/// Human-readable bound tables per block.
std::string bounds_report(const Instance& instance, BoundsView view = BoundsView::Auto);

} // namespace roundreach

#endif
