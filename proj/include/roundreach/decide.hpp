#ifndef ROUNDREACH_DECIDE_HPP
#define ROUNDREACH_DECIDE_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "roundreach/system.hpp"

namespace roundreach {

struct DecideOptions {
    /// Stored states for repeat detection; above this only step counters are used.
    std::size_t memory_budget = std::size_t{1} << 20;
    /// Optional sink for human-readable decision events.
    std::vector<std::string>* events = nullptr;
};

/// Per-block lock-step decision for a system in Jordan form. Blocks with
/// |lambda| != 1 use escape radii; modulus-one blocks use the polar decider
/// (polar rounding) or the truncation/expansion decider (Argand truncate or
/// expand). Other modulus-one combinations raise unsupported-combination.
Verdict decide_jnf(const JnfSystem& system, const DecideOptions& options = {});

} // namespace roundreach

#endif
