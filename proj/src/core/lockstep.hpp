#ifndef ROUNDREACH_SRC_LOCKSTEP_HPP
#define ROUNDREACH_SRC_LOCKSTEP_HPP

// Internal: synchronous simulation of a Jordan-form system with one monitor
// per block deciding when that block's future can no longer produce the target.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "roundreach/decide.hpp"
#include "roundreach/system.hpp"

namespace roundreach::detail {

enum class MonitorStatus { Running, Bounded, Concluded };

struct Observation {
    MonitorStatus status = MonitorStatus::Running;
    std::optional<Certificate> certificate;
    /// For Bounded: number of distinct block states the future can visit.
    Integer bound = 1;

    static Observation running() { return {}; }
    static Observation bounded(Integer b) { return {MonitorStatus::Bounded, std::nullopt, std::move(b)}; }
    static Observation concluded(Certificate c) { return {MonitorStatus::Concluded, std::move(c), 1}; }
};

class BlockMonitor {
public:
    virtual ~BlockMonitor() = default;
    virtual Observation start(const State& initial) = 0;
    /// `step` is the index of `after`.
    virtual Observation observe(std::uint64_t step, const State& before, const State& after) = 0;
    /// Upper bound on the steps this monitor may need before it is Bounded or
    /// Concluded; exceeding it is an internal error.
    virtual std::optional<Integer> step_ceiling() const { return std::nullopt; }
};

struct BlockView {
    std::size_t block = 0;
    std::size_t offset = 0;
    std::size_t size = 0;
};

BlockView block_view(const JnfSystem& system, std::size_t block);

void log_event(const DecideOptions& options, const std::string& message);

Verdict run_lockstep(const JnfSystem& system, std::vector<std::unique_ptr<BlockMonitor>>& monitors,
                     const DecideOptions& options);

std::unique_ptr<BlockMonitor> make_hyperbolic_monitor(const JnfSystem& system, std::size_t block,
                                                      const DecideOptions& options);
std::unique_ptr<BlockMonitor> make_polar_monitor(const JnfSystem& system, std::size_t block,
                                                 const DecideOptions& options);
std::unique_ptr<BlockMonitor> make_argand_monitor(const JnfSystem& system, std::size_t block,
                                                  const DecideOptions& options);

/// Smallest rational upper bound of the form sqrt(q) exact or an integer ceiling.
Rational modulus_upper_bound(const Rational& modulus_sq);

double log2_of(const Rational& v);
/// u[size - 1 - j] <= base^(growth^j) for every j.
bool closed_form_dominates(const std::vector<Rational>& u, const Rational& base, unsigned growth);

} // namespace roundreach::detail

#endif
