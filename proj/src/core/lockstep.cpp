#include "lockstep.hpp"

#include <unordered_set>

namespace roundreach::detail {

BlockView block_view(const JnfSystem& system, std::size_t block)
{
    return {block, system.block_offset(block), static_cast<std::size_t>(system.blocks()[block].size)};
}

void log_event(const DecideOptions& options, const std::string& message)
{
    if (options.events != nullptr) {
        options.events->push_back(message);
    }
}

Rational modulus_upper_bound(const Rational& modulus_sq)
{
    Integer num_root;
    Integer den_root;
    if (mpz_perfect_square_p(modulus_sq.get_num_mpz_t()) != 0 &&
        mpz_perfect_square_p(modulus_sq.get_den_mpz_t()) != 0) {
        mpz_sqrt(num_root.get_mpz_t(), modulus_sq.get_num_mpz_t());
        mpz_sqrt(den_root.get_mpz_t(), modulus_sq.get_den_mpz_t());
        return make_rational(num_root, den_root);
    }
    const Integer c = ceil_of(modulus_sq);
    Integer root;
    mpz_sqrt(root.get_mpz_t(), c.get_mpz_t());
    if (root * root < c) {
        ++root;
    }
    return Rational(root);
}

Verdict run_lockstep(const JnfSystem& system, std::vector<std::unique_ptr<BlockMonitor>>& monitors,
                     const DecideOptions& options)
{
    const std::size_t count = monitors.size();
    std::vector<Observation> status(count);
    State state = system.initial();
    if (state == system.target()) {
        return Reached{0};
    }
    for (std::size_t b = 0; b < count; ++b) {
        status[b] = monitors[b]->start(state);
        if (status[b].status == MonitorStatus::Concluded) {
            return NotReached{*status[b].certificate, 0};
        }
    }

    std::unordered_set<State, StateHash> visited;
    bool storing = options.memory_budget > 0;
    if (storing) {
        visited.insert(state);
    }
    std::optional<std::uint64_t> bounded_since;
    Integer product = 1;

    for (std::uint64_t step = 1;; ++step) {
        State next = system.step(state);
        if (next == system.target()) {
            return Reached{step};
        }
        bool all_bounded = true;
        for (std::size_t b = 0; b < count; ++b) {
            if (status[b].status == MonitorStatus::Concluded) {
                continue;
            }
            status[b] = monitors[b]->observe(step, state, next);
            if (status[b].status == MonitorStatus::Concluded) {
                log_event(options, "block " + std::to_string(b + 1) + " concluded at step " + std::to_string(step));
                return NotReached{*status[b].certificate, step};
            }
            if (status[b].status != MonitorStatus::Bounded) {
                all_bounded = false;
            }
        }

        if (all_bounded && !bounded_since) {
            bounded_since = step;
            product = 1;
            for (const auto& s : status) {
                product *= s.bound;
            }
            log_event(options, "all blocks bounded at step " + std::to_string(step) + ", at most " +
                                   product.get_str() + " further states");
        }

        if (storing) {
            if (!visited.insert(next).second) {
                const Integer bound = bounded_since ? product : Integer(static_cast<unsigned long>(step));
                return NotReached{CycleDetected{bound}, step};
            }
            if (visited.size() >= options.memory_budget) {
                storing = false;
                visited.clear();
                log_event(options, "state memory budget exhausted; continuing with counters");
            }
        }

        if (bounded_since) {
            const Integer elapsed(static_cast<unsigned long>(step - *bounded_since));
            if (elapsed > product) {
                return NotReached{CycleDetected{product}, step};
            }
        } else {
            for (std::size_t b = 0; b < count; ++b) {
                if (status[b].status != MonitorStatus::Running) {
                    continue;
                }
                if (auto ceiling = monitors[b]->step_ceiling();
                    ceiling && Integer(static_cast<unsigned long>(step)) > *ceiling) {
                    fail(ErrorCode::Internal, "block " + std::to_string(b + 1) +
                                                  " did not settle within its proven step bound " +
                                                  ceiling->get_str());
                }
            }
        }
        state = std::move(next);
    }
}

} // namespace roundreach::detail

namespace roundreach {

Verdict decide_jnf(const JnfSystem& system, const DecideOptions& options)
{
    std::vector<std::unique_ptr<detail::BlockMonitor>> monitors;
    for (std::size_t b = 0; b < system.blocks().size(); ++b) {
        const auto& block = system.blocks()[b];
        if (block.modulus != 1) {
            monitors.push_back(detail::make_hyperbolic_monitor(system, b, options));
        } else if (system.spec().shape == Shape::Polar) {
            monitors.push_back(detail::make_polar_monitor(system, b, options));
        } else if (system.spec().kind == RealRounding::Truncate || system.spec().kind == RealRounding::Expand) {
            monitors.push_back(detail::make_argand_monitor(system, b, options));
        } else {
            fail(ErrorCode::UnsupportedCombination,
                 std::string("modulus-one block under Argand ") + rounding_name(system.spec().kind) +
                     " rounding: no decision procedure is known");
        }
    }
    return detail::run_lockstep(system, monitors, options);
}

} // namespace roundreach
