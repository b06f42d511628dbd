#ifndef PFEPI_REFERENCE_AGENT_SIM_HPP
#define PFEPI_REFERENCE_AGENT_SIM_HPP

#include <cstdint>
#include <vector>

#include "pfepi/epimodel.hpp"
#include "pfepi/rng.hpp"

namespace pfepi::reference {

/// Daily trajectories of the quantities the filter observes.
struct AgentSimResult {
    std::vector<std::int64_t> h_stock;  // index = day, starting at day 1
    std::vector<std::int64_t> r_cum;
    std::vector<std::int64_t> d_cum;
    std::int64_t infected_cum = 0;
    std::int64_t active_agents = 0; // still queued in a compartment at the end
};

/// Straightforward per-agent simulator over explicit agent lists, with one
/// categorical draw per agent and day.  Distributionally equivalent to the
/// cohort engine but written independently of it (no binomial or
/// multinomial cohort draws); kept as the serial reference the cohort
/// kernels are validated against.
AgentSimResult simulate_agents(const FixedParams& fixed, const DynamicParams& dyn,
                               std::int64_t seed_agents, std::int64_t days, RngStream stream);

} // namespace pfepi::reference

#endif
