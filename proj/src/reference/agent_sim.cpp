#include "agent_sim.hpp"

#include <cmath>

namespace pfepi::reference {

namespace {

enum class Stage : std::uint8_t { exposed, ia_sym, ia_asym, is, h_recover, h_die };

struct Agent {
    Stage stage;
    std::int32_t days_left;
};

// Per-agent draw from a small discrete distribution by CDF walk.
std::int64_t draw_value(RngStream& g, const DiscreteDistribution& dist)
{
    const double u = g.next_unit();
    double cum = 0.0;
    for (std::size_t i = 0; i < dist.values.size(); ++i) {
        cum += dist.probabilities[i];
        if (u < cum)
            return dist.values[i];
    }
    return dist.values.back();
}

// Per-agent offspring count for one day with the given activity damping.
std::int64_t draw_offspring(RngStream& g, double activity, const std::array<double, 6>& base)
{
    const double u = g.next_unit();
    double cum = (1.0 - activity) + activity * base[0];
    if (u < cum)
        return 0;
    for (std::size_t j = 1; j < 6; ++j) {
        cum += activity * base[j];
        if (u < cum)
            return static_cast<std::int64_t>(j);
    }
    return 5;
}

std::int64_t draw_two_point(RngStream& g, double mean)
{
    const double f = std::floor(mean);
    const auto lo = static_cast<std::int64_t>(f);
    if (mean == f)
        return lo;
    return g.next_unit() < (mean - f) ? lo + 1 : lo;
}

} // namespace

AgentSimResult simulate_agents(const FixedParams& fixed, const DynamicParams& dyn,
                               std::int64_t seed_agents, std::int64_t days, RngStream g)
{
    AgentSimResult res;
    res.h_stock.reserve(static_cast<std::size_t>(days));
    res.r_cum.reserve(static_cast<std::size_t>(days));
    res.d_cum.reserve(static_cast<std::size_t>(days));

    std::vector<Agent> agents;
    agents.reserve(static_cast<std::size_t>(seed_agents) * 16);
    for (std::int64_t i = 0; i < seed_agents; ++i)
        agents.push_back({Stage::exposed, static_cast<std::int32_t>(fixed.t_e)});

    std::int64_t r_cum = 0;
    std::int64_t d_cum = 0;
    std::vector<Agent> next;

    for (std::int64_t day = 1; day <= days; ++day) {
        // Infections first, from the I_a membership at the start of the day.
        std::int64_t fresh = 0;
        for (const Agent& a : agents) {
            if (a.stage == Stage::ia_sym)
                fresh += draw_offspring(g, dyn.contact_rate, fixed.offspring);
            else if (a.stage == Stage::ia_asym)
                fresh += draw_offspring(g, fixed.k * dyn.contact_rate, fixed.offspring);
        }
        res.infected_cum += fresh;
        // New infections join E before the countdown: the infection day is
        // their first exposed day, as in the cohort engine.
        for (std::int64_t i = 0; i < fresh; ++i)
            agents.push_back({Stage::exposed, static_cast<std::int32_t>(fixed.t_e)});

        // Countdown and transitions.
        next.clear();
        next.reserve(agents.size());
        std::int64_t h_stock = 0;
        for (Agent a : agents) {
            if (--a.days_left > 0) {
                if (a.stage == Stage::h_recover || a.stage == Stage::h_die)
                    ++h_stock;
                next.push_back(a);
                continue;
            }
            switch (a.stage) {
            case Stage::exposed: {
                const bool symptomatic = g.next_unit() < fixed.p_as;
                const auto& dist = symptomatic ? fixed.dist_t_as : fixed.dist_t_a_inf;
                next.push_back({symptomatic ? Stage::ia_sym : Stage::ia_asym,
                                static_cast<std::int32_t>(draw_value(g, dist))});
                break;
            }
            case Stage::ia_asym:
                break; // recovered unseen, leaves the model
            case Stage::ia_sym:
                if (g.next_unit() < fixed.p_sh)
                    next.push_back(
                        {Stage::is, static_cast<std::int32_t>(draw_value(g, fixed.dist_t_sh))});
                // else self-quarantines and leaves the model
                break;
            case Stage::is: {
                const bool dies = g.next_unit() < dyn.p_hd;
                const auto stay = static_cast<std::int32_t>(draw_two_point(g, dyn.mean_t_h));
                next.push_back({dies ? Stage::h_die : Stage::h_recover, stay});
                ++h_stock;
                break;
            }
            case Stage::h_recover:
                ++r_cum;
                break;
            case Stage::h_die:
                ++d_cum;
                break;
            }
        }
        agents.swap(next);

        res.h_stock.push_back(h_stock);
        res.r_cum.push_back(r_cum);
        res.d_cum.push_back(d_cum);
    }
    res.active_agents = static_cast<std::int64_t>(agents.size());
    return res;
}

} // namespace pfepi::reference
