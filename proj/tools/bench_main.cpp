// Benchmark: OpenMP ensemble kernel against the serial loop (identical
// results by construction), and the cohort engine against the per-agent
// reference simulator.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pfepi/ensemble.hpp"
#include "pfepi/experiment.hpp"
#include "../src/reference/agent_sim.hpp"

using namespace pfepi;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t ensemble_checksum(const std::vector<Particle>& particles)
{
    std::uint64_t h = 0;
    for (const Particle& p : particles) {
        h = avalanche64(h ^ static_cast<std::uint64_t>(p.state.infected_cum));
        h = avalanche64(h ^ static_cast<std::uint64_t>(p.state.h_stock()));
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(p.dyn.contact_rate));
        std::memcpy(&bits, &p.dyn.contact_rate, sizeof(bits));
        h = avalanche64(h ^ bits);
    }
    return h;
}

} // namespace

int main(int argc, char** argv)
{
    std::int64_t n_particles = 20000;
    std::int64_t days = 60;
    if (argc > 1)
        n_particles = std::stoll(argv[1]);
    if (argc > 2)
        days = std::stoll(argv[2]);

    ExperimentConfig cfg;
    cfg.n_particles = n_particles;
    cfg.master_seed = 7;

    std::printf("ensemble step kernel: %lld particles x %lld days\n",
                static_cast<long long>(n_particles), static_cast<long long>(days));

    auto serial = init_particles(cfg);
    auto t0 = Clock::now();
    for (std::int64_t day = 1; day <= days; ++day)
        step_all_serial(serial, day, cfg.fixed, cfg.master_seed);
    const double t_serial = seconds_since(t0);
    const double steps = static_cast<double>(n_particles) * static_cast<double>(days);
    std::printf("  serial reference: %8.3f s  (%.2fM particle-days/s)\n", t_serial,
                steps / t_serial / 1e6);

#ifdef _OPENMP
    const int threads = omp_get_max_threads();
#else
    const int threads = 1;
#endif
    auto parallel = init_particles(cfg);
    t0 = Clock::now();
    for (std::int64_t day = 1; day <= days; ++day)
        step_all(parallel, day, cfg.fixed, cfg.master_seed, threads);
    const double t_parallel = seconds_since(t0);
    std::printf("  openmp x%-2d      : %8.3f s  (%.2fM particle-days/s, %.2fx)\n", threads,
                t_parallel, steps / t_parallel / 1e6, t_serial / t_parallel);

    if (ensemble_checksum(serial) != ensemble_checksum(parallel)) {
        std::printf("  MISMATCH between serial and parallel results\n");
        return 1;
    }
    std::printf("  results identical\n\n");

    // Cohort queues vs explicit agent lists on the same scenario.
    const std::int64_t replicates = 200;
    const std::int64_t agent_days = 60;
    DynamicParams dyn{0.6, 0.02, 12.0};
    FixedParams fixed = FixedParams::defaults();

    std::printf("cohort engine vs per-agent reference: 50 seeds, %lld days, %lld replicates\n",
                static_cast<long long>(agent_days), static_cast<long long>(replicates));
    t0 = Clock::now();
    std::int64_t cohort_infected = 0;
    for (std::int64_t rep = 0; rep < replicates; ++rep) {
        Particle p;
        p.rng_id = static_cast<std::uint64_t>(rep);
        p.dyn = dyn;
        p.state.e_queue[static_cast<std::size_t>(fixed.t_e - 1)] = 50;
        p.state.initial_seed = 50;
        for (std::int64_t day = 1; day <= agent_days; ++day)
            step_particle(p, day, fixed, 1234, &dyn);
        cohort_infected += p.state.infected_cum;
    }
    const double t_cohort = seconds_since(t0);
    std::printf("  cohort queues   : %8.3f s (mean cumulative infections %.1f)\n", t_cohort,
                static_cast<double>(cohort_infected) / static_cast<double>(replicates));

    t0 = Clock::now();
    std::int64_t agent_infected = 0;
    for (std::int64_t rep = 0; rep < replicates; ++rep) {
        auto stream = RngStream::derive(4321, {static_cast<std::uint64_t>(rep)});
        const auto res = reference::simulate_agents(fixed, dyn, 50, agent_days, stream);
        agent_infected += res.infected_cum;
    }
    const double t_agents = seconds_since(t0);
    std::printf("  agent lists     : %8.3f s (mean cumulative infections %.1f)\n", t_agents,
                static_cast<double>(agent_infected) / static_cast<double>(replicates));
    std::printf("  cohort speedup  : %8.2fx\n", t_agents / t_cohort);
    return 0;
}
