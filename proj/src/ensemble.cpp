#include "pfepi/ensemble.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pfepi {

void step_all(std::span<Particle> particles, std::int64_t day, const FixedParams& fixed,
              std::uint64_t master_seed, int threads, const DynamicParams* forced)
{
    const auto n = static_cast<std::int64_t>(particles.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads > 0 ? threads : omp_get_max_threads())
#else
    (void)threads;
#endif
    for (std::int64_t i = 0; i < n; ++i)
        step_particle(particles[static_cast<std::size_t>(i)], day, fixed, master_seed, forced);
}

void step_all_serial(std::span<Particle> particles, std::int64_t day, const FixedParams& fixed,
                     std::uint64_t master_seed, const DynamicParams* forced)
{
    for (Particle& p : particles)
        step_particle(p, day, fixed, master_seed, forced);
}

} // namespace pfepi
