#ifndef PFEPI_ENSEMBLE_HPP
#define PFEPI_ENSEMBLE_HPP

#include <cstdint>
#include <span>

#include "pfepi/epimodel.hpp"

namespace pfepi {

/// Steps every particle by one day, OpenMP-parallel over particles.
/// Per-(particle, day, purpose) stream derivation makes the result
/// independent of scheduling and thread count; `threads <= 0` uses the
/// OpenMP default.
void step_all(std::span<Particle> particles, std::int64_t day, const FixedParams& fixed,
              std::uint64_t master_seed, int threads,
              const DynamicParams* forced = nullptr);

/// Serial reference loop for the same kernel; bit-identical to step_all by
/// construction and kept for tests and the benchmark.
void step_all_serial(std::span<Particle> particles, std::int64_t day, const FixedParams& fixed,
                     std::uint64_t master_seed, const DynamicParams* forced = nullptr);

} // namespace pfepi

#endif
