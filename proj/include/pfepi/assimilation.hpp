#ifndef PFEPI_ASSIMILATION_HPP
#define PFEPI_ASSIMILATION_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "pfepi/epimodel.hpp"
#include "pfepi/observations.hpp"
#include "pfepi/rng.hpp"

namespace pfepi {

/// Observation-error scales of the Gaussian likelihood.
struct ErrorModel {
    double sigma_r = 2000.0;
    double sigma_d = 100.0;
    double sigma_h_rel = 0.3;       // weight of the H level
    double sigma_h_diff = 4.0;      // weight of the day-to-day H change
    double sigma_h_var_floor = 400.0; // additive variance floor

    void validate() const;
};

/// Normalized importance weights, one per particle.
struct WeightVector {
    std::vector<double> w;

    static WeightVector uniform(std::size_t n) { return {std::vector<double>(n, 1.0 / double(n))}; }

    std::size_t size() const { return w.size(); }
    double operator[](std::size_t i) const { return w[i]; }
    double& operator[](std::size_t i) { return w[i]; }
    double sum() const;
    bool is_normalized(double tol = 1e-9) const;
};

/// Time-dependent observation error for H; the day-to-day variation term
/// keeps the error realistic when the stock moves fast.
double sigma_h(std::int64_t h_t, std::int64_t h_prev, const ErrorModel& err);

/// One Gaussian-likelihood update of all weights against the day's
/// observation.  Exponents are shifted by their maximum before
/// exponentiation (exact under normalization), so far-off particles
/// underflow to weight zero instead of poisoning the sum.  Throws
/// FilterDivergence if no particle retains positive weight.
WeightVector update_weights(const WeightVector& prev, std::span<const Particle> particles,
                            const Observation& obs, std::int64_t obs_prev_h,
                            const ErrorModel& err, int threads = 0);

/// Effective ensemble size 1 / sum(w_i^2), in [1, N] for normalized w.
double effective_particles(const WeightVector& w);

/// Resampling policy: weight degeneracy below fraction*N, or a forced
/// refresh every forced_days days.
bool should_resample(double n_eff, std::int64_t n, std::int64_t days_since_last,
                     double fraction = 0.1, std::int64_t forced_days = 15);

/// Multinomial resampling: draws copy counts ~ MN(N; w), replaces the
/// ensemble by the copies, and resets all weights to exactly 1/N.  Copies
/// receive fresh rng ids (rng_id_base + slot) so their futures diverge.
void resample(RngStream& stream, std::vector<Particle>& particles, WeightVector& w,
              std::uint64_t rng_id_base);

struct SummaryInterval {
    double lo = 0.0;
    double hi = 0.0;
};

struct QuantitySummary {
    double mean = 0.0;
    std::vector<SummaryInterval> intervals; // aligned with the coverage levels
};

/// Weighted mean plus central coverage intervals.  Quantiles use the
/// weighted empirical CDF with knots at the cumulative-weight midpoints and
/// linear interpolation between adjacent knots, clamped to the extreme
/// values beyond the outermost knots.
QuantitySummary weighted_summary(std::span<const double> values, const WeightVector& w,
                                 std::span<const double> levels);

} // namespace pfepi

#endif
