#ifndef PFEPI_DISTRIBUTIONS_HPP
#define PFEPI_DISTRIBUTIONS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "pfepi/rng.hpp"

namespace pfepi {

/// Finite distribution over integer values (durations in days, counts).
struct DiscreteDistribution {
    std::vector<std::int64_t> values;
    std::vector<double> probabilities;

    /// Throws ConfigError unless probabilities are nonnegative, sum to 1
    /// within 1e-12, and match values in length.
    void validate() const;

    double mean() const;
    std::int64_t max_value() const;
};

/// Quantile of the standard normal distribution, p in (0, 1).
/// Rational approximation refined by one Halley step; ~1 ulp accuracy.
double normal_quantile(double p);

/// Standard normal CDF.
double normal_cdf(double z);

/// Truncated normal sample by inverse-CDF transform.  mu and sigma are the
/// location and scale of the parent normal; the result always lies in
/// [lo, hi], including when mu is far outside the interval (where rejection
/// sampling would stall).  Consumes exactly one uniform.
double sample_truncated_normal(RngStream& stream, double mu, double sigma, double lo, double hi);

/// Binomial sample.  Inversion for small n*p; larger draws are reduced by
/// conditioning on a Beta-distributed central order statistic, which splits
/// n in half per step, so the work per sample is O(log n).
std::int64_t sample_binomial(RngStream& stream, std::int64_t n, double p);

/// Gamma(shape, 1) sample for shape >= 1 (Marsaglia-Tsang squeeze method).
double sample_gamma(RngStream& stream, double shape);

/// One multinomial realization of n trials; counts sum to n exactly.
std::vector<std::int64_t> sample_multinomial(RngStream& stream, std::int64_t n,
                                             std::span<const double> probs);

/// As above, writing counts into a caller-provided buffer (no allocation).
void sample_multinomial_into(RngStream& stream, std::int64_t n, std::span<const double> probs,
                             std::span<std::int64_t> out);

/// One draw from a validated DiscreteDistribution.
std::int64_t sample_discrete(RngStream& stream, const DiscreteDistribution& dist);

/// Distribution on {floor(mean), ceil(mean)} whose expectation equals mean
/// exactly; collapses to a point mass when mean is integral.
DiscreteDistribution two_point_integer_distribution(double mean);

} // namespace pfepi

#endif
