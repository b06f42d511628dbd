#ifndef PFEPI_TESTS_SUPPORT_STATS_HPP
#define PFEPI_TESTS_SUPPORT_STATS_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "pfepi/distributions.hpp"

namespace pfepi::test {

struct Moments {
    double mean = 0.0;
    double var = 0.0;     // unbiased
    double se_mean = 0.0; // standard error of the mean
    double se_var = 0.0;  // moment-based standard error of the variance
    std::size_t n = 0;
};

inline Moments moments(std::span<const double> xs)
{
    Moments m;
    m.n = xs.size();
    double sum = 0.0;
    for (double x : xs)
        sum += x;
    m.mean = sum / static_cast<double>(m.n);
    double m2 = 0.0, m4 = 0.0;
    for (double x : xs) {
        const double d = x - m.mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    const auto n = static_cast<double>(m.n);
    m.var = m2 / (n - 1.0);
    m.se_mean = std::sqrt(m.var / n);
    const double central4 = m4 / n;
    const double central2 = m2 / n;
    m.se_var = std::sqrt(std::max(0.0, central4 - central2 * central2) / n);
    return m;
}

/// Two independent Monte-Carlo estimates agree within z combined standard errors.
inline bool agree(double a, double se_a, double b, double se_b, double z)
{
    return std::abs(a - b) <= z * std::sqrt(se_a * se_a + se_b * se_b);
}

/// Chi-square statistic of observed counts against expected counts.
inline double chi_square(std::span<const std::int64_t> observed, std::span<const double> expected)
{
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double d = static_cast<double>(observed[i]) - expected[i];
        stat += d * d / expected[i];
    }
    return stat;
}

/// Upper-tail chi-square critical value via the Wilson-Hilferty cube
/// approximation (adequate for goodness-of-fit gates).
inline double chi_square_critical(double dof, double upper_tail_prob)
{
    const double z = normal_quantile(1.0 - upper_tail_prob);
    const double t = 2.0 / (9.0 * dof);
    const double c = 1.0 - t + z * std::sqrt(t);
    return dof * c * c * c;
}

/// Exact binomial pmf over [lo, hi], computed stably from the mode.
inline std::vector<double> binomial_pmf_range(std::int64_t n, double p, std::int64_t lo,
                                              std::int64_t hi)
{
    std::vector<double> pmf(static_cast<std::size_t>(hi - lo + 1));
    const double logp = std::log(p), logq = std::log1p(-p);
    auto logpmf = [&](std::int64_t x) {
        return std::lgamma(static_cast<double>(n) + 1.0) -
               std::lgamma(static_cast<double>(x) + 1.0) -
               std::lgamma(static_cast<double>(n - x) + 1.0) + static_cast<double>(x) * logp +
               static_cast<double>(n - x) * logq;
    };
    for (std::int64_t x = lo; x <= hi; ++x)
        pmf[static_cast<std::size_t>(x - lo)] = std::exp(logpmf(x));
    return pmf;
}

} // namespace pfepi::test

#endif
