#include "pfepi/distributions.hpp"

#include <algorithm>
#include <cmath>

#include "pfepi/errors.hpp"

namespace pfepi {

void DiscreteDistribution::validate() const
{
    if (values.size() != probabilities.size())
        throw ConfigError("discrete distribution: values/probabilities length mismatch");
    if (values.empty())
        throw ConfigError("discrete distribution: empty support");
    double sum = 0.0;
    for (double p : probabilities) {
        if (!(p >= 0.0))
            throw ConfigError("discrete distribution: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw ConfigError("discrete distribution: probabilities sum to " + std::to_string(sum));
}

double DiscreteDistribution::mean() const
{
    double m = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        m += static_cast<double>(values[i]) * probabilities[i];
    return m;
}

std::int64_t DiscreteDistribution::max_value() const
{
    return *std::max_element(values.begin(), values.end());
}

namespace {

// Rational approximation to the normal quantile (Acklam).  Relative error
// below 1.2e-9 everywhere; the caller refines it to machine precision.
double normal_quantile_approx(double p)
{
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;

    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

} // namespace

double normal_cdf(double z)
{
    return 0.5 * std::erfc(-z * M_SQRT1_2);
}

double normal_quantile(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw ConfigError("normal_quantile: p outside (0,1)");
    double x = normal_quantile_approx(p);
    // One Halley step against the exact CDF.
    double e = normal_cdf(x) - p;
    double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

namespace {

double truncated_normal_lower(RngStream& stream, double mu, double sigma, double lo, double hi)
{
    const double a = normal_cdf((lo - mu) / sigma);
    const double b = normal_cdf((hi - mu) / sigma);
    const double u = stream.next_unit_open();
    double q = a + u * (b - a);
    q = std::clamp(q, 0x1.0p-1074, 1.0 - 0x1.0p-53);
    const double x = mu + sigma * normal_quantile(q);
    return std::clamp(x, lo, hi);
}

} // namespace

double sample_truncated_normal(RngStream& stream, double mu, double sigma, double lo, double hi)
{
    if (!(sigma > 0.0))
        throw ConfigError("truncated normal: sigma must be positive");
    if (!(lo < hi))
        throw ConfigError("truncated normal: empty interval");

    // Keep the near bound on the lower side of the parent normal, where the
    // CDF values carry full precision.
    if (mu > 0.5 * (lo + hi))
        return -truncated_normal_lower(stream, -mu, sigma, -hi, -lo);
    return truncated_normal_lower(stream, mu, sigma, lo, hi);
}

namespace {

// Inversion by sequential search; expected work is O(n*p + 1).
std::int64_t binomial_inversion(RngStream& stream, std::int64_t n, double p)
{
    const double q = 1.0 - p;
    const double s = p / q;
    double f = std::exp(static_cast<double>(n) * std::log(q));
    double u = stream.next_unit();
    std::int64_t x = 0;
    for (;;) {
        if (u < f)
            return x;
        u -= f;
        ++x;
        if (x > n)
            return n; // float roundoff in the pmf tail
        f *= s * static_cast<double>(n - x + 1) / static_cast<double>(x);
    }
}

std::int64_t binomial_dispatch(RngStream& stream, std::int64_t n, double p);

// Median split: condition on the central order statistic of n uniforms,
// which is Beta(i, n+1-i).  Each level halves n, so a draw with huge n
// bottoms out in the inversion sampler after O(log n) Beta draws.
std::int64_t binomial_split(RngStream& stream, std::int64_t n, double p)
{
    const std::int64_t i = (n + 1) / 2;
    const double ga = sample_gamma(stream, static_cast<double>(i));
    const double gb = sample_gamma(stream, static_cast<double>(n + 1 - i));
    const double u = ga / (ga + gb);
    if (u <= p) {
        double p_rest = (p - u) / (1.0 - u);
        return i + binomial_dispatch(stream, n - i, std::clamp(p_rest, 0.0, 1.0));
    }
    double p_rest = p / u;
    return binomial_dispatch(stream, i - 1, std::clamp(p_rest, 0.0, 1.0));
}

std::int64_t binomial_dispatch(RngStream& stream, std::int64_t n, double p)
{
    if (n <= 0 || p <= 0.0)
        return 0;
    if (p >= 1.0)
        return n;
    if (p > 0.5)
        return n - binomial_dispatch(stream, n, 1.0 - p);
    if (static_cast<double>(n) * p <= 100.0)
        return binomial_inversion(stream, n, p);
    return binomial_split(stream, n, p);
}

} // namespace

std::int64_t sample_binomial(RngStream& stream, std::int64_t n, double p)
{
    if (n < 0)
        throw ConfigError("binomial: negative trial count");
    if (p < -1e-9 || p > 1.0 + 1e-9)
        throw ConfigError("binomial: probability outside [0,1]");
    return binomial_dispatch(stream, n, std::clamp(p, 0.0, 1.0));
}

double sample_gamma(RngStream& stream, double shape)
{
    if (!(shape >= 1.0))
        throw ConfigError("gamma: shape < 1 not supported");
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal_quantile(stream.next_unit_open());
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = stream.next_unit_open();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2)
            return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
            return d * v;
    }
}

void sample_multinomial_into(RngStream& stream, std::int64_t n, std::span<const double> probs,
                             std::span<std::int64_t> out)
{
    if (n < 0)
        throw ConfigError("multinomial: negative trial count");
    PFEPI_CHECK(out.size() == probs.size(), "multinomial output size mismatch");
    double sum = 0.0;
    for (double p : probs) {
        if (p < -1e-12)
            throw ConfigError("multinomial: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError("multinomial: probabilities sum to " + std::to_string(sum));

    // Chain of conditional binomials; counts sum to n by construction.
    std::int64_t remaining = n;
    double prob_left = sum;
    const std::size_t m = probs.size();
    for (std::size_t j = 0; j + 1 < m; ++j) {
        if (remaining == 0) {
            out[j] = 0;
            continue;
        }
        double pc = prob_left > 0.0 ? probs[j] / prob_left : 1.0;
        const std::int64_t x = sample_binomial(stream, remaining, std::clamp(pc, 0.0, 1.0));
        out[j] = x;
        remaining -= x;
        prob_left -= probs[j];
    }
    out[m - 1] = remaining;
}

std::vector<std::int64_t> sample_multinomial(RngStream& stream, std::int64_t n,
                                             std::span<const double> probs)
{
    std::vector<std::int64_t> counts(probs.size(), 0);
    sample_multinomial_into(stream, n, probs, counts);
    return counts;
}

std::int64_t sample_discrete(RngStream& stream, const DiscreteDistribution& dist)
{
    const double u = stream.next_unit();
    double cum = 0.0;
    for (std::size_t i = 0; i < dist.values.size(); ++i) {
        cum += dist.probabilities[i];
        if (u < cum)
            return dist.values[i];
    }
    return dist.values.back();
}

DiscreteDistribution two_point_integer_distribution(double mean)
{
    if (!(mean >= 0.0))
        throw ConfigError("two-point distribution: mean must be nonnegative");
    const double f = std::floor(mean);
    const auto lo = static_cast<std::int64_t>(f);
    if (mean == f)
        return DiscreteDistribution{{lo}, {1.0}};
    return DiscreteDistribution{{lo, lo + 1}, {f + 1.0 - mean, mean - f}};
}

} // namespace pfepi
