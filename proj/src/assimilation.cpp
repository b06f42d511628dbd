#include "pfepi/assimilation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pfepi/errors.hpp"

namespace pfepi {

void ErrorModel::validate() const
{
    for (double v : {sigma_r, sigma_d, sigma_h_rel, sigma_h_diff, sigma_h_var_floor})
        if (!(v > 0.0))
            throw ConfigError("error model: all scales must be positive");
}

double WeightVector::sum() const
{
    return std::accumulate(w.begin(), w.end(), 0.0);
}

bool WeightVector::is_normalized(double tol) const
{
    for (double x : w)
        if (!(x >= 0.0))
            return false;
    return std::abs(sum() - 1.0) <= tol;
}

double sigma_h(std::int64_t h_t, std::int64_t h_prev, const ErrorModel& err)
{
    const double spread = err.sigma_h_rel * static_cast<double>(h_t) +
                          err.sigma_h_diff * static_cast<double>(std::llabs(h_t - h_prev));
    return std::sqrt(spread * spread + err.sigma_h_var_floor);
}

WeightVector update_weights(const WeightVector& prev, std::span<const Particle> particles,
                            const Observation& obs, std::int64_t obs_prev_h,
                            const ErrorModel& err, int threads)
{
    const auto n = static_cast<std::int64_t>(particles.size());
    PFEPI_CHECK(n > 0, "weight update on empty ensemble");
    PFEPI_CHECK(prev.size() == particles.size(), "weight/particle count mismatch");

    const double sh = sigma_h(obs.h_stock, obs_prev_h, err);
    const double inv2_h = 1.0 / (2.0 * sh * sh);
    const double inv2_r = 1.0 / (2.0 * err.sigma_r * err.sigma_r);
    const double inv2_d = 1.0 / (2.0 * err.sigma_d * err.sigma_d);

    // Log weights; -inf marks particles that already carried zero weight.
    std::vector<double> logw(particles.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads > 0 ? threads : omp_get_max_threads())
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        const Particle& p = particles[static_cast<std::size_t>(i)];
        const double dh = static_cast<double>(p.state.h_stock() - obs.h_stock);
        const double dr = static_cast<double>(p.state.r_cum - obs.r_cum);
        const double dd = static_cast<double>(p.state.d_cum - obs.d_cum);
        const double expo = -(dh * dh * inv2_h + dr * dr * inv2_r + dd * dd * inv2_d);
        const double pw = prev[static_cast<std::size_t>(i)];
        logw[static_cast<std::size_t>(i)] =
            pw > 0.0 ? std::log(pw) + expo : -std::numeric_limits<double>::infinity();
    }

    const double shift = *std::max_element(logw.begin(), logw.end());
    if (!std::isfinite(shift))
        throw FilterDivergence("all particles have zero weight");

    // Serial, index-ordered reduction keeps results thread-count independent.
    WeightVector out{std::vector<double>(particles.size())};
    double total = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::exp(logw[i] - shift);
        total += out[i];
    }
    if (!(total > 0.0) || !std::isfinite(total))
        throw FilterDivergence("weight normalization failed");
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] /= total;
    return out;
}

double effective_particles(const WeightVector& w)
{
    double s2 = 0.0;
    for (double x : w.w)
        s2 += x * x;
    PFEPI_CHECK(s2 > 0.0, "effective size of an all-zero weight vector");
    return 1.0 / s2;
}

bool should_resample(double n_eff, std::int64_t n, std::int64_t days_since_last, double fraction,
                     std::int64_t forced_days)
{
    return n_eff < fraction * static_cast<double>(n) || days_since_last >= forced_days;
}

void resample(RngStream& stream, std::vector<Particle>& particles, WeightVector& w,
              std::uint64_t rng_id_base)
{
    const std::size_t n = particles.size();
    PFEPI_CHECK(w.size() == n, "weight/particle count mismatch");
    const auto counts = sample_multinomial(stream, static_cast<std::int64_t>(n), w.w);

    std::vector<Particle> next;
    next.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::int64_t c = 0; c < counts[i]; ++c)
            next.push_back(particles[i]);
    PFEPI_CHECK(next.size() == n, "resampling changed the ensemble size");

    const double uniform = 1.0 / static_cast<double>(n);
    for (std::size_t s = 0; s < n; ++s) {
        next[s].index = static_cast<std::int64_t>(s);
        next[s].rng_id = rng_id_base + s;
        next[s].weight = uniform;
    }
    particles = std::move(next);
    w.w.assign(n, uniform);
}

QuantitySummary weighted_summary(std::span<const double> values, const WeightVector& w,
                                 std::span<const double> levels)
{
    PFEPI_CHECK(values.size() == w.size(), "value/weight count mismatch");
    PFEPI_CHECK(!values.empty(), "summary of an empty ensemble");

    QuantitySummary out;
    const double total = w.sum();
    PFEPI_CHECK(total > 0.0, "summary with all-zero weights");
    double mean = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        mean += w[i] * values[i];
    out.mean = mean / total;

    // Sort (value, index) pairs; ties broken by index for determinism.
    std::vector<std::uint32_t> order(values.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (values[a] != values[b])
            return values[a] < values[b];
        return a < b;
    });

    // CDF knots at cumulative-weight midpoints, zero-weight entries skipped.
    std::vector<double> pos;
    std::vector<double> val;
    pos.reserve(values.size());
    val.reserve(values.size());
    double cum = 0.0;
    for (std::uint32_t idx : order) {
        const double wi = w[idx] / total;
        if (wi <= 0.0)
            continue;
        pos.push_back(cum + 0.5 * wi);
        val.push_back(values[idx]);
        cum += wi;
    }

    auto quantile = [&](double q) {
        if (q <= pos.front())
            return val.front();
        if (q >= pos.back())
            return val.back();
        const auto it = std::upper_bound(pos.begin(), pos.end(), q);
        const std::size_t hi = static_cast<std::size_t>(it - pos.begin());
        const std::size_t lo = hi - 1;
        const double t = (q - pos[lo]) / (pos[hi] - pos[lo]);
        return val[lo] + t * (val[hi] - val[lo]);
    };

    out.intervals.reserve(levels.size());
    for (double c : levels) {
        PFEPI_CHECK(c > 0.0 && c < 1.0, "coverage level outside (0,1)");
        out.intervals.push_back({quantile(0.5 * (1.0 - c)), quantile(0.5 * (1.0 + c))});
    }
    return out;
}

} // namespace pfepi
