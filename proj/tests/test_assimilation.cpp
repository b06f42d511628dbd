#include <doctest.h>

#include <cmath>
#include <vector>

#include "pfepi/assimilation.hpp"
#include "pfepi/errors.hpp"
#include "support/stats.hpp"

using namespace pfepi;

namespace {

Particle with_observables(std::int64_t h, std::int64_t r, std::int64_t d)
{
    Particle p;
    p.state.h_to_r_queue[10] = h;
    p.state.r_cum = r;
    p.state.d_cum = d;
    // Keep the conservation identity intact for these synthetic states.
    p.state.initial_seed = h + r + d;
    return p;
}

} // namespace

TEST_CASE("hospitalization error scale")
{
    const ErrorModel err;
    CHECK(sigma_h(0, 0, err) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(sigma_h(100, 100, err) == doctest::Approx(std::sqrt(1300.0)).epsilon(1e-12));
    CHECK(sigma_h(1000, 900, err) == doctest::Approx(std::sqrt(490400.0)).epsilon(1e-12));
    CHECK(sigma_h(1000, 900, err) == doctest::Approx(700.2857).epsilon(1e-6));
    // Symmetric in the direction of the daily change.
    CHECK(sigma_h(900, 1000, err) ==
          doctest::Approx(std::sqrt((0.3 * 900 + 400.0) * (0.3 * 900 + 400.0) + 400.0)));

    ErrorModel bad;
    bad.sigma_r = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("weight update against the closed-form two-particle case")
{
    // sigma_h(0,0) = 20; offsets of exactly one sigma in each observed
    // quantity give the factor exp(-3/2).
    const ErrorModel err;
    const Observation obs{60, 0, 1000, 200};
    std::vector<Particle> particles;
    particles.push_back(with_observables(0, 1000, 200));       // exact match
    particles.push_back(with_observables(20, 3000, 300));      // +sigma everywhere

    const auto prev = WeightVector::uniform(2);
    const auto w = update_weights(prev, particles, obs, 0, err);

    const double f = std::exp(-1.5);
    CHECK(w[0] == doctest::Approx(1.0 / (1.0 + f)).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(f / (1.0 + f)).epsilon(1e-12));
    CHECK(w[0] == doctest::Approx(0.8176).epsilon(1e-4));
    CHECK(w[1] == doctest::Approx(0.1824).epsilon(1e-4));
    CHECK(w.is_normalized());

    // A single sigma_h offset in H only: ratio exp(-1/2).
    std::vector<Particle> pair2;
    pair2.push_back(with_observables(0, 1000, 200));
    pair2.push_back(with_observables(20, 1000, 200));
    const auto w2 = update_weights(prev, pair2, obs, 0, err);
    CHECK(w2[1] / w2[0] == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("weight update preserves the error ordering and prior mass")
{
    const ErrorModel err;
    const Observation obs{60, 50, 400, 30};
    auto g = RngStream::derive(3, {3});
    std::vector<Particle> particles;
    std::vector<double> errsum;
    for (int i = 0; i < 50; ++i) {
        const auto h = static_cast<std::int64_t>(g.next_unit() * 120.0);
        const auto r = static_cast<std::int64_t>(g.next_unit() * 900.0);
        const auto d = static_cast<std::int64_t>(g.next_unit() * 70.0);
        particles.push_back(with_observables(h, r, d));
        const double sh = sigma_h(obs.h_stock, 42, err);
        const double eh = static_cast<double>(h - obs.h_stock) / sh;
        const double er = static_cast<double>(r - obs.r_cum) / err.sigma_r;
        const double ed = static_cast<double>(d - obs.d_cum) / err.sigma_d;
        errsum.push_back(eh * eh + er * er + ed * ed);
    }
    const auto w = update_weights(WeightVector::uniform(50), particles, obs, 42, err);
    CHECK(w.is_normalized());
    for (std::size_t a = 0; a < 50; ++a)
        for (std::size_t b = 0; b < 50; ++b)
            if (errsum[a] <= errsum[b])
                REQUIRE(w[a] >= w[b]);

    // A particle with zero prior weight stays at zero.
    WeightVector prior = WeightVector::uniform(50);
    prior[7] = 0.0;
    double s = prior.sum();
    for (auto& x : prior.w)
        x /= s;
    const auto w2 = update_weights(prior, particles, obs, 42, err);
    CHECK(w2[7] == 0.0);
}

TEST_CASE("far-off particles underflow to zero weight without poisoning the sum")
{
    const ErrorModel err;
    const Observation obs{60, 100, 500, 40};
    std::vector<Particle> particles;
    particles.push_back(with_observables(100, 500, 40));
    particles.push_back(with_observables(1000000, 90000000, 4000000));
    const auto w = update_weights(WeightVector::uniform(2), particles, obs, 100, err);
    CHECK(w[0] == doctest::Approx(1.0));
    CHECK(w[1] == 0.0);
    CHECK(std::isfinite(w[0]));

    // All particles at zero prior weight cannot be normalized.
    WeightVector dead{std::vector<double>{0.0, 0.0}};
    CHECK_THROWS_AS(update_weights(dead, particles, obs, 100, err), FilterDivergence);
}

TEST_CASE("effective particle count limits")
{
    CHECK(effective_particles(WeightVector::uniform(100000)) ==
          doctest::Approx(100000.0).epsilon(1e-9));
    WeightVector degenerate{std::vector<double>(100000, 0.0)};
    degenerate[12345] = 1.0;
    CHECK(effective_particles(degenerate) == doctest::Approx(1.0).epsilon(1e-12));
    WeightVector half{std::vector<double>{0.5, 0.5}};
    CHECK(effective_particles(half) == doctest::Approx(2.0).epsilon(1e-12));

    // Bounded by [1, N] for arbitrary normalized weights.
    auto g = RngStream::derive(9, {9});
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 1 + static_cast<std::size_t>(g.next_unit() * 64.0);
        WeightVector w{std::vector<double>(n)};
        double sum = 0.0;
        for (auto& x : w.w)
            sum += x = -std::log(g.next_unit_open());
        for (auto& x : w.w)
            x /= sum;
        const double ne = effective_particles(w);
        REQUIRE(ne >= 1.0 - 1e-9);
        REQUIRE(ne <= static_cast<double>(n) + 1e-9);
    }
}

TEST_CASE("resampling policy thresholds")
{
    CHECK(should_resample(9999.0, 100000, 3));
    CHECK(should_resample(50000.0, 100000, 15));
    CHECK_FALSE(should_resample(50000.0, 100000, 14));
    CHECK_FALSE(should_resample(10000.0, 100000, 0));
    CHECK(should_resample(9999.99, 100000, 0));
}

TEST_CASE("degenerate resampling clones the surviving particle")
{
    const std::size_t n = 500;
    std::vector<Particle> particles(n);
    for (std::size_t i = 0; i < n; ++i) {
        particles[i].index = static_cast<std::int64_t>(i);
        particles[i].rng_id = i;
        particles[i].state.initial_seed = static_cast<std::int64_t>(i);
    }
    WeightVector w{std::vector<double>(n, 0.0)};
    w[7] = 1.0;
    auto stream = RngStream::derive(1, {1});
    resample(stream, particles, w, 1000);

    REQUIRE(particles.size() == n);
    for (std::size_t s = 0; s < n; ++s) {
        REQUIRE(particles[s].state.initial_seed == 7);
        REQUIRE(particles[s].weight == 1.0 / static_cast<double>(n));
        REQUIRE(particles[s].rng_id == 1000 + s);
        REQUIRE(particles[s].index == static_cast<std::int64_t>(s));
        REQUIRE(w[s] == 1.0 / static_cast<double>(n));
    }
}

TEST_CASE("uniform resampling copies each particle once on average")
{
    const std::size_t n = 100;
    const int reps = 10000;
    std::vector<double> copy_sum(n, 0.0);
    auto stream = RngStream::derive(17, {4});
    std::vector<Particle> particles(n);
    for (std::size_t i = 0; i < n; ++i)
        particles[i].state.initial_seed = static_cast<std::int64_t>(i);

    for (int rep = 0; rep < reps; ++rep) {
        auto copy = particles;
        auto w = WeightVector::uniform(n);
        resample(stream, copy, w, 0);
        for (const Particle& p : copy)
            copy_sum[static_cast<std::size_t>(p.state.initial_seed)] += 1.0;
    }
    // X_i ~ Binomial(100, 1/100): sd 0.995, so 3 se of the mean over 1e4
    // resamplings is about 0.03.
    for (std::size_t i = 0; i < n; ++i)
        REQUIRE(std::abs(copy_sum[i] / reps - 1.0) < 0.0299);
}

TEST_CASE("resampling preserves the weighted mean up to Monte-Carlo error")
{
    const std::size_t n = 10000;
    auto g = RngStream::derive(21, {5});
    std::vector<Particle> particles(n);
    std::vector<double> values(n);
    WeightVector w{std::vector<double>(n)};
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = g.next_unit();
        particles[i].state.initial_seed = static_cast<std::int64_t>(i);
        sum += w[i] = -std::log(g.next_unit_open());
    }
    for (auto& x : w.w)
        x /= sum;

    double before = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        before += w[i] * values[i];

    const int reps = 100;
    std::vector<double> diffs;
    auto stream = RngStream::derive(22, {6});
    for (int rep = 0; rep < reps; ++rep) {
        auto copy = particles;
        auto wc = w;
        resample(stream, copy, wc, 0);
        double after = 0.0;
        for (const Particle& p : copy)
            after += values[static_cast<std::size_t>(p.state.initial_seed)] /
                     static_cast<double>(n);
        diffs.push_back(after - before);
    }
    const auto m = test::moments(diffs);
    CHECK(std::abs(m.mean) < 3.0 * m.se_mean + 1e-12); // unbiased
    for (double d : diffs)
        REQUIRE(std::abs(d) < 8.0 / std::sqrt(static_cast<double>(n))); // spread is O(1)
}

TEST_CASE("weighted summary quantile rule on frozen cases")
{
    const std::vector<double> levels{0.68, 0.90};

    // All values equal: every statistic collapses to that value.
    {
        const std::vector<double> v(40, 3.25);
        const auto s = weighted_summary(v, WeightVector::uniform(40), levels);
        CHECK(s.mean == doctest::Approx(3.25).epsilon(1e-12));
        for (const auto& iv : s.intervals) {
            CHECK(iv.lo == 3.25);
            CHECK(iv.hi == 3.25);
        }
    }

    // Four uniform values at coverage 0.5: quartiles by midpoint knots.
    {
        const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
        const std::vector<double> half{0.5};
        const auto s = weighted_summary(v, WeightVector::uniform(4), half);
        CHECK(s.mean == doctest::Approx(2.5).epsilon(1e-12));
        CHECK(s.intervals[0].lo == doctest::Approx(1.5).epsilon(1e-12));
        CHECK(s.intervals[0].hi == doctest::Approx(3.5).epsilon(1e-12));
    }

    // All mass on one particle.
    {
        const std::vector<double> v{5.0, 7.5, 9.0};
        WeightVector w{std::vector<double>{0.0, 1.0, 0.0}};
        const auto s = weighted_summary(v, w, levels);
        CHECK(s.mean == doctest::Approx(7.5).epsilon(1e-12));
        for (const auto& iv : s.intervals) {
            CHECK(iv.lo == 7.5);
            CHECK(iv.hi == 7.5);
        }
    }
}

TEST_CASE("weighted summary intervals are ordered and nested")
{
    auto g = RngStream::derive(31, {7});
    const std::vector<double> levels{0.68, 0.90};
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t n = 2 + static_cast<std::size_t>(g.next_unit() * 200.0);
        std::vector<double> v(n);
        WeightVector w{std::vector<double>(n)};
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = 10.0 * g.next_unit() - 5.0;
            sum += w[i] = -std::log(g.next_unit_open());
        }
        for (auto& x : w.w)
            x /= sum;
        const auto s = weighted_summary(v, w, levels);
        REQUIRE(s.intervals[0].lo <= s.intervals[0].hi);
        REQUIRE(s.intervals[1].lo <= s.intervals[0].lo); // 90% contains 68%
        REQUIRE(s.intervals[1].hi >= s.intervals[0].hi);
    }
}
