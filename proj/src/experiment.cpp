#include "pfepi/experiment.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pfepi/errors.hpp"

namespace pfepi {

void ExperimentConfig::validate() const
{
    if (n_particles < 1)
        throw ConfigError("config: n_particles must be >= 1");
    if (free_run_days < 1)
        throw ConfigError("config: free_run_days must be >= 1");
    if (!(resample_fraction > 0.0 && resample_fraction < 1.0))
        throw ConfigError("config: resample_fraction must lie in (0,1)");
    if (forced_resample_days < 1)
        throw ConfigError("config: forced_resample_days must be >= 1");
    if (init_infected_min < 0 || init_infected_max < init_infected_min)
        throw ConfigError("config: bad initial infected range");
    if (init_r_min < kContactMin || init_r_max > kContactMax || init_r_min > init_r_max)
        throw ConfigError("config: initial r range outside [0,1]");
    if (init_p_hd_min < kDeathProbMin || init_p_hd_max > kDeathProbMax ||
        init_p_hd_min > init_p_hd_max)
        throw ConfigError("config: initial p_hd range outside its bounds");
    if (init_mean_t_h < kHospMeanMin || init_mean_t_h > kHospMeanMax)
        throw ConfigError("config: initial mean_t_h outside its bounds");
    if (ci_levels.empty())
        throw ConfigError("config: at least one coverage level required");
    for (double c : ci_levels)
        if (!(c > 0.0 && c < 1.0))
            throw ConfigError("config: coverage level outside (0,1)");
    FixedParams copy = fixed;
    copy.finalize();
    err.validate();
}

std::vector<Particle> init_particles(const ExperimentConfig& config)
{
    const auto n = static_cast<std::size_t>(config.n_particles);
    std::vector<Particle> particles(n);
    const double uniform = 1.0 / static_cast<double>(n);
    const std::int64_t span = config.init_infected_max - config.init_infected_min + 1;
    for (std::size_t i = 0; i < n; ++i) {
        Particle& p = particles[i];
        auto s = RngStream::derive(config.master_seed,
                                   {static_cast<std::uint64_t>(i), 0,
                                    static_cast<std::uint64_t>(Draw::init)});
        const auto seeds =
            config.init_infected_min +
            std::min<std::int64_t>(span - 1,
                                   static_cast<std::int64_t>(s.next_unit() * static_cast<double>(span)));
        p.dyn.contact_rate =
            config.init_r_min + s.next_unit() * (config.init_r_max - config.init_r_min);
        p.dyn.p_hd =
            config.init_p_hd_min + s.next_unit() * (config.init_p_hd_max - config.init_p_hd_min);
        p.dyn.mean_t_h = config.init_mean_t_h;
        p.state.e_queue[static_cast<std::size_t>(config.fixed.t_e - 1)] = seeds;
        p.state.initial_seed = seeds;
        p.weight = uniform;
        p.index = static_cast<std::int64_t>(i);
        p.rng_id = i;
    }
    return particles;
}

namespace {

// Scratch vectors reused across days to keep the summary path allocation-free.
struct SummaryScratch {
    std::vector<double> values[8];

    explicit SummaryScratch(std::size_t n)
    {
        for (auto& v : values)
            v.resize(n);
    }
};

DailySummary summarize_day(std::int64_t day, Phase phase, std::span<const Particle> particles,
                           const WeightVector& w, const ExperimentConfig& cfg,
                           SummaryScratch& scratch, double n_eff, bool resampled)
{
    const auto n = static_cast<std::int64_t>(particles.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) \
    num_threads(cfg.threads > 0 ? cfg.threads : omp_get_max_threads())
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const Particle& p = particles[ui];
        scratch.values[0][ui] = compute_rt(p.dyn, cfg.fixed);
        scratch.values[1][ui] = p.dyn.contact_rate;
        scratch.values[2][ui] = static_cast<double>(p.state.h_stock());
        scratch.values[3][ui] = static_cast<double>(p.state.r_cum);
        scratch.values[4][ui] = static_cast<double>(p.state.d_cum);
        scratch.values[5][ui] = static_cast<double>(p.state.ia_asym_total());
        scratch.values[6][ui] = p.dyn.p_hd;
        scratch.values[7][ui] = p.dyn.mean_t_h;
    }

    DailySummary out;
    out.day_index = day;
    out.phase = phase;
    out.n_eff = n_eff;
    out.resampled = resampled;
    QuantitySummary* slots[8] = {&out.rt,    &out.r,    &out.h,    &out.r_cum,
                                 &out.d_cum, &out.asym, &out.p_hd, &out.mean_t_h};
    // Each quantity is summarized by a single thread in a fixed order, so
    // the floating-point results do not depend on the thread count.
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) \
    num_threads(std::min(8, cfg.threads > 0 ? cfg.threads : omp_get_max_threads()))
#endif
    for (int q = 0; q < 8; ++q)
        *slots[q] = weighted_summary(scratch.values[q], w, cfg.ci_levels);
    return out;
}

} // namespace

std::vector<DailySummary> run(const ExperimentConfig& config, const ObservationSeries& obs)
{
    config.validate();
    ExperimentConfig cfg = config;
    cfg.fixed.finalize();

    const std::int64_t first_assim = cfg.free_run_days;
    if (!obs.empty() && obs.front().day_index != first_assim)
        throw DataError("observation series starts at day " +
                        std::to_string(obs.front().day_index) + ", expected day " +
                        std::to_string(first_assim));
    const std::int64_t last_day = obs.empty() ? cfg.free_run_days - 1 : obs.back().day_index;

    auto particles = init_particles(cfg);
    auto weights = WeightVector::uniform(particles.size());
    SummaryScratch scratch(particles.size());

    std::vector<DailySummary> summaries;
    summaries.reserve(static_cast<std::size_t>(2 * last_day + 2));
    summaries.push_back(summarize_day(0, Phase::forecast, particles, weights, cfg, scratch,
                                      effective_particles(weights), false));

    std::int64_t last_resample_day = first_assim - 1;
    std::uint64_t resample_generation = 0;

    for (std::int64_t day = 1; day <= last_day; ++day) {
        step_all(particles, day, cfg.fixed, cfg.master_seed, cfg.threads);

        if (day < first_assim) {
            summaries.push_back(summarize_day(day, Phase::forecast, particles, weights, cfg,
                                              scratch, effective_particles(weights), false));
            continue;
        }

        // The day's step is the one-day forecast under yesterday's weights.
        summaries.push_back(summarize_day(day, Phase::forecast, particles, weights, cfg, scratch,
                                          effective_particles(weights), false));

        const Observation& ob = obs.records[static_cast<std::size_t>(day - first_assim)];
        const std::int64_t prev_h =
            day == first_assim ? ob.h_stock
                               : obs.records[static_cast<std::size_t>(day - first_assim - 1)].h_stock;
        weights = update_weights(weights, particles, ob, prev_h, cfg.err, cfg.threads);
        for (std::size_t i = 0; i < particles.size(); ++i)
            particles[i].weight = weights[i];

        const double n_eff = effective_particles(weights);
        const bool do_resample = should_resample(n_eff, cfg.n_particles, day - last_resample_day,
                                                 cfg.resample_fraction, cfg.forced_resample_days);
        summaries.push_back(
            summarize_day(day, Phase::analysis, particles, weights, cfg, scratch, n_eff, do_resample));

        if (do_resample) {
            ++resample_generation;
            auto s = RngStream::derive(cfg.master_seed,
                                       {kEnsembleStreamTag, static_cast<std::uint64_t>(day),
                                        static_cast<std::uint64_t>(Draw::resample)});
            resample(s, particles, weights,
                     resample_generation * static_cast<std::uint64_t>(cfg.n_particles));
            last_resample_day = day;
        }
    }
    return summaries;
}

std::vector<std::pair<std::int64_t, double>>
forecast_analysis_divergence(std::span<const DailySummary> summaries)
{
    std::vector<std::pair<std::int64_t, double>> out;
    for (std::size_t i = 0; i + 1 < summaries.size(); ++i) {
        const DailySummary& f = summaries[i];
        const DailySummary& a = summaries[i + 1];
        if (f.phase != Phase::forecast || a.phase != Phase::analysis ||
            f.day_index != a.day_index)
            continue;
        if (a.h.mean == 0.0)
            continue;
        out.emplace_back(f.day_index, (f.h.mean - a.h.mean) / a.h.mean);
    }
    return out;
}

SweepAxis parse_sweep_axis(const std::string& name)
{
    if (name == "k")
        return SweepAxis::k;
    if (name == "p_as")
        return SweepAxis::p_as;
    if (name == "n_particles")
        return SweepAxis::n_particles;
    if (name == "master_seed")
        return SweepAxis::master_seed;
    throw ConfigError("unknown sweep axis '" + name +
                      "' (expected k, p_as, n_particles, or master_seed)");
}

std::string sweep_axis_name(SweepAxis axis)
{
    switch (axis) {
    case SweepAxis::k:
        return "k";
    case SweepAxis::p_as:
        return "p_as";
    case SweepAxis::n_particles:
        return "n_particles";
    case SweepAxis::master_seed:
        return "master_seed";
    }
    return "?";
}

std::vector<std::pair<double, std::vector<DailySummary>>>
run_sweep(const ExperimentConfig& base, SweepAxis axis, std::span<const double> values,
          const ObservationSeries& obs)
{
    std::vector<std::pair<double, std::vector<DailySummary>>> out;
    out.reserve(values.size());
    for (double v : values) {
        ExperimentConfig cfg = base;
        switch (axis) {
        case SweepAxis::k:
            cfg.fixed.k = v;
            break;
        case SweepAxis::p_as:
            cfg.fixed.p_as = v;
            cfg.fixed.p_a_inf = 1.0 - v;
            break;
        case SweepAxis::n_particles:
            cfg.n_particles = static_cast<std::int64_t>(v);
            break;
        case SweepAxis::master_seed:
            cfg.master_seed = static_cast<std::uint64_t>(v);
            break;
        }
        cfg.fixed.finalize();
        const std::string tag = "sweep " + sweep_axis_name(axis) + "=" + std::to_string(v) + ": ";
        try {
            out.emplace_back(v, run(cfg, obs));
        }
        catch (const FilterDivergence& e) {
            throw FilterDivergence(tag + e.what());
        }
        catch (const DataError& e) {
            throw DataError(tag + e.what());
        }
        catch (const ConfigError& e) {
            throw ConfigError(tag + e.what());
        }
    }
    return out;
}

} // namespace pfepi
