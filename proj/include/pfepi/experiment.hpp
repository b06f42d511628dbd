#ifndef PFEPI_EXPERIMENT_HPP
#define PFEPI_EXPERIMENT_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pfepi/assimilation.hpp"
#include "pfepi/ensemble.hpp"
#include "pfepi/epimodel.hpp"
#include "pfepi/observations.hpp"

namespace pfepi {

struct ExperimentConfig {
    std::int64_t n_particles = 100000;
    std::uint64_t master_seed = 1;
    std::int64_t free_run_days = 49;      // days without observations
    double resample_fraction = 0.1;       // resample when N_eff < fraction * N
    std::int64_t forced_resample_days = 15;
    int threads = 0;                      // <= 0: OpenMP default

    FixedParams fixed = FixedParams::defaults();
    ErrorModel err;

    std::int64_t init_infected_min = 3;
    std::int64_t init_infected_max = 7;
    double init_r_min = 0.0;
    double init_r_max = 1.0;
    double init_mean_t_h = 15.0;
    double init_p_hd_min = 0.0;
    double init_p_hd_max = 0.05;

    std::vector<double> ci_levels{0.68, 0.90};

    void validate() const;
};

enum class Phase { forecast, analysis };

/// Weighted ensemble statistics of one day, before (forecast) or after
/// (analysis) the weight update.
struct DailySummary {
    std::int64_t day_index = 0;
    Phase phase = Phase::forecast;
    QuantitySummary rt;        // effective reproduction number
    QuantitySummary r;         // contact rate r_t
    QuantitySummary h;         // hospitalized stock
    QuantitySummary r_cum;     // cumulative recovered
    QuantitySummary d_cum;     // cumulative deaths
    QuantitySummary asym;      // asymptomatic agents currently in I_a
    QuantitySummary p_hd;      // death probability
    QuantitySummary mean_t_h;  // expected hospital days
    double n_eff = 0.0;
    bool resampled = false;
};

// Column prefixes of the per-quantity summary blocks, in emission order.
inline constexpr const char* kQuantityNames[8] = {"rt",    "r",    "h",    "r_cum",
                                                  "d_cum", "asym", "p_hd", "mean_t_h"};

/// Draws the initial ensemble: seed count uniform on the configured range,
/// placed in E with the full incubation time remaining; r_0 and P_hd(0)
/// uniform on their ranges; E(T_h)(0) fixed; uniform weights.
std::vector<Particle> init_particles(const ExperimentConfig& config);

/// Full experiment: free evolution while no observation exists, then the
/// daily forecast -> weight update -> analysis -> (resampling) cycle.  The
/// first observation must sit at day_index == free_run_days.  Returns one
/// forecast summary per day plus one analysis summary per assimilated day,
/// in chronological order.
std::vector<DailySummary> run(const ExperimentConfig& config, const ObservationSeries& obs);

/// Relative difference (forecast - analysis) / analysis of the mean H per
/// assimilated day; days with zero analysis mean are omitted.
std::vector<std::pair<std::int64_t, double>>
forecast_analysis_divergence(std::span<const DailySummary> summaries);

enum class SweepAxis { k, p_as, n_particles, master_seed };

SweepAxis parse_sweep_axis(const std::string& name);
std::string sweep_axis_name(SweepAxis axis);

/// One independent run per value, identical otherwise.
std::vector<std::pair<double, std::vector<DailySummary>>>
run_sweep(const ExperimentConfig& base, SweepAxis axis, std::span<const double> values,
          const ObservationSeries& obs);

} // namespace pfepi

#endif
