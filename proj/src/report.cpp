#include "pfepi/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pfepi/errors.hpp"

namespace pfepi {

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string level_suffix(double level)
{
    return std::to_string(static_cast<int>(std::lround(level * 100.0)));
}

void append_quantity(std::ostringstream& out, const QuantitySummary& q)
{
    out << ',' << format_double(q.mean);
    for (const SummaryInterval& iv : q.intervals)
        out << ',' << format_double(iv.lo) << ',' << format_double(iv.hi);
}

} // namespace

std::string summaries_csv(std::span<const DailySummary> summaries, const Date& sim_start,
                          std::span<const double> levels)
{
    std::ostringstream out;
    out << "day_index,date,phase";
    for (const char* name : kQuantityNames) {
        out << ',' << name << "_mean";
        for (double c : levels) {
            const std::string s = level_suffix(c);
            out << ',' << name << "_lo" << s << ',' << name << "_hi" << s;
        }
    }
    out << ",n_eff,resampled\n";

    for (const DailySummary& day : summaries) {
        out << day.day_index << ',' << to_string(add_days(sim_start, day.day_index)) << ','
            << (day.phase == Phase::forecast ? "forecast" : "analysis");
        const QuantitySummary* qs[8] = {&day.rt,    &day.r,    &day.h,    &day.r_cum,
                                        &day.d_cum, &day.asym, &day.p_hd, &day.mean_t_h};
        for (const QuantitySummary* q : qs)
            append_quantity(out, *q);
        out << ',' << format_double(day.n_eff) << ',' << (day.resampled ? "true" : "false")
            << '\n';
    }
    return out.str();
}

std::string divergence_csv(std::span<const std::pair<std::int64_t, double>> series)
{
    std::ostringstream out;
    out << "day_index,h_forecast_vs_analysis_rel\n";
    for (const auto& [day, rel] : series)
        out << day << ',' << format_double(rel) << '\n';
    return out.str();
}

std::string run_meta_json(const ExperimentConfig& cfg, const Date& sim_start,
                          std::span<const DailySummary> summaries)
{
    std::int64_t resamplings = 0;
    std::int64_t analysis_days = 0;
    for (const DailySummary& s : summaries) {
        if (s.phase == Phase::analysis) {
            ++analysis_days;
            if (s.resampled)
                ++resamplings;
        }
    }
    nlohmann::ordered_json j;
    j["n_particles"] = cfg.n_particles;
    j["master_seed"] = cfg.master_seed;
    j["free_run_days"] = cfg.free_run_days;
    j["resample_fraction"] = cfg.resample_fraction;
    j["forced_resample_days"] = cfg.forced_resample_days;
    j["k"] = cfg.fixed.k;
    j["p_as"] = cfg.fixed.p_as;
    j["p_a_inf"] = cfg.fixed.p_a_inf;
    j["p_sh"] = cfg.fixed.p_sh;
    j["p_s_inf"] = cfg.fixed.p_s_inf;
    j["t_e"] = cfg.fixed.t_e;
    j["e_sc"] = cfg.fixed.e_sc;
    j["sigma_r"] = cfg.err.sigma_r;
    j["sigma_d"] = cfg.err.sigma_d;
    j["sigma_h_rel"] = cfg.err.sigma_h_rel;
    j["sigma_h_diff"] = cfg.err.sigma_h_diff;
    j["sigma_h_var_floor"] = cfg.err.sigma_h_var_floor;
    j["init_infected_min"] = cfg.init_infected_min;
    j["init_infected_max"] = cfg.init_infected_max;
    j["init_r_min"] = cfg.init_r_min;
    j["init_r_max"] = cfg.init_r_max;
    j["init_mean_t_h"] = cfg.init_mean_t_h;
    j["init_p_hd_min"] = cfg.init_p_hd_min;
    j["init_p_hd_max"] = cfg.init_p_hd_max;
    j["sim_start_date"] = to_string(sim_start);
    j["summary_rows"] = summaries.size();
    j["analysis_days"] = analysis_days;
    j["resamplings"] = resamplings;
    j["last_day"] = summaries.empty() ? -1 : summaries.back().day_index;
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write '" + path + "'");
    out << content;
    if (!out)
        throw ConfigError("failed writing '" + path + "'");
}

} // namespace pfepi
