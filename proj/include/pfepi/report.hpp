#ifndef PFEPI_REPORT_HPP
#define PFEPI_REPORT_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>

#include "pfepi/experiment.hpp"
#include "pfepi/observations.hpp"

namespace pfepi {

/// Formats a double with 17 significant digits (value round-trips exactly).
std::string format_double(double v);

/// One row per summary; columns: day_index, date, phase, then
/// mean/lo/hi per coverage level for each quantity, then n_eff, resampled.
std::string summaries_csv(std::span<const DailySummary> summaries, const Date& sim_start,
                          std::span<const double> levels);

std::string divergence_csv(std::span<const std::pair<std::int64_t, double>> series);

/// Flat key-value run metadata as JSON (no timestamps, reruns are
/// byte-identical).
std::string run_meta_json(const ExperimentConfig& cfg, const Date& sim_start,
                          std::span<const DailySummary> summaries);

void write_file(const std::string& path, const std::string& content);

} // namespace pfepi

#endif
