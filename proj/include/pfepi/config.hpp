#ifndef PFEPI_CONFIG_HPP
#define PFEPI_CONFIG_HPP

#include <span>
#include <string>
#include <string_view>

#include "pfepi/experiment.hpp"
#include "pfepi/observations.hpp"

namespace pfepi {

/// Everything a run needs beyond the observation file.
struct Settings {
    ExperimentConfig exp;
    Date sim_start{2020, 1, 17};
    bool lax_columns = false;
};

/// Applies one dotted-key override (e.g. "model.k", "0.6"); throws
/// ConfigError on unknown keys or unparseable values.
void apply_key(Settings& settings, std::string_view key, std::string_view value);

/// Applies a "key=value" string as passed to --set.
void apply_override(Settings& settings, std::string_view assignment);

/// Parses flat "key = value" text ('#' starts a comment) over defaults.
Settings parse_config_text(std::string_view text);
Settings load_config_file(const std::string& path);

/// Finalizes derived fields and validates the whole configuration.
void finalize_settings(Settings& settings);

} // namespace pfepi

#endif
