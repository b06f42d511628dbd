// Command-line driver: run one experiment, sweep a parameter, or validate an
// observation file.  Outputs are plain CSV plus flat JSON metadata so any
// plotting tool can consume them.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pfepi/config.hpp"
#include "pfepi/errors.hpp"
#include "pfepi/experiment.hpp"
#include "pfepi/report.hpp"

namespace fs = std::filesystem;
using namespace pfepi;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string obs_path;
    std::string out_dir;
    std::vector<std::string> overrides;
    std::int64_t particles = -1;
    std::int64_t seed = -1;
    int threads = -1;
    bool lax_columns = false;
};

Settings build_settings(const CommonArgs& args)
{
    Settings s;
    if (!args.config_path.empty())
        s = load_config_file(args.config_path);
    for (const std::string& kv : args.overrides)
        apply_override(s, kv);
    if (args.particles >= 0)
        s.exp.n_particles = args.particles;
    if (args.seed >= 0)
        s.exp.master_seed = static_cast<std::uint64_t>(args.seed);
    if (args.threads >= 0)
        s.exp.threads = args.threads;
    if (args.lax_columns)
        s.lax_columns = true;
    finalize_settings(s);
    return s;
}

void write_run_outputs(const fs::path& dir, const Settings& s,
                       const std::vector<DailySummary>& summaries)
{
    fs::create_directories(dir);
    write_file((dir / "summaries.csv").string(),
               summaries_csv(summaries, s.sim_start, s.exp.ci_levels));
    const auto divergence = forecast_analysis_divergence(summaries);
    write_file((dir / "forecast_divergence.csv").string(), divergence_csv(divergence));
    write_file((dir / "run_meta.json").string(), run_meta_json(s.exp, s.sim_start, summaries));
}

std::string value_label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

int run_command(const CommonArgs& args)
{
    Settings s = build_settings(args);
    const ObservationSeries obs =
        load_observations(args.obs_path, s.sim_start, s.exp.free_run_days, s.lax_columns);
    const auto summaries = run(s.exp, obs);
    write_run_outputs(args.out_dir, s, summaries);
    std::cout << "wrote " << (fs::path(args.out_dir) / "summaries.csv").string() << " ("
              << summaries.size() << " rows)\n";
    return 0;
}

int sweep_command(const CommonArgs& args, const std::string& axis_name,
                  const std::string& values_csv)
{
    Settings s = build_settings(args);
    const SweepAxis axis = parse_sweep_axis(axis_name);

    std::vector<double> values;
    std::size_t start = 0;
    while (start <= values_csv.size()) {
        std::size_t pos = values_csv.find(',', start);
        if (pos == std::string::npos)
            pos = values_csv.size();
        const std::string cell = values_csv.substr(start, pos - start);
        if (cell.empty())
            throw ConfigError("--values: empty entry");
        try {
            values.push_back(std::stod(cell));
        }
        catch (const std::exception&) {
            throw ConfigError("--values: cannot parse '" + cell + "'");
        }
        start = pos + 1;
        if (pos == values_csv.size())
            break;
    }
    if (values.empty())
        throw ConfigError("--values: no sweep values given");

    const ObservationSeries obs =
        load_observations(args.obs_path, s.sim_start, s.exp.free_run_days, s.lax_columns);
    const auto results = run_sweep(s.exp, axis, values, obs);
    for (const auto& [value, summaries] : results) {
        Settings per = s;
        switch (axis) {
        case SweepAxis::k:
            per.exp.fixed.k = value;
            break;
        case SweepAxis::p_as:
            per.exp.fixed.p_as = value;
            per.exp.fixed.p_a_inf = 1.0 - value;
            break;
        case SweepAxis::n_particles:
            per.exp.n_particles = static_cast<std::int64_t>(value);
            break;
        case SweepAxis::master_seed:
            per.exp.master_seed = static_cast<std::uint64_t>(value);
            break;
        }
        per.exp.fixed.finalize();
        const fs::path dir = fs::path(args.out_dir) / (axis_name + "=" + value_label(value));
        write_run_outputs(dir, per, summaries);
        std::cout << "wrote " << (dir / "summaries.csv").string() << "\n";
    }
    return 0;
}

int validate_command(const std::string& obs_path, bool lax_columns)
{
    // Structural validation only; day alignment is checked by `run`.
    const ObservationSeries obs = load_observations(obs_path, Date{2020, 1, 17}, -1, lax_columns);
    std::cout << obs_path << ": " << obs.records.size() << " rows, "
              << to_string(obs.start_date) << " .. "
              << to_string(add_days(obs.start_date,
                                    static_cast<std::int64_t>(obs.records.size()) - 1))
              << ", valid\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Agent-based epidemic simulator with particle-filter data assimilation"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string axis_name;
    std::string values_csv;

    auto add_common = [&](CLI::App* cmd, bool needs_out) {
        cmd->add_option("--config", args.config_path, "flat key = value configuration file");
        cmd->add_option("--obs", args.obs_path, "observation CSV")->required();
        if (needs_out)
            cmd->add_option("--out", args.out_dir, "output directory")->required();
        cmd->add_option("--set", args.overrides, "override a config key (key=value, repeatable)");
        cmd->add_option("--particles", args.particles, "particle count (overrides config)");
        cmd->add_option("--seed", args.seed, "master seed (overrides config)");
        cmd->add_option("--threads", args.threads, "worker thread cap (does not affect results)");
        cmd->add_flag("--lax-columns", args.lax_columns, "ignore extra observation columns");
    };

    CLI::App* cmd_run = app.add_subcommand("run", "run one experiment");
    add_common(cmd_run, true);

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "one run per parameter value");
    add_common(cmd_sweep, true);
    cmd_sweep->add_option("--axis", axis_name, "k, p_as, n_particles, or master_seed")->required();
    cmd_sweep->add_option("--values", values_csv, "comma-separated sweep values")->required();

    CLI::App* cmd_validate = app.add_subcommand("validate", "check an observation file");
    std::string validate_obs;
    bool validate_lax = false;
    cmd_validate->add_option("--obs", validate_obs, "observation CSV")->required();
    cmd_validate->add_flag("--lax-columns", validate_lax, "ignore extra observation columns");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (cmd_run->parsed())
            return run_command(args);
        if (cmd_sweep->parsed())
            return sweep_command(args, axis_name, values_csv);
        return validate_command(validate_obs, validate_lax);
    }
    catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    catch (const FilterDivergence& e) {
        std::cerr << "error: filter divergence: " << e.what() << "\n";
        return 3;
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
