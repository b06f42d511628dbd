#include "pfepi/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "pfepi/errors.hpp"

namespace pfepi {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_real(std::string_view key, std::string_view value)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(std::string(value), &used);
        if (used != value.size())
            throw std::invalid_argument("");
        return v;
    }
    catch (const std::exception&) {
        throw ConfigError("key '" + std::string(key) + "': cannot parse real '" +
                          std::string(value) + "'");
    }
}

std::int64_t parse_int(std::string_view key, std::string_view value)
{
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || p != value.data() + value.size())
        throw ConfigError("key '" + std::string(key) + "': cannot parse integer '" +
                          std::string(value) + "'");
    return v;
}

std::uint64_t parse_uint(std::string_view key, std::string_view value)
{
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || p != value.data() + value.size())
        throw ConfigError("key '" + std::string(key) + "': cannot parse unsigned integer '" +
                          std::string(value) + "'");
    return v;
}

std::vector<double> parse_real_list(std::string_view key, std::string_view value)
{
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        std::size_t pos = value.find(',', start);
        if (pos == std::string_view::npos)
            pos = value.size();
        const std::string_view cell = trim(value.substr(start, pos - start));
        if (cell.empty())
            throw ConfigError("key '" + std::string(key) + "': empty list entry");
        out.push_back(parse_real(key, cell));
        start = pos + 1;
        if (pos == value.size())
            break;
    }
    return out;
}

} // namespace

void apply_key(Settings& s, std::string_view key, std::string_view value)
{
    key = trim(key);
    value = trim(value);
    ExperimentConfig& e = s.exp;

    if (key == "run.n_particles")
        e.n_particles = parse_int(key, value);
    else if (key == "run.master_seed")
        e.master_seed = parse_uint(key, value);
    else if (key == "run.free_run_days")
        e.free_run_days = parse_int(key, value);
    else if (key == "run.resample_fraction")
        e.resample_fraction = parse_real(key, value);
    else if (key == "run.forced_resample_days")
        e.forced_resample_days = parse_int(key, value);
    else if (key == "run.threads")
        e.threads = static_cast<int>(parse_int(key, value));
    else if (key == "run.ci_levels")
        e.ci_levels = parse_real_list(key, value);
    else if (key == "model.k")
        e.fixed.k = parse_real(key, value);
    else if (key == "model.p_as") {
        e.fixed.p_as = parse_real(key, value);
        e.fixed.p_a_inf = 1.0 - e.fixed.p_as;
    }
    else if (key == "model.p_sh") {
        e.fixed.p_sh = parse_real(key, value);
        e.fixed.p_s_inf = 1.0 - e.fixed.p_sh;
    }
    else if (key == "model.t_e")
        e.fixed.t_e = static_cast<int>(parse_int(key, value));
    else if (key == "err.sigma_r")
        e.err.sigma_r = parse_real(key, value);
    else if (key == "err.sigma_d")
        e.err.sigma_d = parse_real(key, value);
    else if (key == "err.sigma_h_rel")
        e.err.sigma_h_rel = parse_real(key, value);
    else if (key == "err.sigma_h_diff")
        e.err.sigma_h_diff = parse_real(key, value);
    else if (key == "err.sigma_h_var_floor")
        e.err.sigma_h_var_floor = parse_real(key, value);
    else if (key == "init.infected_min")
        e.init_infected_min = parse_int(key, value);
    else if (key == "init.infected_max")
        e.init_infected_max = parse_int(key, value);
    else if (key == "init.r_min")
        e.init_r_min = parse_real(key, value);
    else if (key == "init.r_max")
        e.init_r_max = parse_real(key, value);
    else if (key == "init.mean_t_h")
        e.init_mean_t_h = parse_real(key, value);
    else if (key == "init.p_hd_min")
        e.init_p_hd_min = parse_real(key, value);
    else if (key == "init.p_hd_max")
        e.init_p_hd_max = parse_real(key, value);
    else if (key == "obs.sim_start_date") {
        try {
            s.sim_start = parse_date(value);
        }
        catch (const DataError& err) {
            throw ConfigError("key '" + std::string(key) + "': " + err.what());
        }
    }
    else
        throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

void apply_override(Settings& s, std::string_view assignment)
{
    const std::size_t eq = assignment.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
    apply_key(s, assignment.substr(0, eq), assignment.substr(eq + 1));
}

Settings parse_config_text(std::string_view text)
{
    Settings s;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t pos = text.find('\n', start);
        if (pos == std::string_view::npos)
            pos = text.size();
        ++line_no;
        std::string_view line = text.substr(start, pos - start);
        start = pos + 1;
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) {
            if (pos == text.size())
                break;
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        apply_key(s, line.substr(0, eq), line.substr(eq + 1));
        if (pos == text.size())
            break;
    }
    return s;
}

Settings load_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void finalize_settings(Settings& s)
{
    s.exp.fixed.finalize();
    s.exp.validate();
}

} // namespace pfepi
