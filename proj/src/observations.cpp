#include "pfepi/observations.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pfepi/errors.hpp"

namespace pfepi {

std::int64_t days_from_civil(const Date& d)
{
    // Howard Hinnant's civil-days algorithm.
    std::int64_t y = d.year;
    const unsigned m = static_cast<unsigned>(d.month);
    const unsigned dd = static_cast<unsigned>(d.day);
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + dd - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date civil_from_days(std::int64_t z)
{
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

Date add_days(const Date& d, std::int64_t n)
{
    return civil_from_days(days_from_civil(d) + n);
}

std::string to_string(const Date& d)
{
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

Date parse_date(std::string_view text)
{
    auto bad = [&] { throw DataError("bad date '" + std::string(text) + "', expected YYYY-MM-DD"); };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        bad();
    auto num = [&](std::string_view s) {
        int v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size())
            bad();
        return v;
    };
    Date d{num(text.substr(0, 4)), num(text.substr(5, 2)), num(text.substr(8, 2))};
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31)
        bad();
    if (civil_from_days(days_from_civil(d)) != d) // rejects e.g. Feb 30
        bad();
    return d;
}

namespace {

std::vector<std::string_view> split_csv_row(std::string_view line)
{
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            cells.push_back(line.substr(start));
            return cells;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::int64_t parse_count(std::string_view cell, const char* what, int row)
{
    cell = trim(cell);
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || p != cell.data() + cell.size())
        throw DataError("row " + std::to_string(row) + ": cannot parse " + what + " '" +
                        std::string(cell) + "'");
    if (v < 0)
        throw DataError("row " + std::to_string(row) + ": negative " + std::string(what));
    return v;
}

const char* const kHeader[4] = {"date", "hospitalized", "recovered_cum", "deaths_cum"};

} // namespace

ObservationSeries parse_observations(std::istream& in, const Date& sim_start_date,
                                     std::int64_t first_obs_day_index, bool lax_columns)
{
    std::string line;
    if (!std::getline(in, line))
        throw DataError("row 1: missing header");
    auto header = split_csv_row(line);
    if (header.size() < 4 || (!lax_columns && header.size() != 4))
        throw DataError("row 1: expected header date,hospitalized,recovered_cum,deaths_cum");
    for (int i = 0; i < 4; ++i)
        if (trim(header[static_cast<std::size_t>(i)]) != kHeader[i])
            throw DataError(std::string("row 1: expected column '") + kHeader[i] + "', got '" +
                            std::string(trim(header[static_cast<std::size_t>(i)])) + "'");

    ObservationSeries series;
    const std::int64_t start_serial = days_from_civil(sim_start_date);
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty())
            continue;
        auto cells = split_csv_row(line);
        if (cells.size() < 4 || (!lax_columns && cells.size() != 4))
            throw DataError("row " + std::to_string(row) + ": expected 4 columns, got " +
                            std::to_string(cells.size()));
        Date date;
        try {
            date = parse_date(trim(cells[0]));
        }
        catch (const DataError& e) {
            throw DataError("row " + std::to_string(row) + ": " + e.what());
        }
        Observation obs;
        obs.day_index = days_from_civil(date) - start_serial;
        obs.h_stock = parse_count(cells[1], "hospitalized", row);
        obs.r_cum = parse_count(cells[2], "recovered_cum", row);
        obs.d_cum = parse_count(cells[3], "deaths_cum", row);

        if (series.records.empty()) {
            series.start_date = date;
            if (first_obs_day_index >= 0 && obs.day_index != first_obs_day_index)
                throw DataError("row " + std::to_string(row) + ": first observation " +
                                to_string(date) + " is day " + std::to_string(obs.day_index) +
                                " of the simulation, expected day " +
                                std::to_string(first_obs_day_index));
        }
        else {
            const Observation& prev = series.records.back();
            if (obs.day_index == prev.day_index)
                throw DataError("row " + std::to_string(row) + ": duplicate date " +
                                to_string(date));
            if (obs.day_index != prev.day_index + 1)
                throw DataError("row " + std::to_string(row) + ": gap before " + to_string(date) +
                                " (dates must be consecutive)");
            if (obs.r_cum < prev.r_cum)
                throw DataError("row " + std::to_string(row) +
                                ": recovered_cum decreases (cumulative series)");
            if (obs.d_cum < prev.d_cum)
                throw DataError("row " + std::to_string(row) +
                                ": deaths_cum decreases (cumulative series)");
        }
        series.records.push_back(obs);
    }
    if (series.records.empty())
        throw DataError("no observation rows");
    return series;
}

ObservationSeries load_observations(const std::string& path, const Date& sim_start_date,
                                    std::int64_t first_obs_day_index, bool lax_columns)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open observation file '" + path + "'");
    return parse_observations(in, sim_start_date, first_obs_day_index, lax_columns);
}

std::string observations_to_csv(const ObservationSeries& series)
{
    std::ostringstream out;
    out << "date,hospitalized,recovered_cum,deaths_cum\n";
    const std::int64_t first = series.empty() ? 0 : series.front().day_index;
    for (const Observation& o : series.records) {
        out << to_string(add_days(series.start_date, o.day_index - first)) << ',' << o.h_stock
            << ',' << o.r_cum << ',' << o.d_cum << '\n';
    }
    return out.str();
}

void save_observations(const ObservationSeries& series, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write observation file '" + path + "'");
    out << observations_to_csv(series);
}

} // namespace pfepi
