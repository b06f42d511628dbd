#ifndef PFEPI_OBSERVATIONS_HPP
#define PFEPI_OBSERVATIONS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pfepi {

/// Proleptic Gregorian calendar date.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    friend bool operator==(const Date&, const Date&) = default;
};

/// Days since 1970-01-01 (negative before).
std::int64_t days_from_civil(const Date& d);
Date civil_from_days(std::int64_t days);
Date add_days(const Date& d, std::int64_t n);

std::string to_string(const Date& d);
/// Parses strict ISO-8601 "YYYY-MM-DD"; throws DataError.
Date parse_date(std::string_view text);

/// One daily record: hospitalized stock, cumulative recovered, cumulative
/// deaths.  day_index counts days since the simulation start date.
struct Observation {
    std::int64_t day_index = 0;
    std::int64_t h_stock = 0;
    std::int64_t r_cum = 0;
    std::int64_t d_cum = 0;

    friend bool operator==(const Observation&, const Observation&) = default;
};

/// Validated daily series with consecutive dates and monotone cumulatives.
struct ObservationSeries {
    Date start_date;                  // calendar date of records.front()
    std::vector<Observation> records; // day_index strictly consecutive

    bool empty() const { return records.empty(); }
    const Observation& front() const { return records.front(); }
    const Observation& back() const { return records.back(); }
};

/// Parses and validates the CSV schema
///   date,hospitalized,recovered_cum,deaths_cum
/// with ISO dates, assigning day_index = date - sim_start_date.  When
/// first_obs_day_index >= 0 the first record must land on that index.
/// Extra columns are rejected unless lax_columns is set.  All problems are
/// reported as DataError with the offending row number.
ObservationSeries load_observations(const std::string& path, const Date& sim_start_date,
                                    std::int64_t first_obs_day_index, bool lax_columns = false);

/// Stream variant of load_observations (used by tests).
ObservationSeries parse_observations(std::istream& in, const Date& sim_start_date,
                                     std::int64_t first_obs_day_index, bool lax_columns = false);

std::string observations_to_csv(const ObservationSeries& series);
void save_observations(const ObservationSeries& series, const std::string& path);

} // namespace pfepi

#endif
