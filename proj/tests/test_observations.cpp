#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pfepi/errors.hpp"
#include "pfepi/observations.hpp"
#include "pfepi/rng.hpp"

using namespace pfepi;

namespace {

ObservationSeries parse(const std::string& text, std::int64_t first_idx = -1,
                        bool lax = false, Date start = Date{2020, 1, 17})
{
    std::istringstream in(text);
    return parse_observations(in, start, first_idx, lax);
}

} // namespace

TEST_CASE("civil date arithmetic")
{
    CHECK(days_from_civil({1970, 1, 1}) == 0);
    CHECK(days_from_civil({1970, 1, 2}) == 1);
    CHECK(days_from_civil({1969, 12, 31}) == -1);
    CHECK(days_from_civil({2020, 3, 6}) - days_from_civil({2020, 1, 17}) == 49);
    CHECK(days_from_civil({2020, 3, 1}) - days_from_civil({2020, 2, 28}) == 2); // leap year
    CHECK(days_from_civil({2021, 3, 1}) - days_from_civil({2021, 2, 28}) == 1);

    // Round trip across a broad range of serial days.
    auto g = RngStream::derive(1, {1});
    for (int i = 0; i < 1000; ++i) {
        const auto serial = static_cast<std::int64_t>(g.next_unit() * 80000.0) - 10000;
        const Date d = civil_from_days(serial);
        REQUIRE(days_from_civil(d) == serial);
    }

    CHECK(to_string(Date{2020, 3, 6}) == "2020-03-06");
    CHECK(parse_date("2020-03-06") == Date{2020, 3, 6});
    CHECK(add_days({2020, 1, 17}, 49) == Date{2020, 3, 6});
    CHECK_THROWS_AS(parse_date("2020-3-06"), DataError);
    CHECK_THROWS_AS(parse_date("2020-02-30"), DataError);
    CHECK_THROWS_AS(parse_date("garbage"), DataError);
}

TEST_CASE("loading assigns day indices from the calendar offset")
{
    const auto series = parse("date,hospitalized,recovered_cum,deaths_cum\n"
                              "2020-03-06,15,3,1\n"
                              "2020-03-07,18,5,1\n"
                              "2020-03-08,19,9,2\n",
                              49);
    REQUIRE(series.records.size() == 3);
    CHECK(series.start_date == Date{2020, 3, 6});
    CHECK(series.records[0].day_index == 49);
    CHECK(series.records[1].day_index == 50);
    CHECK(series.records[2].day_index == 51);
    CHECK(series.records[0].h_stock == 15);
    CHECK(series.records[2].r_cum == 9);
    CHECK(series.records[2].d_cum == 2);
}

TEST_CASE("malformed and inconsistent inputs are rejected with row numbers")
{
    const std::string header = "date,hospitalized,recovered_cum,deaths_cum\n";

    // Gap in the dates.
    try {
        parse(header + "2020-03-06,1,0,0\n2020-03-08,2,0,0\n");
        FAIL("expected DataError");
    }
    catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 3") != std::string::npos);
        CHECK(msg.find("2020-03-08") != std::string::npos);
        CHECK(msg.find("gap") != std::string::npos);
    }

    // Decreasing cumulative deaths.
    try {
        parse(header + "2020-03-06,1,0,5\n2020-03-07,2,0,4\n");
        FAIL("expected DataError");
    }
    catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 3") != std::string::npos);
        CHECK(msg.find("deaths_cum") != std::string::npos);
    }

    CHECK_THROWS_AS(parse(header + "2020-03-06,1,0,5\n2020-03-07,2,-1,6\n"), DataError);
    CHECK_THROWS_AS(parse(header + "2020-03-06,abc,0,0\n"), DataError);
    CHECK_THROWS_AS(parse(header + "2020-03-06,1,0\n"), DataError);
    CHECK_THROWS_AS(parse(header + "2020-03-06,1,0,0\n2020-03-06,1,0,0\n"), DataError);
    CHECK_THROWS_AS(parse("wrong,header,entirely,here\n2020-03-06,1,0,0\n"), DataError);
    CHECK_THROWS_AS(parse(header), DataError); // no rows

    // First-day alignment.
    CHECK_THROWS_AS(parse(header + "2020-03-07,1,0,0\n", 49), DataError);
    CHECK_NOTHROW(parse(header + "2020-03-07,1,0,0\n", 50));
}

TEST_CASE("extra columns require lax mode")
{
    const std::string text = "date,hospitalized,recovered_cum,deaths_cum,notes\n"
                             "2020-03-06,1,0,0,hello\n";
    CHECK_THROWS_AS(parse(text), DataError);
    const auto series = parse(text, -1, true);
    CHECK(series.records.size() == 1);
    CHECK(series.records[0].h_stock == 1);
}

TEST_CASE("save and reload round-trips a validated series")
{
    auto g = RngStream::derive(5, {2});
    ObservationSeries series;
    series.start_date = Date{2020, 3, 6};
    std::int64_t r = 0, d = 0;
    for (int i = 0; i < 200; ++i) {
        Observation o;
        o.day_index = 49 + i;
        o.h_stock = static_cast<std::int64_t>(g.next_unit() * 500.0);
        r += static_cast<std::int64_t>(g.next_unit() * 40.0);
        d += static_cast<std::int64_t>(g.next_unit() * 3.0);
        o.r_cum = r;
        o.d_cum = d;
        series.records.push_back(o);
    }

    const std::string path = "obs_roundtrip_test.csv";
    save_observations(series, path);
    const auto reloaded = load_observations(path, Date{2020, 1, 17}, 49);
    std::remove(path.c_str());

    REQUIRE(reloaded.records.size() == series.records.size());
    CHECK(reloaded.start_date == series.start_date);
    for (std::size_t i = 0; i < series.records.size(); ++i)
        REQUIRE(reloaded.records[i] == series.records[i]);

    CHECK_THROWS_AS(load_observations("does_not_exist.csv", Date{2020, 1, 17}, 49), ConfigError);
}
