#include <doctest.h>

#include "pfepi/config.hpp"
#include "pfepi/errors.hpp"
#include "pfepi/report.hpp"

using namespace pfepi;

TEST_CASE("flat config text with comments and overrides")
{
    const char* text = "# experiment setup\n"
                       "run.n_particles = 5000\n"
                       "run.master_seed = 99\n"
                       "model.k = 0.2   # sensitivity value\n"
                       "model.p_as = 0.5\n"
                       "err.sigma_r = 1500\n"
                       "init.mean_t_h = 12\n"
                       "obs.sim_start_date = 2020-01-17\n"
                       "\n"
                       "run.ci_levels = 0.5,0.9\n";
    Settings s = parse_config_text(text);
    CHECK(s.exp.n_particles == 5000);
    CHECK(s.exp.master_seed == 99);
    CHECK(s.exp.fixed.k == 0.2);
    CHECK(s.exp.fixed.p_as == 0.5);
    CHECK(s.exp.fixed.p_a_inf == doctest::Approx(0.5));
    CHECK(s.exp.err.sigma_r == 1500.0);
    CHECK(s.exp.init_mean_t_h == 12.0);
    CHECK(s.sim_start == Date{2020, 1, 17});
    REQUIRE(s.exp.ci_levels.size() == 2);
    CHECK(s.exp.ci_levels[0] == 0.5);

    apply_override(s, "model.k=0.58");
    CHECK(s.exp.fixed.k == 0.58);
    finalize_settings(s);
    CHECK(s.exp.fixed.e_sc == doctest::Approx(0.71));

    CHECK_THROWS_AS(apply_override(s, "nonsense.key=1"), ConfigError);
    CHECK_THROWS_AS(apply_override(s, "model.k"), ConfigError);
    CHECK_THROWS_AS(apply_override(s, "model.k=abc"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("run.n_particles 5000\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("obs.sim_start_date = 17.1.2020\n"), ConfigError);
}

TEST_CASE("summary CSV layout is stable")
{
    std::vector<DailySummary> summaries(1);
    DailySummary& d = summaries[0];
    d.day_index = 49;
    d.phase = Phase::analysis;
    d.n_eff = 123.5;
    d.resampled = true;
    QuantitySummary* qs[8] = {&d.rt, &d.r, &d.h, &d.r_cum, &d.d_cum, &d.asym, &d.p_hd, &d.mean_t_h};
    for (int q = 0; q < 8; ++q) {
        qs[q]->mean = q;
        qs[q]->intervals = {{q - 0.5, q + 0.5}, {q - 1.0, q + 1.0}};
    }

    const std::vector<double> levels{0.68, 0.90};
    const std::string csv = summaries_csv(summaries, Date{2020, 1, 17}, levels);
    const std::string header = csv.substr(0, csv.find('\n'));
    CHECK(header ==
          "day_index,date,phase,"
          "rt_mean,rt_lo68,rt_hi68,rt_lo90,rt_hi90,"
          "r_mean,r_lo68,r_hi68,r_lo90,r_hi90,"
          "h_mean,h_lo68,h_hi68,h_lo90,h_hi90,"
          "r_cum_mean,r_cum_lo68,r_cum_hi68,r_cum_lo90,r_cum_hi90,"
          "d_cum_mean,d_cum_lo68,d_cum_hi68,d_cum_lo90,d_cum_hi90,"
          "asym_mean,asym_lo68,asym_hi68,asym_lo90,asym_hi90,"
          "p_hd_mean,p_hd_lo68,p_hd_hi68,p_hd_lo90,p_hd_hi90,"
          "mean_t_h_mean,mean_t_h_lo68,mean_t_h_hi68,mean_t_h_lo90,mean_t_h_hi90,"
          "n_eff,resampled");
    const std::string row = csv.substr(csv.find('\n') + 1);
    CHECK(row.substr(0, 22) == "49,2020-03-06,analysis");
    CHECK(row.find(",true\n") != std::string::npos);

    // 17-significant-digit round trip.
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(2.0) == "2");
    const double v = 0.12345678901234567;
    CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("run metadata is flat and timestamp-free")
{
    ExperimentConfig cfg;
    std::vector<DailySummary> summaries(3);
    summaries[1].phase = Phase::analysis;
    summaries[1].resampled = true;
    summaries[2].day_index = 50;
    const std::string a = run_meta_json(cfg, Date{2020, 1, 17}, summaries);
    const std::string b = run_meta_json(cfg, Date{2020, 1, 17}, summaries);
    CHECK(a == b);
    CHECK(a.find("\"n_particles\": 100000") != std::string::npos);
    CHECK(a.find("\"resamplings\": 1") != std::string::npos);
    CHECK(a.find("\"sim_start_date\": \"2020-01-17\"") != std::string::npos);
}
