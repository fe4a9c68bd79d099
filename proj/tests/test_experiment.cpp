#include <doctest.h>

#include <algorithm>

#include "sglb/config.hpp"
#include "sglb/csv.hpp"
#include "sglb/errors.hpp"
#include "sglb/experiment.hpp"
#include "sglb/plot.hpp"

using namespace sglb;

namespace {

ExperimentConfig base_config(double n, std::uint64_t d, double sigma) {
  ExperimentConfig c;
  c.n = n;
  c.d = d;
  c.sigma = sigma;
  return c;
}

std::string cell(const CsvTable& t, std::size_t row, std::string_view column) {
  return t.rows.at(row).at(*t.column(column));
}

}  // namespace

TEST_CASE("CSV header is stable") {
  CHECK(kCsvHeader ==
        "experiment,n,d,sigma,alpha,lambda,per_query_kl,kl_bound,tv_bound,psi1_lower,psi2_upper,"
        "minimax_lower,metric,value,stderr,seed,status");
  CHECK(render_csv({}) == std::string(kCsvHeader) + "\n");
}

TEST_CASE("number formatting round trips doubles") {
  CHECK(format_number(0.125) == "0.125");
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("config: parse, emit and round trip") {
  const auto c = parse_config(R"({"n": 400, "d": 100, "sigma": 1, "sampler": "ula", "eta": 0.5,
                                   "grid_n": [256, 512], "grid_sampler": ["sgld"], "seed": 7})");
  CHECK(*c.n == 400.0);
  CHECK(*c.d == 100);
  CHECK(*c.sampler == "ula");
  CHECK(c.grid_n->size() == 2);
  CHECK(parse_config(emit_config(c)) == c);
  CHECK(parse_config("{}") == ExperimentConfig{});
}

TEST_CASE("config: rejects unknown keys, wrong types and malformed JSON") {
  CHECK_THROWS_AS(parse_config(R"({"n": 400, "colour": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"n": "many"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"d": -3})"), ConfigError);
  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
}

TEST_CASE("config: set and merge") {
  ExperimentConfig c;
  set_config_value(c, "n", "400");
  set_config_value(c, "sampler", "baseline");
  set_config_value(c, "grid_d", "[4, 8]");
  CHECK(*c.n == 400.0);
  CHECK(*c.sampler == "baseline");
  CHECK(*c.grid_d == std::vector<std::uint64_t>{4, 8});
  CHECK_THROWS_AS(set_config_value(c, "nope", "1"), ConfigError);

  ExperimentConfig over;
  over.n = 25.0;
  const auto m = merge_config(c, over);
  CHECK(*m.n == 25.0);
  CHECK(*m.sampler == "baseline");
}

TEST_CASE("config: validation") {
  CHECK_NOTHROW(validate_config(base_config(400, 100, 1), "bound"));
  CHECK_THROWS_AS(validate_config(ExperimentConfig{}, "bound"), ConfigError);
  auto c = base_config(400.5, 100, 1);
  CHECK_THROWS_AS(validate_config(c, "lecam"), ConfigError);
  c = base_config(400, 100, 1);
  c.sampler = "mala";
  CHECK_THROWS_AS(validate_config(c, "lecam"), ConfigError);
  CHECK_THROWS_AS(validate_config(base_config(400, 100, 1), "frobnicate"), ConfigError);

  ExperimentConfig big;
  big.grid_n = std::vector<double>(101, 256.0);
  big.grid_d = std::vector<std::uint64_t>(100, 4);
  big.grid_sigma = {1.0};
  CHECK_THROWS_AS(validate_config(big, "sweep"), ConfigError);
}

TEST_CASE("bound command: sigma=1, d=100, n=400") {
  const auto out = cmd_bound(base_config(400, 100, 1));
  const auto t = parse_csv(out.csv);
  REQUIRE(t.rows.size() == 1);
  CHECK(cell(t, 0, "lambda") == "0.125");
  CHECK(cell(t, 0, "tv_bound") == "0.25");
  CHECK(cell(t, 0, "minimax_lower") == "0.03125");
  CHECK(cell(t, 0, "kl_bound") == "0.125");
  CHECK(cell(t, 0, "status") == "ok");
  CHECK(out.summary.find("0.03125") != std::string::npos);
}

TEST_CASE("bound command: boundary and violation") {
  const auto t = parse_csv(cmd_bound(base_config(25, 100, 1)).csv);
  CHECK(cell(t, 0, "lambda") == "0.5");
  try {
    cmd_bound(base_config(24, 100, 1));
    FAIL("expected a precondition violation");
  } catch (const PreconditionViolation& e) {
    CHECK(std::string(e.what()).find("n >= sigma^2 d / 4 violated") != std::string::npos);
  }
}

TEST_CASE("lecam command: rows and replay") {
  auto c = base_config(64, 16, 1);
  c.sampler = "baseline";
  c.estimator = "baseline_mean";
  c.trials = 400;
  c.seed = 5;
  const auto a = cmd_lecam(c);
  CHECK(a.csv == cmd_lecam(c).csv);
  const auto t = parse_csv(a.csv);
  std::vector<std::string> metrics;
  for (std::size_t i = 0; i < t.rows.size(); ++i) metrics.push_back(cell(t, i, "metric"));
  CHECK(metrics == std::vector<std::string>{"test_error", "test_error_theta1", "test_error_theta2",
                                            "test_ci_hoeffding", "test_floor", "psi1_hat", "gap_psi1_hat",
                                            "psi2_hat", "gap", "sup_tv_exact", "gap_inequality_holds"});
  CHECK(cell(t, 4, "value") == "0.375");

  c.estimator = "baseline_mean";
  c.sampler = "ula";
  CHECK_THROWS_AS(cmd_lecam(c), ConfigError);
}

TEST_CASE("lecam transcript dump") {
  auto c = base_config(8, 2, 1);
  c.sampler = "ula";
  c.eta = 1.0;
  c.trials = 100;
  const auto csv = lecam_transcript_csv(c);
  CHECK(csv.rfind("round,y_1,y_2,z_1,z_2\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
}

TEST_CASE("sweep: replay, single cell and per-row failures") {
  ExperimentConfig c;
  c.grid_n = {64.0};
  c.grid_d = {16};
  c.grid_sigma = {1.0};
  c.grid_sampler = {"ula"};
  c.trials = 0;
  c.seed = 3;
  const auto a = cmd_sweep(c);
  CHECK(a.csv == cmd_sweep(c).csv);
  const auto t = parse_csv(a.csv);
  REQUIRE(t.rows.size() == 1);
  const auto b = parse_csv(cmd_bound(base_config(64, 16, 1)).csv);
  for (std::string_view col : {"n", "d", "sigma", "alpha", "lambda", "per_query_kl", "kl_bound", "tv_bound",
                               "psi1_lower", "psi2_upper", "minimax_lower"})
    CHECK(cell(t, 0, col) == cell(b, 0, col));
  CHECK(cell(t, 0, "metric") == "exact_tv");

  c.grid_n = {64.0, 2.0};
  const auto f = parse_csv(cmd_sweep(c).csv);
  REQUIRE(f.rows.size() == 2);
  CHECK(cell(f, 0, "status") == "ok");
  CHECK(cell(f, 1, "status").rfind("error: ", 0) == 0);
}

TEST_CASE("sweep: centered target reports bound_unavailable where the hard instance does not exist") {
  ExperimentConfig c;
  c.grid_n = {2.0};
  c.grid_d = {16};
  c.grid_sigma = {1.0};
  c.grid_sampler = {"sgld"};
  c.target = "centered";
  c.trials = 0;
  const auto t = parse_csv(cmd_sweep(c).csv);
  REQUIRE(t.rows.size() == 1);
  CHECK(cell(t, 0, "status") == "bound_unavailable");
  CHECK(cell(t, 0, "lambda").empty());
  CHECK_FALSE(cell(t, 0, "value").empty());
}

TEST_CASE("plot") {
  CHECK_THROWS_AS(cmd_plot("", PlotOptions{"n", {"value"}, true, true, ""}), ConfigError);
  CHECK_THROWS_AS(cmd_plot(std::string(kCsvHeader) + "\n", PlotOptions{"n", {"value"}, true, true, ""}),
                  ConfigError);
  const auto bound_csv = cmd_bound(base_config(400, 100, 1)).csv;
  CHECK_THROWS_AS(cmd_plot(bound_csv, PlotOptions{"n", {"nonexistent"}, false, false, ""}), ConfigError);
  const auto single = cmd_plot(bound_csv, PlotOptions{"n", {"minimax_lower"}, true, true, ""});
  CHECK(single.rfind("<?xml", 0) == 0);
  CHECK(single.find("</svg>") != std::string::npos);

  ExperimentConfig c;
  c.grid_n = {256.0, 1024.0, 4096.0};
  c.grid_d = {16};
  c.grid_sigma = {1.0};
  c.grid_sampler = {"sgld"};
  c.target = "centered";
  c.trials = 0;
  const auto svg = cmd_plot(cmd_sweep(c).csv, PlotOptions{"n", {"exact_tv", "minimax_lower"}, true, true, "tv"});
  CHECK(svg.find("exact_tv") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
}
