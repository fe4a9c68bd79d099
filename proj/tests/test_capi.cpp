#include <doctest.h>

#include <string>

#include "sglb/sglb.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  sglb_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version and header") {
  CHECK(std::string(sglb_version()) == "0.1.0");
  CHECK(std::string(sglb_csv_header()).rfind("experiment,n,d,sigma", 0) == 0);
}

TEST_CASE("bound through the C API") {
  sglb_bound_report r{};
  REQUIRE(sglb_bound(400.0, 100, 1.0, nullptr, &r) == SGLB_OK);
  CHECK(r.lambda == 0.125);
  CHECK(r.tv_bound == doctest::Approx(0.25));
  CHECK(r.minimax_lower == doctest::Approx(0.03125));
  CHECK(sglb_bound(24.0, 100, 1.0, nullptr, &r) == SGLB_ERR_PRECONDITION);
  CHECK(std::string(sglb_last_error()).find("n >= sigma^2 d / 4") != std::string::npos);
  CHECK(sglb_bound(400.0, 100, 1.0, nullptr, nullptr) == SGLB_ERR_INVALID_ARGUMENT);
}

TEST_CASE("config handle lifecycle and errors") {
  sglb_config* c = nullptr;
  REQUIRE(sglb_config_create(&c) == SGLB_OK);
  CHECK(sglb_config_load_json(c, R"({"n": 400, "d": 100, "sigma": 1})") == SGLB_OK);
  CHECK(sglb_config_set(c, "seed", "9") == SGLB_OK);
  CHECK(sglb_config_set(c, "bogus", "1") == SGLB_ERR_CONFIG);
  CHECK(sglb_config_load_json(c, "{not json") == SGLB_ERR_CONFIG);
  CHECK(sglb_config_validate(c, "bound") == SGLB_OK);

  char* json = nullptr;
  REQUIRE(sglb_config_to_json(c, &json) == SGLB_OK);
  const std::string text = take(json);
  CHECK(text.find("\"seed\": 9") != std::string::npos);

  sglb_result* res = nullptr;
  REQUIRE(sglb_run(c, "bound", &res) == SGLB_OK);
  CHECK(std::string(sglb_result_csv(res)).find("minimax_intermediate,0.0625") != std::string::npos);
  CHECK(std::string(sglb_result_summary(res)).size() > 0);
  sglb_result_destroy(res);

  CHECK(sglb_run(c, "nope", &res) == SGLB_ERR_CONFIG);
  CHECK(sglb_run(nullptr, "bound", &res) == SGLB_ERR_INVALID_ARGUMENT);
  sglb_config_destroy(c);
  sglb_config_destroy(nullptr);
  sglb_result_destroy(nullptr);
}

TEST_CASE("precondition errors surface from runs") {
  sglb_config* c = nullptr;
  REQUIRE(sglb_config_create(&c) == SGLB_OK);
  REQUIRE(sglb_config_load_json(c, R"({"n": 24, "d": 100, "sigma": 1})") == SGLB_OK);
  sglb_result* res = nullptr;
  CHECK(sglb_run(c, "bound", &res) == SGLB_ERR_PRECONDITION);
  CHECK(res == nullptr);
  sglb_config_destroy(c);
}

TEST_CASE("plot through the C API") {
  char* svg = nullptr;
  CHECK(sglb_plot_svg("", "n", "value", 1, 1, &svg) == SGLB_ERR_CONFIG);
  sglb_config* c = nullptr;
  REQUIRE(sglb_config_create(&c) == SGLB_OK);
  REQUIRE(sglb_config_load_json(c, R"({"n": 400, "d": 100, "sigma": 1})") == SGLB_OK);
  sglb_result* res = nullptr;
  REQUIRE(sglb_run(c, "bound", &res) == SGLB_OK);
  REQUIRE(sglb_plot_svg(sglb_result_csv(res), "n", "minimax_lower,tv_bound", 0, 0, &svg) == SGLB_OK);
  CHECK(take(svg).find("</svg>") != std::string::npos);
  sglb_result_destroy(res);
  sglb_config_destroy(c);
}
