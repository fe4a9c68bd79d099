#include "sglb/sglb.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "sglb/analysis.hpp"
#include "sglb/config.hpp"
#include "sglb/csv.hpp"
#include "sglb/errors.hpp"
#include "sglb/experiment.hpp"
#include "sglb/plot.hpp"

struct sglb_config {
  sglb::ExperimentConfig value;
};

struct sglb_result {
  std::string csv;
  std::string summary;
};

namespace {

thread_local std::string last_error;

sglb_status fail(sglb_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <class F>
sglb_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return SGLB_OK;
  } catch (const sglb::ConfigError& e) {
    return fail(SGLB_ERR_CONFIG, e.what());
  } catch (const sglb::PreconditionViolation& e) {
    return fail(SGLB_ERR_PRECONDITION, e.what());
  } catch (const sglb::DimensionMismatch& e) {
    return fail(SGLB_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_optional_access& e) {
    return fail(SGLB_ERR_CONFIG, "missing config value");
  } catch (const std::exception& e) {
    return fail(SGLB_ERR_RUNTIME, e.what());
  } catch (...) {
    return fail(SGLB_ERR_RUNTIME, "unknown error");
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<std::string> split_list(const char* text) {
  std::vector<std::string> out;
  std::string item;
  for (const char* p = text; *p; ++p) {
    if (*p == ',') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else if (*p != ' ') {
      item += *p;
    }
  }
  if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

extern "C" {

const char* sglb_version(void) { return "0.1.0"; }

const char* sglb_last_error(void) { return last_error.c_str(); }

const char* sglb_csv_header(void) {
  static const std::string header(sglb::kCsvHeader);
  return header.c_str();
}

void sglb_string_free(char* s) { std::free(s); }

sglb_status sglb_config_create(sglb_config** out) {
  if (!out) return fail(SGLB_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] { *out = new sglb_config{}; });
}

void sglb_config_destroy(sglb_config* config) { delete config; }

sglb_status sglb_config_load_json(sglb_config* config, const char* json_text) {
  if (!config || !json_text) return fail(SGLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { config->value = sglb::merge_config(config->value, sglb::parse_config(json_text)); });
}

sglb_status sglb_config_set(sglb_config* config, const char* key, const char* json_value) {
  if (!config || !key || !json_value) return fail(SGLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { sglb::set_config_value(config->value, key, json_value); });
}

sglb_status sglb_config_to_json(const sglb_config* config, char** out) {
  if (!config || !out) return fail(SGLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = duplicate(sglb::emit_config(config->value)); });
}

sglb_status sglb_config_validate(const sglb_config* config, const char* command) {
  if (!config || !command) return fail(SGLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { sglb::validate_config(config->value, command); });
}

sglb_status sglb_run(const sglb_config* config, const char* command, sglb_result** out) {
  if (!config || !command || !out) return fail(SGLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto output = sglb::run_command(command, config->value);
    *out = new sglb_result{std::move(output.csv), std::move(output.summary)};
  });
}

const char* sglb_result_csv(const sglb_result* result) { return result ? result->csv.c_str() : ""; }

const char* sglb_result_summary(const sglb_result* result) { return result ? result->summary.c_str() : ""; }

void sglb_result_destroy(sglb_result* result) { delete result; }

sglb_status sglb_bound(double n, uint64_t d, double sigma, const double* alpha, sglb_bound_report* out) {
  if (!out) return fail(SGLB_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] {
    const auto r = sglb::make_bound_report(n, d, sigma, alpha ? std::optional<double>(*alpha) : std::nullopt);
    *out = {r.n,          r.d,        r.sigma,      r.alpha,      r.lambda,        r.per_query_kl,
            r.transcript_kl_bound, r.tv_bound, r.psi1_lower, r.psi2_upper, r.minimax_lower,
            r.minimax_intermediate};
  });
}

sglb_status sglb_lecam_transcript_csv(const sglb_config* config, char** out) {
  if (!config || !out) return fail(SGLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = duplicate(sglb::lecam_transcript_csv(config->value)); });
}

sglb_status sglb_plot_svg(const char* csv_text, const char* x_column, const char* y_columns, int log_log,
                          int reference_slope, char** svg_out) {
  if (!csv_text || !x_column || !y_columns || !svg_out) return fail(SGLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    sglb::PlotOptions options;
    options.x_column = x_column;
    options.y_series = split_list(y_columns);
    options.log_log = log_log != 0;
    options.reference_slope = reference_slope != 0;
    *svg_out = duplicate(sglb::cmd_plot(csv_text, options));
  });
}

}  // extern "C"
