// sglb command-line tool. Everything goes through the C API in sglb/sglb.h.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sglb/sglb.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int exit_code(sglb_status status) {
  switch (status) {
    case SGLB_OK: return 0;
    case SGLB_ERR_RUNTIME: return kExitRuntime;
    default: return kExitConfig;
  }
}

int report(sglb_status status) {
  std::cerr << "sglb: error: " << sglb_last_error() << '\n';
  return exit_code(status);
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  return static_cast<bool>(os);
}

std::string json_list(const std::string& comma_separated, bool quote) {
  std::string out = "[";
  std::stringstream ss(comma_separated);
  std::string item;
  bool first = true;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out += first ? "" : ",";
    out += quote ? "\"" + item + "\"" : item;
    first = false;
  }
  return out + "]";
}

struct ConfigHandle {
  sglb_config* ptr = nullptr;
  ~ConfigHandle() { sglb_config_destroy(ptr); }
};

// Flag values are kept as text and handed to the library as JSON, so numbers
// reach the config exactly as typed.
struct Flags {
  std::string config_path, out_path, transcript_path;
  std::map<std::string, std::string> scalars;  // key -> JSON text
  std::map<std::string, std::string> lists;    // key -> comma separated
};

void add_scalar(CLI::App* cmd, Flags& flags, const std::string& flag, const std::string& key,
                const std::string& help) {
  cmd->add_option_function<std::string>(
      flag, [&flags, key](const std::string& v) { flags.scalars[key] = v; }, help);
}

void add_list(CLI::App* cmd, Flags& flags, const std::string& flag, const std::string& key,
              const std::string& help) {
  cmd->add_option_function<std::string>(
      flag, [&flags, key](const std::string& v) { flags.lists[key] = v; }, help);
}

void add_common(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file; flags override its keys");
  cmd->add_option("--out", flags.out_path, "Write CSV here instead of stdout");
  add_scalar(cmd, flags, "--seed", "seed", "Master seed (u64)");
  add_scalar(cmd, flags, "--trials", "trials", "Monte Carlo trials");
  add_scalar(cmd, flags, "--n", "n", "Query budget");
  add_scalar(cmd, flags, "--d", "d", "Dimension");
  add_scalar(cmd, flags, "--sigma", "sigma", "Noise scale (budget sigma^2 d)");
  add_scalar(cmd, flags, "--alpha", "alpha", "Smoothness override, <= sigma^2 d / (256 n)");
}

void add_sampler_flags(CLI::App* cmd, Flags& flags) {
  add_scalar(cmd, flags, "--sampler", "sampler", "ula | sgld | baseline");
  add_scalar(cmd, flags, "--eta", "eta", "Constant step size");
  add_scalar(cmd, flags, "--schedule", "schedule", "default | constant | inverse_time");
  add_scalar(cmd, flags, "--eta-scale", "eta_scale", "c in eta_t = c / t");
  add_scalar(cmd, flags, "--init", "init", "origin | gaussian");
  add_scalar(cmd, flags, "--noise", "noise", "first_coordinate | isotropic | exact");
}

int run_experiment(const std::string& command, const Flags& flags) {
  ConfigHandle config;
  sglb_status st = sglb_config_create(&config.ptr);
  if (st != SGLB_OK) return report(st);
  if (!flags.config_path.empty()) {
    std::string text;
    if (!read_file(flags.config_path, text)) {
      std::cerr << "sglb: error: cannot read config " << flags.config_path << '\n';
      return kExitConfig;
    }
    if ((st = sglb_config_load_json(config.ptr, text.c_str())) != SGLB_OK) return report(st);
  }
  for (const auto& [key, value] : flags.scalars)
    if ((st = sglb_config_set(config.ptr, key.c_str(), value.c_str())) != SGLB_OK) return report(st);
  for (const auto& [key, value] : flags.lists) {
    const std::string json = json_list(value, key == "grid_sampler");
    if ((st = sglb_config_set(config.ptr, key.c_str(), json.c_str())) != SGLB_OK) return report(st);
  }
  if (!flags.out_path.empty()) {
    if ((st = sglb_config_set(config.ptr, "out", ("\"" + flags.out_path + "\"").c_str())) != SGLB_OK)
      return report(st);
  }

  sglb_result* result = nullptr;
  if ((st = sglb_run(config.ptr, command.c_str(), &result)) != SGLB_OK) return report(st);
  const std::string csv = sglb_result_csv(result);
  const std::string summary = sglb_result_summary(result);
  sglb_result_destroy(result);

  if (!flags.transcript_path.empty()) {
    char* text = nullptr;
    if ((st = sglb_lecam_transcript_csv(config.ptr, &text)) != SGLB_OK) return report(st);
    const bool ok = write_file(flags.transcript_path, text);
    sglb_string_free(text);
    if (!ok) {
      std::cerr << "sglb: error: cannot write " << flags.transcript_path << '\n';
      return kExitRuntime;
    }
  }

  if (flags.out_path.empty()) {
    std::cout << csv;
    std::cerr << summary;
  } else {
    if (!write_file(flags.out_path, csv)) {
      std::cerr << "sglb: error: cannot write " << flags.out_path << '\n';
      return kExitRuntime;
    }
    std::cout << summary;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic-gradient sampling lower bounds: closed forms, Le Cam experiments, sweeps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sglb_version()));

  Flags flags;

  auto* bound = app.add_subcommand("bound", "Closed-form bound report for (n, d, sigma)");
  add_common(bound, flags);

  auto* lecam = app.add_subcommand("lecam", "Two-point experiment and randomization gap report");
  add_common(lecam, flags);
  add_sampler_flags(lecam, flags);
  add_scalar(lecam, flags, "--estimator", "estimator", "first_coordinate | baseline_mean");
  lecam->add_option("--transcript", flags.transcript_path, "Dump the first trial's transcript as CSV");

  auto* sweep = app.add_subcommand("sweep", "Parameter sweep over n x d x sigma x sampler");
  add_common(sweep, flags);
  add_sampler_flags(sweep, flags);
  add_scalar(sweep, flags, "--target", "target", "hard | centered");
  add_scalar(sweep, flags, "--target-alpha", "target_alpha", "alpha of the centered target");
  add_scalar(sweep, flags, "--bins", "bins", "Equal-probability bins for the empirical TV bound");
  add_list(sweep, flags, "--grid-n", "grid_n", "Comma-separated n values");
  add_list(sweep, flags, "--grid-d", "grid_d", "Comma-separated d values");
  add_list(sweep, flags, "--grid-sigma", "grid_sigma", "Comma-separated sigma values");
  add_list(sweep, flags, "--grid-sampler", "grid_sampler", "Comma-separated sampler names");

  std::string csv_path, x_column = "n", y_columns, svg_path;
  bool log_log = false, reference = false;
  auto* plot = app.add_subcommand("plot", "SVG plot from a CSV produced by the other commands");
  plot->add_option("csv", csv_path, "Input CSV")->required();
  plot->add_option("--x", x_column, "x column");
  plot->add_option("--y", y_columns, "Comma-separated columns or metric names")->required();
  plot->add_flag("--log-log", log_log, "Logarithmic axes");
  plot->add_flag("--reference", reference, "Draw a slope -1/2 reference line");
  plot->add_option("--out", svg_path, "Write SVG here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (*plot) {
    std::string csv;
    if (!read_file(csv_path, csv)) {
      std::cerr << "sglb: error: cannot read " << csv_path << '\n';
      return kExitConfig;
    }
    char* svg = nullptr;
    const sglb_status st =
        sglb_plot_svg(csv.c_str(), x_column.c_str(), y_columns.c_str(), log_log, reference, &svg);
    if (st != SGLB_OK) return report(st);
    const std::string text = svg;
    sglb_string_free(svg);
    if (svg_path.empty()) {
      std::cout << text;
    } else if (!write_file(svg_path, text)) {
      std::cerr << "sglb: error: cannot write " << svg_path << '\n';
      return kExitRuntime;
    }
    return 0;
  }

  const std::string command = *bound ? "bound" : *lecam ? "lecam" : "sweep";
  return run_experiment(command, flags);
}
