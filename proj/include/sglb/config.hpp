#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sglb {

// Flat key/value experiment configuration. Every field is optional so that
// a config file and command-line flags can be layered; defaults are applied
// when a command reads the config.
struct ExperimentConfig {
  std::optional<double> n;
  std::optional<std::uint64_t> d;
  std::optional<double> sigma;
  std::optional<double> alpha;  // override for the hard instance, <= sigma^2 d / (256 n)
  std::optional<std::string> sampler;    // ula | sgld | baseline
  std::optional<double> eta;             // ULA step / SGLD constant step
  std::optional<std::string> schedule;   // default | constant | inverse_time
  std::optional<double> eta_scale;       // c for inverse_time
  std::optional<std::string> init;       // origin | gaussian
  std::optional<std::string> estimator;  // first_coordinate | baseline_mean
  std::optional<std::string> noise;      // first_coordinate | isotropic | exact
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> target;  // hard | centered (sweep)
  std::optional<double> target_alpha;
  std::optional<std::uint64_t> bins;
  std::optional<std::vector<double>> grid_n;
  std::optional<std::vector<std::uint64_t>> grid_d;
  std::optional<std::vector<double>> grid_sigma;
  std::optional<std::vector<std::string>> grid_sampler;
  std::optional<std::string> out;

  bool operator==(const ExperimentConfig&) const = default;
};

// Parses a JSON object; unknown keys and wrongly typed values throw ConfigError.
ExperimentConfig parse_config(std::string_view json_text);

// JSON object holding only the set fields; doubles round-trip exactly.
std::string emit_config(const ExperimentConfig& config);

// Fields set in `overrides` replace those in `base`.
ExperimentConfig merge_config(const ExperimentConfig& base, const ExperimentConfig& overrides);

// Sets one key from its JSON-encoded value, e.g. set_config_value(c, "n", "400").
void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view json_value);

// Validates the fields a command needs before anything runs. Throws
// ConfigError for missing/ill-formed fields and PreconditionViolation for
// violated model preconditions.
void validate_config(const ExperimentConfig& config, std::string_view command);

}  // namespace sglb
