#include "sglb/config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "sglb/errors.hpp"
#include "sglb/model.hpp"

namespace sglb {
namespace {

using nlohmann::json;

template <class T>
void read(const json& j, const char* key, std::optional<T>& field) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError("");
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned()) throw ConfigError("");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError("");
    }
    field = v.get<T>();
  } catch (const std::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

template <class T>
void read_list(const json& j, const char* key, std::optional<std::vector<T>>& field) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_array()) throw ConfigError(std::string("config key '") + key + "' must be a list");
  std::vector<T> out;
  for (const json& e : v) {
    std::optional<T> item;
    read(json{{"item", e}}, "item", item);
    out.push_back(*item);
  }
  field = std::move(out);
}

template <class T>
void write(json& j, const char* key, const std::optional<T>& field) {
  if (field) j[key] = *field;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "n", "d", "sigma", "alpha", "sampler", "eta", "schedule", "eta_scale", "init", "estimator",
      "noise", "trials", "seed", "target", "target_alpha", "bins", "grid_n", "grid_d",
      "grid_sigma", "grid_sampler", "out"};
  return keys;
}

ExperimentConfig from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!known_keys().count(key)) throw ConfigError("unknown config key '" + key + "'");
  ExperimentConfig c;
  read(j, "n", c.n);
  read(j, "d", c.d);
  read(j, "sigma", c.sigma);
  read(j, "alpha", c.alpha);
  read(j, "sampler", c.sampler);
  read(j, "eta", c.eta);
  read(j, "schedule", c.schedule);
  read(j, "eta_scale", c.eta_scale);
  read(j, "init", c.init);
  read(j, "estimator", c.estimator);
  read(j, "noise", c.noise);
  read(j, "trials", c.trials);
  read(j, "seed", c.seed);
  read(j, "target", c.target);
  read(j, "target_alpha", c.target_alpha);
  read(j, "bins", c.bins);
  read_list(j, "grid_n", c.grid_n);
  read_list(j, "grid_d", c.grid_d);
  read_list(j, "grid_sigma", c.grid_sigma);
  read_list(j, "grid_sampler", c.grid_sampler);
  read(j, "out", c.out);
  return c;
}

json to_json(const ExperimentConfig& c) {
  json j = json::object();
  write(j, "n", c.n);
  write(j, "d", c.d);
  write(j, "sigma", c.sigma);
  write(j, "alpha", c.alpha);
  write(j, "sampler", c.sampler);
  write(j, "eta", c.eta);
  write(j, "schedule", c.schedule);
  write(j, "eta_scale", c.eta_scale);
  write(j, "init", c.init);
  write(j, "estimator", c.estimator);
  write(j, "noise", c.noise);
  write(j, "trials", c.trials);
  write(j, "seed", c.seed);
  write(j, "target", c.target);
  write(j, "target_alpha", c.target_alpha);
  write(j, "bins", c.bins);
  write(j, "grid_n", c.grid_n);
  write(j, "grid_d", c.grid_d);
  write(j, "grid_sigma", c.grid_sigma);
  write(j, "grid_sampler", c.grid_sampler);
  write(j, "out", c.out);
  return j;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void check_one_of(const std::optional<std::string>& value, const char* key,
                  std::initializer_list<const char*> allowed) {
  if (!value) return;
  for (const char* a : allowed)
    if (*value == a) return;
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  throw ConfigError(std::string("config key '") + key + "' must be one of: " + list);
}

bool is_positive_integer(double v) { return v >= 1.0 && std::floor(v) == v && v < 9.0e15; }

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

std::string emit_config(const ExperimentConfig& config) { return to_json(config).dump(2) + "\n"; }

ExperimentConfig merge_config(const ExperimentConfig& base, const ExperimentConfig& overrides) {
  json j = to_json(base);
  j.update(to_json(overrides));
  return from_json(j);
}

void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view json_value) {
  json value;
  try {
    value = json::parse(json_value);
  } catch (const json::parse_error&) {
    // Bare words such as `sgld` are accepted as strings.
    value = std::string(json_value);
  }
  json j = to_json(config);
  j[std::string(key)] = value;
  config = from_json(j);
}

void validate_config(const ExperimentConfig& c, std::string_view command) {
  check_one_of(c.sampler, "sampler", {"ula", "sgld", "baseline"});
  check_one_of(c.schedule, "schedule", {"default", "constant", "inverse_time"});
  check_one_of(c.init, "init", {"origin", "gaussian"});
  check_one_of(c.estimator, "estimator", {"first_coordinate", "baseline_mean"});
  check_one_of(c.noise, "noise", {"first_coordinate", "isotropic", "exact"});
  check_one_of(c.target, "target", {"hard", "centered"});
  if (c.grid_sampler)
    for (const auto& s : *c.grid_sampler)
      check_one_of(std::optional<std::string>(s), "grid_sampler", {"ula", "sgld", "baseline"});
  if (c.sigma) require(*c.sigma > 0.0 && std::isfinite(*c.sigma), "sigma must be positive");
  if (c.eta) require(*c.eta > 0.0 && std::isfinite(*c.eta), "eta must be positive");
  if (c.eta_scale) require(*c.eta_scale > 0.0 && std::isfinite(*c.eta_scale), "eta_scale must be positive");
  if (c.target_alpha) require(*c.target_alpha > 0.0 && std::isfinite(*c.target_alpha), "target_alpha must be positive");
  if (c.alpha) require(*c.alpha > 0.0 && std::isfinite(*c.alpha), "alpha must be positive");
  if (c.bins) require(*c.bins >= 2, "bins must be at least 2");
  if (c.schedule && *c.schedule == "constant") require(c.eta.has_value(), "schedule 'constant' needs eta");
  if (c.schedule && *c.schedule == "inverse_time") require(c.eta_scale.has_value(), "schedule 'inverse_time' needs eta_scale");
  if (c.sampler && *c.sampler != "baseline" && c.estimator && *c.estimator == "baseline_mean")
    throw ConfigError("estimator 'baseline_mean' needs sampler 'baseline'");

  const double sigma = c.sigma.value_or(1.0);
  if (command == "bound") {
    require(c.n.has_value(), "bound needs n");
    require(c.d.has_value() && *c.d >= 1, "bound needs d >= 1");
    // Throws PreconditionViolation when the construction is not admissible.
    if (c.alpha) build_hard_instance(*c.n, *c.d, sigma, *c.alpha);
    else build_hard_instance(*c.n, *c.d, sigma);
  } else if (command == "lecam") {
    require(c.n.has_value() && is_positive_integer(*c.n), "lecam needs an integer n >= 1");
    require(c.d.has_value() && *c.d >= 1, "lecam needs d >= 1");
    require(c.trials.value_or(10000) >= 100, "lecam needs trials >= 100");
    if (c.alpha) build_hard_instance(*c.n, *c.d, sigma, *c.alpha);
    else build_hard_instance(*c.n, *c.d, sigma);
  } else if (command == "sweep") {
    const std::size_t gn = c.grid_n ? c.grid_n->size() : (c.n ? 1 : 0);
    const std::size_t gd = c.grid_d ? c.grid_d->size() : (c.d ? 1 : 0);
    const std::size_t gs = c.grid_sigma ? c.grid_sigma->size() : 1;
    const std::size_t gm = c.grid_sampler ? c.grid_sampler->size() : 1;
    require(gn > 0, "sweep needs grid_n (or n)");
    require(gd > 0, "sweep needs grid_d (or d)");
    require(gs > 0 && gm > 0, "sweep grids must not be empty");
    require(gn * gd * gs * gm <= 10000, "sweep grid has more than 10^4 cells");
    if (c.grid_n)
      for (double v : *c.grid_n) require(is_positive_integer(v), "grid_n entries must be integers >= 1");
    else
      require(is_positive_integer(*c.n), "sweep needs an integer n >= 1");
    if (c.grid_d)
      for (auto v : *c.grid_d) require(v >= 1, "grid_d entries must be >= 1");
    if (c.grid_sigma)
      for (double v : *c.grid_sigma) require(v > 0.0 && std::isfinite(v), "grid_sigma entries must be positive");
    const auto trials = c.trials.value_or(0);
    require(trials == 0 || trials >= 1000, "sweep trials must be 0 (exact only) or >= 1000");
  } else {
    throw ConfigError("unknown command '" + std::string(command) + "'");
  }
}

}  // namespace sglb
