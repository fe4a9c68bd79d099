#include "sglb/samplers.hpp"

#include <algorithm>
#include <cmath>

#include "sglb/errors.hpp"

namespace sglb {

StepSchedule StepSchedule::constant(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw PreconditionViolation("step size eta must be positive");
  return {Kind::Constant, eta, 0.0};
}

StepSchedule StepSchedule::inverse_time(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw PreconditionViolation("step scale c must be positive");
  return {Kind::InverseTime, c, 0.0};
}

StepSchedule StepSchedule::sqrt_budget(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw PreconditionViolation("schedule alpha must be positive");
  return {Kind::SqrtBudget, 0.0, alpha};
}

double StepSchedule::at(std::size_t t, std::size_t budget) const {
  switch (kind) {
    case Kind::Constant: return base;
    case Kind::InverseTime: return base / static_cast<double>(t + 1);
    case Kind::SqrtBudget:
      return 1.0 / (alpha * std::max(std::sqrt(static_cast<double>(budget)), 2.0));
  }
  return base;
}

std::string_view to_string(StepSchedule::Kind kind) {
  switch (kind) {
    case StepSchedule::Kind::Constant: return "constant";
    case StepSchedule::Kind::InverseTime: return "inverse_time";
    case StepSchedule::Kind::SqrtBudget: return "default";
  }
  return "unknown";
}

Vector ula_step(std::span<const double> y, std::span<const double> z, double eta, Rng& rng) {
  if (y.size() != z.size()) throw DimensionMismatch("ula_step gradient", y.size(), z.size());
  if (!(eta > 0.0)) throw PreconditionViolation("ula_step: eta must be positive");
  const double scale = std::sqrt(2.0 * eta);
  Vector out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] - eta * z[i] + scale * rng.normal();
  return out;
}

LangevinSampler::LangevinSampler(std::string name, StepSchedule schedule, InitialLaw init)
    : name_(std::move(name)), schedule_(schedule), init_(init) {
  if (init_.kind == InitialLaw::Kind::Gaussian && !(init_.variance > 0.0))
    throw PreconditionViolation("Gaussian initial law needs positive variance");
}

Vector LangevinSampler::initial_point(std::size_t dim, Rng& rng) const { return init_.draw(dim, rng); }

Vector LangevinSampler::next_point(const History& history, Rng& rng) const {
  const std::size_t t = history.round() - 1;
  return ula_step(history.query(t), history.response(t), schedule_.at(t, history.budget()), rng);
}

LangevinSampler make_ula(double eta, InitialLaw init) {
  return LangevinSampler("ula", StepSchedule::constant(eta), init);
}

SgldConfig SgldConfig::defaults(double alpha) { return {StepSchedule::sqrt_budget(alpha), InitialLaw::origin()}; }

LangevinSampler make_sgld(const SgldConfig& config) {
  return LangevinSampler("sgld", config.schedule, config.init);
}

Vector run_sgld(const GradientOracle& oracle, std::size_t n, const SgldConfig& config,
                std::uint64_t seed) {
  if (n < 1) throw PreconditionViolation("run_sgld needs n >= 1");
  return run_protocol(make_sgld(config), oracle, n, seed).sample;
}

AveragingBaseline::AveragingBaseline(double alpha) : alpha_(alpha) {
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_))
    throw PreconditionViolation("baseline alpha must be positive");
}

Vector AveragingBaseline::initial_point(std::size_t dim, Rng&) const { return Vector(dim, 0.0); }

Vector AveragingBaseline::next_point(const History& history, Rng& rng) const {
  if (!history.final()) return Vector(history.dim(), 0.0);
  Vector x = *estimate(history);
  const double sd = 1.0 / std::sqrt(alpha_);
  for (double& v : x) v += sd * rng.normal();
  return x;
}

std::optional<Vector> AveragingBaseline::estimate(const History& history) const {
  if (history.round() == 0) return std::nullopt;
  Vector m(history.dim(), 0.0);
  for (const Vector& z : history.responses())
    for (std::size_t j = 0; j < m.size(); ++j) m[j] += z[j];
  const double scale = -1.0 / (alpha_ * static_cast<double>(history.round()));
  for (double& v : m) v *= scale;
  return m;
}

BaselineOutput averaging_baseline(const GradientOracle& oracle, std::size_t n, double alpha,
                                  std::uint64_t seed) {
  if (n < 1) throw PreconditionViolation("averaging_baseline needs n >= 1");
  auto t = run_protocol(AveragingBaseline(alpha), oracle, n, seed);
  return {std::move(t.sample), std::move(*t.estimate)};
}

}  // namespace sglb
