#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "sglb/oracle.hpp"

namespace sglb {

// Step sizes eta_t for Langevin updates, t = 0, 1, ... counting oracle calls.
//   Constant         eta_t = base
//   InverseTime      eta_t = base / (t + 1)
//   SqrtBudget       eta_t = 1 / (alpha * max(sqrt(n), 2))  (SGLD default)
struct StepSchedule {
  enum class Kind { Constant, InverseTime, SqrtBudget };
  Kind kind = Kind::Constant;
  double base = 0.0;   // eta for Constant, c for InverseTime
  double alpha = 0.0;  // SqrtBudget only

  static StepSchedule constant(double eta);
  static StepSchedule inverse_time(double c);
  static StepSchedule sqrt_budget(double alpha);

  double at(std::size_t t, std::size_t budget) const;
};

std::string_view to_string(StepSchedule::Kind kind);

// y - eta z + sqrt(2 eta) w with w ~ N(0, I) drawn from `rng`.
Vector ula_step(std::span<const double> y, std::span<const double> z, double eta, Rng& rng);

// Unadjusted Langevin with a step schedule. ULA is the constant-schedule
// case and SGLD is the same update driven by stochastic gradients; both query
// the oracle at the current iterate.
class LangevinSampler final : public Sampler {
 public:
  LangevinSampler(std::string name, StepSchedule schedule, InitialLaw init);

  std::string_view name() const override { return name_; }
  Vector initial_point(std::size_t dim, Rng& rng) const override;
  Vector next_point(const History& history, Rng& rng) const override;

  const StepSchedule& schedule() const { return schedule_; }
  const InitialLaw& initial_law() const { return init_; }

 private:
  std::string name_;
  StepSchedule schedule_;
  InitialLaw init_;
};

// Constant-step ULA; eta must be positive.
LangevinSampler make_ula(double eta, InitialLaw init = InitialLaw::origin());

struct SgldConfig {
  StepSchedule schedule;
  InitialLaw init = InitialLaw::origin();

  // eta_t = 1 / (alpha * max(sqrt(n), 2)) with point-mass start at 0.
  static SgldConfig defaults(double alpha);
};

LangevinSampler make_sgld(const SgldConfig& config);

Vector run_sgld(const GradientOracle& oracle, std::size_t n, const SgldConfig& config,
                std::uint64_t seed);

// Queries the origin n times, estimates the mean from the averaged responses,
//   m_hat = -(mean z) / alpha,
// and returns a draw from N(m_hat, I/alpha). Reports m_hat as its estimate.
class AveragingBaseline final : public Sampler {
 public:
  explicit AveragingBaseline(double alpha);

  std::string_view name() const override { return "baseline"; }
  Vector initial_point(std::size_t dim, Rng& rng) const override;
  Vector next_point(const History& history, Rng& rng) const override;
  std::optional<Vector> estimate(const History& history) const override;

  double alpha() const { return alpha_; }

 private:
  double alpha_;
};

struct BaselineOutput {
  Vector sample;
  Vector mean_estimate;
};

BaselineOutput averaging_baseline(const GradientOracle& oracle, std::size_t n, double alpha,
                                  std::uint64_t seed);

}  // namespace sglb
