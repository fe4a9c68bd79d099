#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "sglb/analysis.hpp"
#include "sglb/model.hpp"
#include "sglb/oracle.hpp"

namespace sglb {

// argmin_j |t - m_j|_2; ties go to Hypothesis::One.
Hypothesis nearest_mean_test(std::span<const double> t, std::span<const double> m1,
                             std::span<const double> m2);

// (x_1, 0, ..., 0).
Vector first_coord_estimator(std::span<const double> x);

// Maps a finished transcript to a decision vector t in R^d.
struct EstimatorSpec {
  enum class Kind { FirstCoordinateOfSample, BaselineMeanEstimate, Custom };
  Kind kind = Kind::FirstCoordinateOfSample;
  std::function<Vector(const Transcript&)> custom;

  static EstimatorSpec first_coordinate() { return {}; }
  static EstimatorSpec baseline_mean() { return {Kind::BaselineMeanEstimate, {}}; }
  static EstimatorSpec from_function(std::function<Vector(const Transcript&)> f) {
    return {Kind::Custom, std::move(f)};
  }

  Vector apply(const Transcript& transcript) const;
};

std::string_view to_string(EstimatorSpec::Kind kind);
EstimatorSpec parse_estimator(std::string_view name);

// Two-sided 95% Hoeffding half-width sqrt(ln(2/delta) / (2 trials)) for
// averages of [0, 1] variables.
double hoeffding_half_width(std::size_t trials, double delta = 0.05);

struct RiskEstimate {
  std::size_t trials = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double ci_half_width = 0.0;  // Hoeffding, 95%
  std::array<double, 2> mean_per_theta{};

  bool operator==(const RiskEstimate&) const = default;
};

struct TwoPointResult {
  std::size_t trials = 0;
  std::size_t error_count = 0;
  double error_rate = 0.0;
  double std_error = 0.0;
  double ci_half_width = 0.0;
  std::string ci_method = "hoeffding";
  double tv_bound = 0.0;           // Pinsker bound on TV(P^1_n, P^2_n)
  double theoretical_floor = 0.0;  // (1 - tv_bound) / 2
  bool stratified = true;
  std::array<std::size_t, 2> trials_per_theta{};
  std::array<std::size_t, 2> errors_per_theta{};

  bool operator==(const TwoPointResult&) const = default;
};

// Draws x ~ p_theta (theta stratified), applies the first-coordinate
// estimator and averages L_theta. Requires trials >= 1.
RiskEstimate estimate_psi2(const HardInstancePair& pair, std::size_t trials, std::uint64_t seed);

// Le Cam two-point experiment: per trial, theta alternates 1, 2, 1, ...
// (exactly trials/2 each, rounded up for theta = 1), the protocol runs
// against Q^theta, and the nearest-mean test is applied to the estimator's
// decision. Requires trials >= 100.
TwoPointResult run_two_point_experiment(const Sampler& sampler, const EstimatorSpec& estimator,
                                        const HardInstancePair& pair, std::size_t n,
                                        std::size_t trials, std::uint64_t seed,
                                        NoiseKind noise = NoiseKind::FirstCoordinate);

// Average of L_theta(t) over stratified trials: the risk of one sequential
// estimator, to be read next to psi1_lower.
RiskEstimate estimate_psi1_hat(const Sampler& sampler, const EstimatorSpec& estimator,
                               const HardInstancePair& pair, std::size_t n, std::size_t trials,
                               std::uint64_t seed, NoiseKind noise = NoiseKind::FirstCoordinate);

struct EmpiricalTvBound {
  double lower_bound = 0.0;  // holds with probability >= 1 - delta
  double discrepancy = 0.0;  // best half-line / interval discrepancy before correction
  double correction = 0.0;   // DKW epsilon sqrt(ln(2/delta) / (2N))
  double binned_tv = 0.0;    // histogram L1/2, diagnostic only (biased upwards)
  std::size_t samples = 0;
  std::size_t bins = 0;
};

// One-sided lower bound on TV(law of samples, target). Discrepancies
// F_hat - F of the first-coordinate marginal are evaluated at the edges of
// `bins` equal-probability bins of the target marginal and at the sample
// extremes; a half-line discrepancy loses epsilon and an interval loses
// 2 epsilon on the DKW event. Requires at least 1000 samples.
EmpiricalTvBound empirical_tv_lower_bound(std::span<const Vector> samples,
                                          const IsotropicGaussianTarget& target,
                                          std::size_t bins = 128, double delta = 0.05);

struct GapReport {
  RiskEstimate psi1_hat;
  RiskEstimate psi2_hat;
  double gap = 0.0;        // psi1_hat - psi2_hat
  double tolerance = 0.0;  // 3 sqrt(se1^2 + se2^2)
  std::string tv_method;   // "exact" or "empirical_lower_bound"
  double sup_tv = 0.0;     // exact sup_theta TV, or the empirical lower bound
  std::array<double, 2> tv_per_theta{};
  bool holds = false;       // sup_tv >= gap - tolerance
  bool conclusive = false;  // false whenever only an empirical lower bound is available
  std::string note;
};

// Checks the randomization criterion sup_theta TV(Alg[n; Q^theta], p_theta)
// >= psi1_hat - psi2_hat for the estimator applied to the sampler output
// versus the same estimator applied to a true draw. The estimator must be
// FirstCoordinateOfSample so that both risks use one decision rule.
GapReport randomization_gap_report(const Sampler& sampler, const EstimatorSpec& estimator,
                                   const HardInstancePair& pair, std::size_t n, std::size_t trials,
                                   std::uint64_t seed, NoiseKind noise = NoiseKind::FirstCoordinate);

}  // namespace sglb
