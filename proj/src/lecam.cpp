#include "sglb/lecam.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "parallel.hpp"
#include "sglb/errors.hpp"

namespace sglb {
namespace {

Hypothesis stratified_theta(std::size_t trial) {
  return trial % 2 == 0 ? Hypothesis::One : Hypothesis::Two;
}

std::size_t theta_index(Hypothesis theta) { return theta == Hypothesis::One ? 0 : 1; }

struct TrialOutcome {
  Hypothesis theta = Hypothesis::One;
  Vector decision;
};

// Runs the protocol once per trial and returns the estimator's decisions.
std::vector<TrialOutcome> run_trials(const Sampler& sampler, const EstimatorSpec& estimator,
                                     const HardInstancePair& pair, std::size_t n,
                                     std::size_t trials, std::uint64_t seed, NoiseKind noise) {
  const std::array<GradientOracle, 2> oracles{
      GradientOracle(pair.target(Hypothesis::One), noise, pair.sigma),
      GradientOracle(pair.target(Hypothesis::Two), noise, pair.sigma)};
  std::vector<TrialOutcome> out(trials);
  detail::parallel_for(trials, [&](std::size_t i) {
    const Hypothesis theta = stratified_theta(i);
    Transcript t = run_protocol(sampler, oracles[theta_index(theta)], n, derive_seed(seed, "trial", i));
    t.theta = theta;
    out[i] = {theta, estimator.apply(t)};
  });
  return out;
}

RiskEstimate summarize_losses(std::span<const double> losses, std::span<const Hypothesis> thetas) {
  RiskEstimate r;
  r.trials = losses.size();
  const double n = static_cast<double>(losses.size());
  std::array<double, 2> sum{};
  std::array<std::size_t, 2> count{};
  double total = 0.0;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    total += losses[i];
    sum[theta_index(thetas[i])] += losses[i];
    ++count[theta_index(thetas[i])];
  }
  r.mean = total / n;
  double ss = 0.0;
  for (double l : losses) ss += (l - r.mean) * (l - r.mean);
  r.std_error = losses.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  r.ci_half_width = hoeffding_half_width(losses.size());
  for (std::size_t k = 0; k < 2; ++k)
    r.mean_per_theta[k] = count[k] ? sum[k] / static_cast<double>(count[k]) : 0.0;
  return r;
}

}  // namespace

Hypothesis nearest_mean_test(std::span<const double> t, std::span<const double> m1,
                             std::span<const double> m2) {
  if (m1.size() != t.size()) throw DimensionMismatch("nearest_mean_test m1", t.size(), m1.size());
  if (m2.size() != t.size()) throw DimensionMismatch("nearest_mean_test m2", t.size(), m2.size());
  return squared_distance(t, m1) <= squared_distance(t, m2) ? Hypothesis::One : Hypothesis::Two;
}

Vector first_coord_estimator(std::span<const double> x) {
  if (x.empty()) throw PreconditionViolation("first_coord_estimator: empty sample");
  Vector t(x.size(), 0.0);
  t[0] = x[0];
  return t;
}

Vector EstimatorSpec::apply(const Transcript& transcript) const {
  switch (kind) {
    case Kind::FirstCoordinateOfSample: return first_coord_estimator(transcript.sample);
    case Kind::BaselineMeanEstimate:
      if (!transcript.estimate)
        throw PreconditionViolation("estimator baseline_mean needs a sampler that reports a mean estimate");
      return *transcript.estimate;
    case Kind::Custom:
      if (!custom) throw PreconditionViolation("custom estimator has no function");
      return custom(transcript);
  }
  return {};
}

std::string_view to_string(EstimatorSpec::Kind kind) {
  switch (kind) {
    case EstimatorSpec::Kind::FirstCoordinateOfSample: return "first_coordinate";
    case EstimatorSpec::Kind::BaselineMeanEstimate: return "baseline_mean";
    case EstimatorSpec::Kind::Custom: return "custom";
  }
  return "unknown";
}

EstimatorSpec parse_estimator(std::string_view name) {
  if (name == "first_coordinate") return EstimatorSpec::first_coordinate();
  if (name == "baseline_mean") return EstimatorSpec::baseline_mean();
  throw ConfigError("unknown estimator '" + std::string(name) +
                    "' (expected first_coordinate or baseline_mean)");
}

double hoeffding_half_width(std::size_t trials, double delta) {
  if (trials == 0) throw PreconditionViolation("hoeffding_half_width: no trials");
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(trials)));
}

RiskEstimate estimate_psi2(const HardInstancePair& pair, std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw PreconditionViolation("estimate_psi2 needs trials >= 1");
  Rng rng(derive_seed(seed, "psi2"));
  const double sd = 1.0 / std::sqrt(pair.alpha);
  std::vector<double> losses(trials);
  std::vector<Hypothesis> thetas(trials);
  Vector x(pair.d);
  for (std::size_t i = 0; i < trials; ++i) {
    const Hypothesis theta = stratified_theta(i);
    const Vector& m = pair.mean(theta);
    for (std::size_t j = 0; j < pair.d; ++j) x[j] = m[j] + sd * rng.normal();
    losses[i] = loss_eval(pair.loss(theta), first_coord_estimator(x));
    thetas[i] = theta;
  }
  return summarize_losses(losses, thetas);
}

TwoPointResult run_two_point_experiment(const Sampler& sampler, const EstimatorSpec& estimator,
                                        const HardInstancePair& pair, std::size_t n,
                                        std::size_t trials, std::uint64_t seed, NoiseKind noise) {
  if (trials < 100) throw PreconditionViolation("run_two_point_experiment needs trials >= 100");
  const auto outcomes = run_trials(sampler, estimator, pair, n, trials, seed, noise);

  TwoPointResult r;
  r.trials = trials;
  for (const auto& o : outcomes) {
    const std::size_t k = theta_index(o.theta);
    ++r.trials_per_theta[k];
    if (nearest_mean_test(o.decision, pair.m1, pair.m2) != o.theta) {
      ++r.errors_per_theta[k];
      ++r.error_count;
    }
  }
  const double t = static_cast<double>(trials);
  r.error_rate = static_cast<double>(r.error_count) / t;
  r.std_error = std::sqrt(r.error_rate * (1.0 - r.error_rate) / t);
  r.ci_half_width = hoeffding_half_width(trials);
  r.tv_bound = pinsker_tv_bound(transcript_kl_bound(static_cast<double>(n), pair));
  r.theoretical_floor = std::max((1.0 - r.tv_bound) / 2.0, 0.0);
  return r;
}

RiskEstimate estimate_psi1_hat(const Sampler& sampler, const EstimatorSpec& estimator,
                               const HardInstancePair& pair, std::size_t n, std::size_t trials,
                               std::uint64_t seed, NoiseKind noise) {
  if (trials < 100) throw PreconditionViolation("estimate_psi1_hat needs trials >= 100");
  const auto outcomes = run_trials(sampler, estimator, pair, n, trials, seed, noise);
  std::vector<double> losses(trials);
  std::vector<Hypothesis> thetas(trials);
  for (std::size_t i = 0; i < trials; ++i) {
    losses[i] = loss_eval(pair.loss(outcomes[i].theta), outcomes[i].decision);
    thetas[i] = outcomes[i].theta;
  }
  return summarize_losses(losses, thetas);
}

EmpiricalTvBound empirical_tv_lower_bound(std::span<const Vector> samples,
                                          const IsotropicGaussianTarget& target, std::size_t bins,
                                          double delta) {
  if (samples.size() < 1000)
    throw PreconditionViolation("empirical_tv_lower_bound needs at least 1000 samples, got " +
                                std::to_string(samples.size()));
  if (bins < 2) throw PreconditionViolation("empirical_tv_lower_bound needs at least 2 bins");

  std::vector<double> x(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].size() != target.dim())
      throw DimensionMismatch("empirical_tv_lower_bound sample", target.dim(), samples[i].size());
    x[i] = samples[i][0];
  }
  std::sort(x.begin(), x.end());

  const double n = static_cast<double>(x.size());
  const boost::math::normal_distribution<double> marginal(target.mean()[0], std::sqrt(target.variance()));
  auto empirical_cdf = [&](double e) {
    return static_cast<double>(std::upper_bound(x.begin(), x.end(), e) - x.begin()) / n;
  };

  // D = F_hat - F at the bin edges, at the sample extremes, and 0 at +-inf.
  std::vector<double> discrepancy{0.0};
  double binned = 0.0;
  double prev_cdf = 0.0;
  for (std::size_t i = 1; i < bins; ++i) {
    const double p = static_cast<double>(i) / static_cast<double>(bins);
    const double edge = boost::math::quantile(marginal, p);
    const double fhat = empirical_cdf(edge);
    discrepancy.push_back(fhat - p);
    binned += std::abs((fhat - prev_cdf) - 1.0 / static_cast<double>(bins));
    prev_cdf = fhat;
  }
  binned += std::abs((1.0 - prev_cdf) - 1.0 / static_cast<double>(bins));
  discrepancy.push_back(0.0 - boost::math::cdf(marginal, x.front()));
  discrepancy.push_back(1.0 - boost::math::cdf(marginal, x.back()));

  const auto [lo, hi] = std::minmax_element(discrepancy.begin(), discrepancy.end());
  const double half_line = std::max(std::abs(*lo), std::abs(*hi));
  const double interval = *hi - *lo;

  EmpiricalTvBound r;
  r.samples = x.size();
  r.bins = bins;
  r.correction = std::sqrt(std::log(2.0 / delta) / (2.0 * n));
  r.binned_tv = 0.5 * binned;
  r.discrepancy = std::max(half_line, interval);
  r.lower_bound = std::clamp(std::max(half_line - r.correction, interval - 2.0 * r.correction), 0.0, 1.0);
  return r;
}

GapReport randomization_gap_report(const Sampler& sampler, const EstimatorSpec& estimator,
                                   const HardInstancePair& pair, std::size_t n, std::size_t trials,
                                   std::uint64_t seed, NoiseKind noise) {
  if (estimator.kind != EstimatorSpec::Kind::FirstCoordinateOfSample)
    throw PreconditionViolation(
        "randomization_gap_report compares one decision rule on sampler output and on a true draw; "
        "use the first_coordinate estimator");

  GapReport r;
  r.psi1_hat = estimate_psi1_hat(sampler, estimator, pair, n, trials, seed, noise);
  r.psi2_hat = estimate_psi2(pair, trials, derive_seed(seed, "gap-psi2"));
  r.gap = r.psi1_hat.mean - r.psi2_hat.mean;
  r.tolerance = 3.0 * std::hypot(r.psi1_hat.std_error, r.psi2_hat.std_error);

  bool exact = true;
  for (Hypothesis theta : {Hypothesis::One, Hypothesis::Two}) {
    const GradientOracle oracle(pair.target(theta), noise, pair.sigma);
    const auto law = exact_output_law(sampler, oracle, n);
    if (!law) {
      exact = false;
      break;
    }
    const DiagonalGaussian target{pair.mean(theta), Vector(pair.d, 1.0 / pair.alpha)};
    r.tv_per_theta[theta_index(theta)] = gaussian_tv(*law, target);
  }

  if (exact) {
    r.tv_method = "exact";
    r.sup_tv = std::max(r.tv_per_theta[0], r.tv_per_theta[1]);
    r.holds = r.sup_tv >= r.gap - r.tolerance;
    r.conclusive = true;
    r.note = "psi1_hat is the risk of one sequential estimator; the infimum over algorithms is not computed";
    return r;
  }

  r.tv_method = "empirical_lower_bound";
  const std::size_t per_theta = trials / 2;
  if (per_theta < 1000)
    throw PreconditionViolation("empirical TV fallback needs trials >= 2000");
  for (Hypothesis theta : {Hypothesis::One, Hypothesis::Two}) {
    const GradientOracle oracle(pair.target(theta), noise, pair.sigma);
    std::vector<Vector> samples(per_theta);
    detail::parallel_for(per_theta, [&](std::size_t i) {
      samples[i] = run_protocol(sampler, oracle, n,
                                derive_seed(seed, theta == Hypothesis::One ? "tv-sample-1" : "tv-sample-2", i))
                       .sample;
    });
    r.tv_per_theta[theta_index(theta)] = empirical_tv_lower_bound(samples, pair.target(theta)).lower_bound;
  }
  r.sup_tv = std::max(r.tv_per_theta[0], r.tv_per_theta[1]);
  r.holds = r.sup_tv >= r.gap - r.tolerance;
  r.conclusive = false;
  r.note = "one-sided, not conclusive: only a TV lower bound is available for this sampler";
  return r;
}

}  // namespace sglb
