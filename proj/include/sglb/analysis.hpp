#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sglb/model.hpp"
#include "sglb/oracle.hpp"
#include "sglb/samplers.hpp"

namespace sglb {

// N(mean, diag(variance)).
struct DiagonalGaussian {
  Vector mean;
  Vector variance;

  std::size_t dim() const { return mean.size(); }
};

// Standard normal CDF, through erfc (absolute error well below 1e-15).
double normal_cdf(double x);

// KL(p | q) in nats for diagonal Gaussians with positive variances.
double gaussian_kl(const DiagonalGaussian& p, const DiagonalGaussian& q);

// KL between N(m1, C) and N(m2, C) with a possibly singular diagonal C,
// using the pseudo-inverse. Coordinates with zero variance contribute 0 when
// the means agree there and throw AbsoluteContinuityError otherwise.
double gaussian_kl_same_cov(std::span<const double> m1, std::span<const double> m2,
                            std::span<const double> variance);

// TV(N(m1, C), N(m2, C)) = 2 Phi(|C^{-1/2}(m2 - m1)| / 2) - 1 for diagonal C.
double gaussian_tv_same_cov(std::span<const double> m1, std::span<const double> m2,
                            std::span<const double> variance);

// TV between two one-dimensional Gaussians with arbitrary variances.
double gaussian_tv_1d(double mean1, double var1, double mean2, double var2);

// Exact TV between diagonal Gaussians whose coordinates 2..d share one
// variance per law and agree in mean across the two laws (the structure of
// every law produced by the hard instance and the isotropic targets). The
// remaining coordinates are reduced to their squared radius, whose scaled
// chi-square CDF is closed form; the first coordinate is integrated by
// adaptive Gauss-Kronrod. Throws PreconditionViolation for other structures.
double gaussian_tv(const DiagonalGaussian& p, const DiagonalGaussian& q);

// 2 lambda^2 / (sigma^2 d): KL between the oracle answers under the two
// hypotheses at any query point.
double per_query_kl(const HardInstancePair& pair);

// n * per_query_kl. For this instance the chain-rule bound is attained by
// every algorithm since grad f1 - grad f2 does not depend on the query.
double transcript_kl_bound(double n, const HardInstancePair& pair);

// min(sqrt(kl / 2), 1). Throws PreconditionViolation on negative input.
double pinsker_tv_bound(double kl);

// lambda (1 - lambda sqrt(n) / (sigma sqrt(d))), floored at 0.
double psi1_lower(const HardInstancePair& pair, double n);

// sqrt(alpha).
double psi2_upper(double alpha);

struct MinimaxBound {
  double floor = 0.0;         // (sigma / 16) sqrt(d / n)
  double intermediate = 0.0;  // (3 sigma / 16) sqrt(d / n) - sqrt(alpha)
  double alpha = 0.0;
};

// Throws PreconditionViolation unless n >= sigma^2 d / 4 (and alpha within
// its bound when given).
MinimaxBound minimax_lower_bound(double n, std::size_t d, double sigma,
                                 std::optional<double> alpha = std::nullopt);

struct BoundReport {
  double n = 0.0;
  std::size_t d = 0;
  double sigma = 0.0;
  double alpha = 0.0;
  double lambda = 0.0;
  double per_query_kl = 0.0;
  double transcript_kl_bound = 0.0;
  double tv_bound = 0.0;
  double psi1_lower = 0.0;
  double psi2_upper = 0.0;
  double minimax_lower = 0.0;
  double minimax_intermediate = 0.0;
};

BoundReport make_bound_report(double n, std::size_t d, double sigma,
                              std::optional<double> alpha = std::nullopt);

// Log-likelihood ratio log dP/dQ of a transcript under two oracles. Sampler
// kernels cancel, leaving the sum of oracle log-density ratios.
double transcript_log_likelihood_ratio(const Transcript& transcript, const GradientOracle& p,
                                       const GradientOracle& q);

struct LawPropagation {
  std::vector<DiagonalGaussian> laws;  // laws[t] is the law of y_t, t = 0..n
  bool unstable = false;               // some step had |1 - eta alpha| >= 1
};

// Exact law of a Langevin chain on an isotropic quadratic target with
// diagonal Gaussian oracle noise:
//   mu_{t+1} = (1 - eta_t alpha) mu_t + eta_t alpha m
//   C_{t+1}  = (1 - eta_t alpha)^2 C_t + eta_t^2 Sigma_noise + 2 eta_t
LawPropagation ula_law_propagate(const IsotropicGaussianTarget& target,
                                 std::span<const double> noise_variance,
                                 const StepSchedule& schedule, std::size_t n,
                                 const DiagonalGaussian& init);

// Output law of a shipped sampler after n rounds against `oracle`, when it is
// Gaussian and known in closed form; nullopt for other samplers.
std::optional<DiagonalGaussian> exact_output_law(const Sampler& sampler, const GradientOracle& oracle,
                                                 std::size_t n);

}  // namespace sglb
