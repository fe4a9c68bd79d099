#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sglb {

using Vector = std::vector<double>;

// Label of one of the two hypotheses of the hard instance.
enum class Hypothesis : int { One = 1, Two = 2 };

// p = N(mean, I/alpha). The potential f(y) = alpha/2 |y - mean|^2 is
// alpha-smooth and alpha-strongly convex; the covariance is never stored.
class IsotropicGaussianTarget {
 public:
  IsotropicGaussianTarget(Vector mean, double alpha);

  std::size_t dim() const { return mean_.size(); }
  const Vector& mean() const { return mean_; }
  double alpha() const { return alpha_; }
  double variance() const { return 1.0 / alpha_; }

 private:
  Vector mean_;
  double alpha_;
};

// Gradient of the potential, alpha (y - mean).
Vector potential_grad(const IsotropicGaussianTarget& target, std::span<const double> y);

// alpha |y - mean|^2 / 2.
double potential_value(const IsotropicGaussianTarget& target, std::span<const double> y);

// Bounded loss L(t) = min(alpha |t - target_mean|_2, 1).
class LossSpec {
 public:
  LossSpec(double alpha, Vector target_mean);

  double alpha() const { return alpha_; }
  const Vector& target_mean() const { return target_mean_; }

 private:
  double alpha_;
  Vector target_mean_;
};

double loss_eval(const LossSpec& spec, std::span<const double> t);

// The two-point family N(+-(lambda/alpha) e1, I/alpha) together with the
// oracle parameters it was built for. `n` is a query budget and may be
// fractional when only the closed-form quantities are of interest.
struct HardInstancePair {
  double n = 0.0;
  std::size_t d = 0;
  double sigma = 0.0;
  double lambda = 0.0;
  double alpha = 0.0;
  Vector m1;
  Vector m2;

  const Vector& mean(Hypothesis theta) const { return theta == Hypothesis::One ? m1 : m2; }
  IsotropicGaussianTarget target(Hypothesis theta) const { return {mean(theta), alpha}; }
  LossSpec loss(Hypothesis theta) const { return {alpha, mean(theta)}; }
};

// Largest smoothness allowed by the lower bound, sigma^2 d / (256 n).
double max_admissible_alpha(double n, std::size_t d, double sigma);

// Canonical instance: lambda = sigma sqrt(d) / (4 sqrt(n)), alpha = sigma^2 d / (256 n).
// Throws PreconditionViolation unless n >= sigma^2 d / 4.
HardInstancePair build_hard_instance(double n, std::size_t d, double sigma);

// Same construction with an explicit alpha in (0, sigma^2 d / (256 n)].
HardInstancePair build_hard_instance(double n, std::size_t d, double sigma, double alpha);

// 2 lambda / alpha.
double mean_separation(const HardInstancePair& pair);

// Euclidean helpers shared by the modules.
double squared_distance(std::span<const double> a, std::span<const double> b);
double euclidean_distance(std::span<const double> a, std::span<const double> b);
double euclidean_norm(std::span<const double> a);

}  // namespace sglb
