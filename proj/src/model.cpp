#include "sglb/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "sglb/errors.hpp"

namespace sglb {
namespace {

void check_dim(const char* what, std::size_t expected, std::size_t got) {
  if (expected != got) throw DimensionMismatch(what, expected, got);
}

void check_budget(double n, std::size_t d, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw PreconditionViolation("sigma must be positive and finite");
  if (d < 1) throw PreconditionViolation("dimension d must be at least 1");
  if (!(n > 0.0) || !std::isfinite(n))
    throw PreconditionViolation("query budget n must be positive and finite");
  // 4n >= sigma^2 d is the form that is exact for the boundary case.
  if (4.0 * n < sigma * sigma * static_cast<double>(d)) {
    std::ostringstream msg;
    msg << "n >= sigma^2 d / 4 violated (n = " << n << ", sigma^2 d / 4 = "
        << sigma * sigma * static_cast<double>(d) / 4.0
        << "); the lower-bound construction needs lambda <= 1/2";
    throw PreconditionViolation(msg.str());
  }
}

}  // namespace

IsotropicGaussianTarget::IsotropicGaussianTarget(Vector mean, double alpha)
    : mean_(std::move(mean)), alpha_(alpha) {
  if (mean_.empty()) throw PreconditionViolation("target dimension must be at least 1");
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_))
    throw PreconditionViolation("target alpha must be positive and finite");
}

Vector potential_grad(const IsotropicGaussianTarget& target, std::span<const double> y) {
  check_dim("potential_grad", target.dim(), y.size());
  Vector g(y.size());
  const auto& m = target.mean();
  for (std::size_t i = 0; i < y.size(); ++i) g[i] = target.alpha() * (y[i] - m[i]);
  return g;
}

double potential_value(const IsotropicGaussianTarget& target, std::span<const double> y) {
  check_dim("potential_value", target.dim(), y.size());
  return 0.5 * target.alpha() * squared_distance(y, target.mean());
}

LossSpec::LossSpec(double alpha, Vector target_mean)
    : alpha_(alpha), target_mean_(std::move(target_mean)) {
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_))
    throw PreconditionViolation("loss alpha must be positive and finite");
}

double loss_eval(const LossSpec& spec, std::span<const double> t) {
  check_dim("loss_eval", spec.target_mean().size(), t.size());
  return std::min(spec.alpha() * euclidean_distance(t, spec.target_mean()), 1.0);
}

double max_admissible_alpha(double n, std::size_t d, double sigma) {
  return sigma * sigma * static_cast<double>(d) / (256.0 * n);
}

HardInstancePair build_hard_instance(double n, std::size_t d, double sigma) {
  check_budget(n, d, sigma);
  return build_hard_instance(n, d, sigma, max_admissible_alpha(n, d, sigma));
}

HardInstancePair build_hard_instance(double n, std::size_t d, double sigma, double alpha) {
  check_budget(n, d, sigma);
  const double bound = max_admissible_alpha(n, d, sigma);
  if (!(alpha > 0.0) || alpha > bound) {
    std::ostringstream msg;
    msg << "alpha <= sigma^2 d / (256 n) violated (alpha = " << alpha << ", bound = " << bound << ")";
    throw PreconditionViolation(msg.str());
  }

  HardInstancePair pair;
  pair.n = n;
  pair.d = d;
  pair.sigma = sigma;
  pair.alpha = alpha;
  pair.lambda = std::min(sigma * std::sqrt(static_cast<double>(d) / n) / 4.0, 0.5);
  pair.m1.assign(d, 0.0);
  pair.m2.assign(d, 0.0);
  pair.m1[0] = pair.lambda / alpha;
  pair.m2[0] = -pair.lambda / alpha;

  // |m_theta| = lambda / alpha <= 1 / alpha since lambda <= 1/2.
  if (euclidean_norm(pair.m1) > 1.0 / alpha)
    throw PreconditionViolation("mean constraint |m_theta| <= 1/alpha violated");
  return pair;
}

double mean_separation(const HardInstancePair& pair) { return 2.0 * pair.lambda / pair.alpha; }

double squared_distance(std::span<const double> a, std::span<const double> b) {
  check_dim("squared_distance", a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

double euclidean_norm(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

}  // namespace sglb
