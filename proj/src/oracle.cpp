#include "sglb/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "sglb/errors.hpp"

namespace sglb {

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::Exact: return "exact";
    case NoiseKind::IsotropicGaussian: return "isotropic";
    case NoiseKind::FirstCoordinate: return "first_coordinate";
  }
  return "unknown";
}

NoiseKind parse_noise_kind(std::string_view name) {
  if (name == "exact") return NoiseKind::Exact;
  if (name == "isotropic") return NoiseKind::IsotropicGaussian;
  if (name == "first_coordinate") return NoiseKind::FirstCoordinate;
  throw ConfigError("unknown noise kind '" + std::string(name) +
                    "' (expected exact, isotropic or first_coordinate)");
}

GradientOracle::GradientOracle(IsotropicGaussianTarget target, NoiseKind kind, double sigma)
    : target_(std::move(target)), kind_(kind), sigma_(sigma) {
  if (!(sigma_ >= 0.0) || !std::isfinite(sigma_))
    throw PreconditionViolation("oracle sigma must be non-negative and finite");
  const auto check = validate_oracle(noise_variances(), sigma_, dim());
  if (!check.ok) throw PreconditionViolation("invalid oracle: " + check.reason);
}

Vector GradientOracle::noise_variances() const {
  Vector v(dim(), 0.0);
  const double s2 = sigma_ * sigma_;
  switch (kind_) {
    case NoiseKind::Exact: break;
    case NoiseKind::IsotropicGaussian: v.assign(dim(), s2); break;
    case NoiseKind::FirstCoordinate: v[0] = s2 * static_cast<double>(dim()); break;
  }
  return v;
}

Vector GradientOracle::query(std::span<const double> y, Rng& rng) const {
  Vector z = potential_grad(target_, y);
  switch (kind_) {
    case NoiseKind::Exact: break;
    case NoiseKind::IsotropicGaussian:
      for (double& zi : z) zi += sigma_ * rng.normal();
      break;
    case NoiseKind::FirstCoordinate:
      z[0] += sigma_ * std::sqrt(static_cast<double>(dim())) * rng.normal();
      break;
  }
  return z;
}

OracleCheck validate_oracle(std::span<const double> noise_diagonal, double sigma, std::size_t d) {
  if (noise_diagonal.size() != d) {
    std::ostringstream msg;
    msg << "noise covariance has dimension " << noise_diagonal.size() << ", expected " << d;
    return {false, msg.str()};
  }
  double trace = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double v = noise_diagonal[i];
    if (!std::isfinite(v) || v < 0.0) {
      std::ostringstream msg;
      msg << "noise covariance not positive semidefinite (entry " << i << " = " << v << ")";
      return {false, msg.str()};
    }
    trace += v;
  }
  const double budget = sigma * sigma * static_cast<double>(d);
  // Relative slack of a few ulps so that sigma^2 d itself is accepted.
  if (trace > budget * (1.0 + 8.0 * std::numeric_limits<double>::epsilon())) {
    std::ostringstream msg;
    msg << "noise trace " << trace << " exceeds variance budget sigma^2 d = " << budget;
    return {false, msg.str()};
  }
  return {};
}

Vector InitialLaw::draw(std::size_t dim, Rng& rng) const {
  Vector y(dim, 0.0);
  if (kind == Kind::Gaussian) {
    const double sd = std::sqrt(variance);
    for (double& v : y) v = sd * rng.normal();
  }
  return y;
}

Transcript run_protocol(const Sampler& sampler, const GradientOracle& oracle, std::size_t n,
                        std::uint64_t seed) {
  Rng sampler_rng(derive_seed(seed, "sampler"));
  Rng oracle_rng(derive_seed(seed, "oracle"));
  const std::size_t d = oracle.dim();

  Transcript t;
  t.seed = seed;
  t.queries.reserve(n);
  t.responses.reserve(n);

  Vector y = sampler.initial_point(d, sampler_rng);
  if (y.size() != d) throw DimensionMismatch("sampler initial point", d, y.size());
  for (std::size_t i = 0; i < n; ++i) {
    t.responses.push_back(oracle.query(y, oracle_rng));
    t.queries.push_back(std::move(y));
    const History history(t.queries, t.responses, n, d);
    y = sampler.next_point(history, sampler_rng);
    if (y.size() != d) throw DimensionMismatch("sampler step", d, y.size());
  }
  t.sample = std::move(y);
  t.estimate = sampler.estimate(History(t.queries, t.responses, n, d));
  return t;
}

void write_transcript_csv(std::ostream& os, const Transcript& transcript) {
  const std::size_t d = transcript.sample.size();
  os << "round";
  for (std::size_t j = 1; j <= d; ++j) os << ",y_" << j;
  for (std::size_t j = 1; j <= d; ++j) os << ",z_" << j;
  os << '\n';
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << ',' << buf;
  };
  for (std::size_t i = 0; i < transcript.rounds(); ++i) {
    os << i;
    for (double v : transcript.queries[i]) put(v);
    for (double v : transcript.responses[i]) put(v);
    os << '\n';
  }
  os << transcript.rounds();
  for (double v : transcript.sample) put(v);
  for (std::size_t j = 0; j < d; ++j) os << ',';
  os << '\n';
}

}  // namespace sglb
