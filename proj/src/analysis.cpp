#include "sglb/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "sglb/errors.hpp"

namespace sglb {
namespace {

void check_same_dim(const char* what, std::size_t a, std::size_t b) {
  if (a != b) throw DimensionMismatch(what, a, b);
}

void check_diagonal(const DiagonalGaussian& g, const char* what) {
  check_same_dim(what, g.mean.size(), g.variance.size());
  for (double v : g.variance)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw PreconditionViolation(std::string(what) + ": variances must be finite and non-negative");
}

double log_normal_pdf(double x, double mean, double var) {
  const double r = x - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * var) + r * r / var);
}

// Phi((x - m1)/s1) - Phi((x - m2)/s2), evaluated on the tail that avoids
// cancellation.
double cdf_difference(double x, double m1, double s1, double m2, double s2) {
  const double z1 = (x - m1) / s1;
  const double z2 = (x - m2) / s2;
  if (z1 > 0.0 && z2 > 0.0) return normal_cdf(-z2) - normal_cdf(-z1);
  return normal_cdf(z1) - normal_cdf(z2);
}

// Finds a coordinate such that every other coordinate has equal means across
// the two laws and a common variance within each law. Returns dim() when no
// such coordinate exists.
std::size_t find_axial_coordinate(const DiagonalGaussian& p, const DiagonalGaussian& q) {
  const std::size_t d = p.dim();
  for (std::size_t s = 0; s < d; ++s) {
    const std::size_t r = s == 0 ? 1 : 0;
    bool ok = true;
    for (std::size_t j = 0; j < d && ok; ++j) {
      if (j == s) continue;
      ok = p.mean[j] == q.mean[j] && p.variance[j] == p.variance[r] && q.variance[j] == q.variance[r];
    }
    if (ok) return s;
  }
  return d;
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double gaussian_kl(const DiagonalGaussian& p, const DiagonalGaussian& q) {
  check_diagonal(p, "gaussian_kl");
  check_diagonal(q, "gaussian_kl");
  check_same_dim("gaussian_kl", p.dim(), q.dim());
  double kl = 0.0;
  for (std::size_t j = 0; j < p.dim(); ++j) {
    const double v1 = p.variance[j];
    const double v2 = q.variance[j];
    if (!(v1 > 0.0) || !(v2 > 0.0))
      throw PreconditionViolation("gaussian_kl: covariance must be positive definite");
    const double dm = q.mean[j] - p.mean[j];
    const double x = v1 / v2 - 1.0;
    kl += 0.5 * ((x - std::log1p(x)) + dm * dm / v2);
  }
  return kl;
}

double gaussian_kl_same_cov(std::span<const double> m1, std::span<const double> m2,
                            std::span<const double> variance) {
  check_same_dim("gaussian_kl_same_cov", m1.size(), m2.size());
  check_same_dim("gaussian_kl_same_cov", m1.size(), variance.size());
  double kl = 0.0;
  for (std::size_t j = 0; j < m1.size(); ++j) {
    const double dm = m2[j] - m1[j];
    if (variance[j] < 0.0) throw PreconditionViolation("gaussian_kl_same_cov: negative variance");
    if (variance[j] == 0.0) {
      if (dm != 0.0)
        throw AbsoluteContinuityError(
            "KL is infinite: means differ along a zero-variance coordinate");
      continue;
    }
    kl += 0.5 * dm * dm / variance[j];
  }
  return kl;
}

double gaussian_tv_same_cov(std::span<const double> m1, std::span<const double> m2,
                            std::span<const double> variance) {
  check_same_dim("gaussian_tv_same_cov", m1.size(), m2.size());
  check_same_dim("gaussian_tv_same_cov", m1.size(), variance.size());
  double q = 0.0;
  for (std::size_t j = 0; j < m1.size(); ++j) {
    if (!(variance[j] > 0.0))
      throw PreconditionViolation("gaussian_tv_same_cov: covariance must be positive definite");
    const double dm = m2[j] - m1[j];
    q += dm * dm / variance[j];
  }
  // 2 Phi(r/2) - 1 = erf(r / (2 sqrt 2)).
  return std::erf(std::sqrt(q) / (2.0 * std::numbers::sqrt2));
}

double gaussian_tv_1d(double mean1, double var1, double mean2, double var2) {
  if (!(var1 > 0.0) || !(var2 > 0.0))
    throw PreconditionViolation("gaussian_tv_1d: variances must be positive");
  if (var1 == var2) return std::erf(std::abs(mean2 - mean1) / (2.0 * std::sqrt(2.0 * var1)));

  // log p - log q = a x^2 + b x + c has two real roots when var1 != var2.
  const double a = 0.5 / var2 - 0.5 / var1;
  const double b = mean1 / var1 - mean2 / var2;
  const double c = 0.5 * mean2 * mean2 / var2 - 0.5 * mean1 * mean1 / var1 + 0.5 * std::log(var2 / var1);
  const double disc = std::max(b * b - 4.0 * a * c, 0.0);
  double r1, r2;
  if (b == 0.0) {
    r1 = -std::sqrt(std::max(-c / a, 0.0));
    r2 = -r1;
  } else {
    const double t = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    r1 = t / a;
    r2 = c / t;
  }
  if (r1 > r2) std::swap(r1, r2);
  const double s1 = std::sqrt(var1);
  const double s2 = std::sqrt(var2);
  const double g1 = cdf_difference(r1, mean1, s1, mean2, s2);
  const double g2 = cdf_difference(r2, mean1, s1, mean2, s2);
  return std::clamp(0.5 * (std::abs(g1) + std::abs(g2 - g1) + std::abs(g2)), 0.0, 1.0);
}

double gaussian_tv(const DiagonalGaussian& p_in, const DiagonalGaussian& q_in) {
  check_diagonal(p_in, "gaussian_tv");
  check_diagonal(q_in, "gaussian_tv");
  check_same_dim("gaussian_tv", p_in.dim(), q_in.dim());

  // Point-mass coordinates: equal atoms drop out, anything else is singular.
  DiagonalGaussian p, q;
  for (std::size_t j = 0; j < p_in.dim(); ++j) {
    const bool pz = p_in.variance[j] == 0.0;
    const bool qz = q_in.variance[j] == 0.0;
    if (pz || qz) {
      if (pz && qz && p_in.mean[j] == q_in.mean[j]) continue;
      return 1.0;
    }
    p.mean.push_back(p_in.mean[j]);
    p.variance.push_back(p_in.variance[j]);
    q.mean.push_back(q_in.mean[j]);
    q.variance.push_back(q_in.variance[j]);
  }
  const std::size_t d = p.dim();
  if (d == 0) return 0.0;

  const std::size_t s = find_axial_coordinate(p, q);
  if (s == d)
    throw PreconditionViolation(
        "gaussian_tv: laws must differ from each other along at most one coordinate");
  const double a = p.mean[s], u = p.variance[s];
  const double b = q.mean[s], w = q.variance[s];
  if (d == 1) return gaussian_tv_1d(a, u, b, w);

  const std::size_t r = s == 0 ? 1 : 0;
  const double v1 = p.variance[r];
  const double v2 = q.variance[r];
  if (v1 == v2) return gaussian_tv_1d(a, u, b, w);

  // TV = int dx int ds (A(x) g1(s) - B(x) g2(s))_+ where s is the squared
  // radius of the remaining k coordinates and s / v_i ~ chi^2_k. The set
  // where the integrand is positive is a half-line in s, so the inner
  // integral is a difference of regularized incomplete gamma functions.
  const double k = static_cast<double>(d - 1);
  const double half_k = 0.5 * k;
  const double c = 0.5 / v2 - 0.5 / v1;
  const double log_ratio_rest = half_k * std::log(v1 / v2);
  auto inner = [&](double x) {
    const double la = log_normal_pdf(x, a, u);
    const double lb = log_normal_pdf(x, b, w);
    const double A = std::exp(la);
    const double B = std::exp(lb);
    const double s_star = (log_ratio_rest - (la - lb)) / c;
    double val;
    if (c > 0.0) {
      if (s_star <= 0.0) return std::max(A - B, 0.0);
      val = A * boost::math::gamma_q(half_k, s_star / (2.0 * v1)) -
            B * boost::math::gamma_q(half_k, s_star / (2.0 * v2));
    } else {
      if (s_star <= 0.0) return 0.0;
      val = A * boost::math::gamma_p(half_k, s_star / (2.0 * v1)) -
            B * boost::math::gamma_p(half_k, s_star / (2.0 * v2));
    }
    return std::max(val, 0.0);
  };

  const double su = std::sqrt(u), sw = std::sqrt(w);
  std::vector<double> cuts{a - 40.0 * su, a + 40.0 * su, b - 40.0 * sw, b + 40.0 * sw};
  for (double m : {-6.0, -2.0, 0.0, 2.0, 6.0}) {
    cuts.push_back(a + m * su);
    cuts.push_back(b + m * sw);
  }
  std::sort(cuts.begin(), cuts.end());
  const double lo = cuts.front(), hi = cuts.back();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double x0 = std::clamp(cuts[i], lo, hi);
    const double x1 = std::clamp(cuts[i + 1], lo, hi);
    if (x1 <= x0) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(inner, x0, x1, 15, 1e-12);
  }
  return std::clamp(total, 0.0, 1.0);
}

double per_query_kl(const HardInstancePair& pair) {
  return 2.0 * pair.lambda * pair.lambda / (pair.sigma * pair.sigma * static_cast<double>(pair.d));
}

double transcript_kl_bound(double n, const HardInstancePair& pair) {
  if (!(n >= 0.0)) throw PreconditionViolation("transcript_kl_bound: n must be non-negative");
  return n * per_query_kl(pair);
}

double pinsker_tv_bound(double kl) {
  if (!(kl >= 0.0)) throw PreconditionViolation("pinsker_tv_bound: KL must be non-negative");
  return std::min(std::sqrt(kl / 2.0), 1.0);
}

double psi1_lower(const HardInstancePair& pair, double n) {
  const double tv = pair.lambda * std::sqrt(n) / (pair.sigma * std::sqrt(static_cast<double>(pair.d)));
  return std::max(pair.lambda * (1.0 - tv), 0.0);
}

double psi2_upper(double alpha) {
  if (!(alpha > 0.0)) throw PreconditionViolation("psi2_upper: alpha must be positive");
  return std::sqrt(alpha);
}

MinimaxBound minimax_lower_bound(double n, std::size_t d, double sigma, std::optional<double> alpha) {
  const HardInstancePair pair =
      alpha ? build_hard_instance(n, d, sigma, *alpha) : build_hard_instance(n, d, sigma);
  const double root = std::sqrt(static_cast<double>(d) / n);
  return {sigma / 16.0 * root, 3.0 * sigma / 16.0 * root - std::sqrt(pair.alpha), pair.alpha};
}

BoundReport make_bound_report(double n, std::size_t d, double sigma, std::optional<double> alpha) {
  const HardInstancePair pair =
      alpha ? build_hard_instance(n, d, sigma, *alpha) : build_hard_instance(n, d, sigma);
  const MinimaxBound mm = minimax_lower_bound(n, d, sigma, pair.alpha);
  BoundReport r;
  r.n = n;
  r.d = d;
  r.sigma = sigma;
  r.alpha = pair.alpha;
  r.lambda = pair.lambda;
  r.per_query_kl = per_query_kl(pair);
  r.transcript_kl_bound = transcript_kl_bound(n, pair);
  r.tv_bound = pinsker_tv_bound(r.transcript_kl_bound);
  r.psi1_lower = psi1_lower(pair, n);
  r.psi2_upper = psi2_upper(pair.alpha);
  r.minimax_lower = mm.floor;
  r.minimax_intermediate = mm.intermediate;
  return r;
}

double transcript_log_likelihood_ratio(const Transcript& transcript, const GradientOracle& p,
                                       const GradientOracle& q) {
  check_same_dim("transcript_log_likelihood_ratio", p.dim(), q.dim());
  const Vector var_p = p.noise_variances();
  const Vector var_q = q.noise_variances();
  constexpr double inf = std::numeric_limits<double>::infinity();
  double llr = 0.0;
  for (std::size_t i = 0; i < transcript.rounds(); ++i) {
    const Vector gp = potential_grad(p.target(), transcript.queries[i]);
    const Vector gq = potential_grad(q.target(), transcript.queries[i]);
    const Vector& z = transcript.responses[i];
    check_same_dim("transcript response", p.dim(), z.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (var_p[j] == 0.0 || var_q[j] == 0.0) {
        if (var_p[j] != var_q[j])
          throw AbsoluteContinuityError("oracle noise laws differ in support");
        const bool on_p = z[j] == gp[j];
        const bool on_q = z[j] == gq[j];
        if (on_p && on_q) continue;
        if (on_p) return inf;
        if (on_q) return -inf;
        throw AbsoluteContinuityError("response lies outside the support of both oracles");
      }
      llr += log_normal_pdf(z[j], gp[j], var_p[j]) - log_normal_pdf(z[j], gq[j], var_q[j]);
    }
  }
  return llr;
}

LawPropagation ula_law_propagate(const IsotropicGaussianTarget& target,
                                 std::span<const double> noise_variance,
                                 const StepSchedule& schedule, std::size_t n,
                                 const DiagonalGaussian& init) {
  const std::size_t d = target.dim();
  check_same_dim("ula_law_propagate noise", d, noise_variance.size());
  check_diagonal(init, "ula_law_propagate init");
  check_same_dim("ula_law_propagate init", d, init.dim());

  const double alpha = target.alpha();
  const auto& m = target.mean();
  LawPropagation out;
  out.laws.reserve(n + 1);
  out.laws.push_back(init);
  for (std::size_t t = 0; t < n; ++t) {
    const double eta = schedule.at(t, n);
    const double contraction = 1.0 - eta * alpha;
    if (std::abs(contraction) >= 1.0 && eta > 0.0) out.unstable = true;
    const DiagonalGaussian& prev = out.laws.back();
    DiagonalGaussian next{Vector(d), Vector(d)};
    for (std::size_t j = 0; j < d; ++j) {
      next.mean[j] = contraction * prev.mean[j] + eta * alpha * m[j];
      next.variance[j] =
          contraction * contraction * prev.variance[j] + eta * eta * noise_variance[j] + 2.0 * eta;
    }
    out.laws.push_back(std::move(next));
  }
  return out;
}

std::optional<DiagonalGaussian> exact_output_law(const Sampler& sampler, const GradientOracle& oracle,
                                                 std::size_t n) {
  const std::size_t d = oracle.dim();
  if (const auto* langevin = dynamic_cast<const LangevinSampler*>(&sampler)) {
    const InitialLaw& g0 = langevin->initial_law();
    const double v0 = g0.kind == InitialLaw::Kind::Gaussian ? g0.variance : 0.0;
    DiagonalGaussian init{Vector(d, 0.0), Vector(d, v0)};
    auto prop = ula_law_propagate(oracle.target(), oracle.noise_variances(), langevin->schedule(), n, init);
    return std::move(prop.laws.back());
  }
  if (const auto* baseline = dynamic_cast<const AveragingBaseline*>(&sampler)) {
    if (n == 0) return DiagonalGaussian{Vector(d, 0.0), Vector(d, 0.0)};
    // Responses at the origin are -alpha_t m + xi, so
    // m_hat = (alpha_t / alpha_b) m - mean(xi) / alpha_b.
    const double ab = baseline->alpha();
    const double at = oracle.target().alpha();
    const Vector noise = oracle.noise_variances();
    DiagonalGaussian law{Vector(d), Vector(d)};
    for (std::size_t j = 0; j < d; ++j) {
      law.mean[j] = at / ab * oracle.target().mean()[j];
      law.variance[j] = 1.0 / ab + noise[j] / (static_cast<double>(n) * ab * ab);
    }
    return law;
  }
  return std::nullopt;
}

}  // namespace sglb
