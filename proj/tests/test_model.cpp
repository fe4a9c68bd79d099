#include <doctest.h>

#include <cmath>
#include <random>

#include "sglb/errors.hpp"
#include "sglb/model.hpp"

using namespace sglb;

namespace {

Vector random_vector(std::mt19937_64& gen, std::size_t d, double scale) {
  std::normal_distribution<double> dist(0.0, scale);
  Vector v(d);
  for (double& x : v) x = dist(gen);
  return v;
}

double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST_CASE("potential gradient: examples") {
  const IsotropicGaussianTarget t({1.0, 0.0}, 2.0);
  CHECK(potential_grad(t, Vector{1.0, 0.0}) == Vector{0.0, 0.0});
  CHECK(potential_grad(t, Vector{2.0, 2.0}) == Vector{2.0, 4.0});
  CHECK_THROWS_AS(potential_grad(t, Vector{1.0}), DimensionMismatch);
}

TEST_CASE("potential value: examples") {
  CHECK(potential_value(IsotropicGaussianTarget({0.0}, 2.0), Vector{3.0}) == 9.0);
  const IsotropicGaussianTarget t({0.5, -1.0, 2.0}, 3.0);
  CHECK(potential_value(t, t.mean()) == 0.0);
  CHECK_THROWS_AS(potential_value(t, Vector{0.0, 0.0}), DimensionMismatch);
}

TEST_CASE("potential gradient matches central finite differences") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> alpha_dist(0.05, 20.0);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t d = 1 + rep % 7;
    const IsotropicGaussianTarget t(random_vector(gen, d, 3.0), alpha_dist(gen));
    Vector y = random_vector(gen, d, 5.0);
    const double h = 1e-5 * (1.0 + euclidean_norm(y));
    const Vector g = potential_grad(t, y);
    for (std::size_t j = 0; j < d; ++j) {
      Vector yp = y, ym = y;
      yp[j] += h;
      ym[j] -= h;
      const double fd = (potential_value(t, yp) - potential_value(t, ym)) / (2.0 * h);
      CHECK(std::abs(fd - g[j]) <= 1e-6 * std::max(1.0, std::abs(g[j])));
    }
  }
}

TEST_CASE("strong convexity sandwich holds with equality") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> alpha_dist(0.01, 50.0);
  for (int rep = 0; rep < 10000; ++rep) {
    const std::size_t d = 1 + rep % 5;
    const IsotropicGaussianTarget t(random_vector(gen, d, 2.0), alpha_dist(gen));
    const Vector x = random_vector(gen, d, 4.0);
    const Vector y = random_vector(gen, d, 4.0);
    Vector diff(d);
    for (std::size_t j = 0; j < d; ++j) diff[j] = x[j] - y[j];
    const double gap = potential_value(t, x) - potential_value(t, y) - dot(potential_grad(t, y), diff);
    const double quad = 0.5 * t.alpha() * squared_distance(x, y);
    const double scale = std::abs(potential_value(t, x)) + std::abs(potential_value(t, y)) + quad;
    REQUIRE(std::abs(gap - quad) <= 1e-9 * std::max(scale, 1e-300));
  }
}

TEST_CASE("loss: examples and range") {
  CHECK(loss_eval(LossSpec(1.0, {0.0, 0.0}), Vector{0.0, 0.0}) == 0.0);
  CHECK(loss_eval(LossSpec(1.0, {0.0, 0.0}), Vector{3.0, 4.0}) == 1.0);
  CHECK(loss_eval(LossSpec(0.5, {0.0}), Vector{1.0}) == 0.5);
  CHECK_THROWS_AS(loss_eval(LossSpec(1.0, {0.0}), Vector{1.0, 2.0}), DimensionMismatch);

  std::mt19937_64 gen(3);
  for (int rep = 0; rep < 1000; ++rep) {
    const LossSpec spec(std::exp(std::normal_distribution<double>(0.0, 3.0)(gen)), random_vector(gen, 3, 2.0));
    const double v = loss_eval(spec, random_vector(gen, 3, 10.0));
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("target rejects non-positive alpha") {
  CHECK_THROWS_AS(IsotropicGaussianTarget({0.0}, 0.0), PreconditionViolation);
  CHECK_THROWS_AS(IsotropicGaussianTarget({0.0}, -1.0), PreconditionViolation);
  CHECK_THROWS_AS(IsotropicGaussianTarget({}, 1.0), PreconditionViolation);
}

TEST_CASE("hard instance: boundary n = sigma^2 d / 4 gives lambda = 1/2") {
  const auto p = build_hard_instance(25.0, 100, 1.0);
  CHECK(p.lambda == 0.5);
  const auto q = build_hard_instance(1.0, 4, 1.0);
  CHECK(q.lambda == 0.5);
  CHECK(q.alpha == 1.0 / 64.0);
}

TEST_CASE("hard instance: sigma=1, d=100, n=400") {
  const auto p = build_hard_instance(400.0, 100, 1.0);
  CHECK(p.lambda == 0.125);
  CHECK(p.alpha == 100.0 / 102400.0);
  CHECK(p.m1[0] == doctest::Approx(128.0).epsilon(1e-15));
  CHECK(p.m2[0] == -p.m1[0]);
  for (std::size_t j = 1; j < p.d; ++j) {
    CHECK(p.m1[j] == 0.0);
    CHECK(p.m2[j] == 0.0);
  }
  CHECK(mean_separation(p) == doctest::Approx(256.0).epsilon(1e-15));
}

TEST_CASE("hard instance: invariants over a grid") {
  for (double sigma : {0.25, 0.5, 1.0, 2.0, 3.0})
    for (std::size_t d : {1u, 2u, 7u, 64u, 300u})
      for (double mult : {1.0, 1.5, 4.0, 100.0}) {
        const double n = mult * sigma * sigma * static_cast<double>(d) / 4.0;
        const auto p = build_hard_instance(n, d, sigma);
        CHECK(p.lambda > 0.0);
        CHECK(p.lambda <= 0.5);
        CHECK(euclidean_norm(p.m1) <= 1.0 / p.alpha);
        CHECK(euclidean_norm(p.m2) <= 1.0 / p.alpha);
        CHECK(euclidean_distance(p.m1, p.m2) == doctest::Approx(mean_separation(p)).epsilon(1e-14));
        CHECK(p.alpha == doctest::Approx(sigma * sigma * static_cast<double>(d) / (256.0 * n)).epsilon(1e-15));
      }
}

TEST_CASE("hard instance: precondition errors") {
  CHECK_THROWS_AS(build_hard_instance(24.0, 100, 1.0), PreconditionViolation);
  try {
    build_hard_instance(24.0, 100, 1.0);
  } catch (const PreconditionViolation& e) {
    CHECK(std::string(e.what()).find("n >= sigma^2 d / 4") != std::string::npos);
  }
  CHECK_THROWS_AS(build_hard_instance(400.0, 0, 1.0), PreconditionViolation);
  CHECK_THROWS_AS(build_hard_instance(400.0, 100, 0.0), PreconditionViolation);
  // Explicit alpha above sigma^2 d / (256 n).
  CHECK_THROWS_AS(build_hard_instance(400.0, 100, 1.0, 1e-3), PreconditionViolation);
  const auto p = build_hard_instance(400.0, 100, 1.0, 5e-4);
  CHECK(p.alpha == 5e-4);
  CHECK(mean_separation(p) == doctest::Approx(2.0 * 0.125 / 5e-4));
}
