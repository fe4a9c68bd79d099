#include <doctest.h>

#include <cmath>
#include <sstream>
#include <type_traits>

#include "sglb/errors.hpp"
#include "sglb/oracle.hpp"
#include "sglb/samplers.hpp"

using namespace sglb;

namespace {

// Queries a fixed point and outputs the last response.
class FixedQuerySampler final : public Sampler {
 public:
  explicit FixedQuerySampler(Vector point) : point_(std::move(point)) {}
  std::string_view name() const override { return "fixed"; }
  Vector initial_point(std::size_t, Rng&) const override { return point_; }
  Vector next_point(const History& h, Rng&) const override {
    if (h.final()) return Vector(h.response(h.round() - 1).begin(), h.response(h.round() - 1).end());
    return point_;
  }

 private:
  Vector point_;
};

}  // namespace

// The sampler interface only ever sees a History; the oracle, its target and
// its noise stream are not reachable through it.
static_assert(std::is_same_v<decltype(&Sampler::next_point), Vector (Sampler::*)(const History&, Rng&) const>);
static_assert(std::is_same_v<decltype(&Sampler::initial_point), Vector (Sampler::*)(std::size_t, Rng&) const>);
static_assert(!std::is_constructible_v<History, const GradientOracle&>);
static_assert(!std::is_convertible_v<History, GradientOracle>);

TEST_CASE("exact oracle returns the gradient") {
  const IsotropicGaussianTarget t({1.0, -2.0, 0.5}, 3.0);
  const GradientOracle oracle(t, NoiseKind::Exact, 2.0);
  Rng rng(1);
  const Vector y{0.3, 0.7, -1.1};
  CHECK(oracle.query(y, rng) == potential_grad(t, y));
  CHECK_THROWS_AS(oracle.query(Vector{1.0}, rng), DimensionMismatch);
}

TEST_CASE("first-coordinate oracle perturbs only coordinate 1") {
  const IsotropicGaussianTarget t({1.0, -2.0, 0.5, 4.0}, 0.5);
  const GradientOracle oracle(t, NoiseKind::FirstCoordinate, 1.5);
  Rng rng(2);
  const Vector y{0.0, 1.0, 2.0, 3.0};
  const Vector g = potential_grad(t, y);
  int differs = 0;
  for (int i = 0; i < 100; ++i) {
    const Vector z = oracle.query(y, rng);
    for (std::size_t j = 1; j < 4; ++j) CHECK(z[j] == g[j]);
    differs += z[0] != g[0];
  }
  CHECK(differs == 100);
  const Vector var = oracle.noise_variances();
  CHECK(var[0] == doctest::Approx(1.5 * 1.5 * 4));
  CHECK(var[1] == 0.0);
}

TEST_CASE("isotropic oracle: law of large numbers") {
  const std::size_t d = 5;
  const double sigma = 0.7;
  const IsotropicGaussianTarget t({1.0, 0.0, -1.0, 2.0, 0.5}, 2.0);
  const GradientOracle oracle(t, NoiseKind::IsotropicGaussian, sigma);
  const Vector y{0.5, 0.5, 0.5, 0.5, 0.5};
  const Vector g = potential_grad(t, y);
  Rng rng(3);
  const int reps = 100000;
  Vector sum(d, 0.0), sum2(d, 0.0);
  for (int i = 0; i < reps; ++i) {
    const Vector z = oracle.query(y, rng);
    for (std::size_t j = 0; j < d; ++j) {
      sum[j] += z[j];
      sum2[j] += (z[j] - g[j]) * (z[j] - g[j]);
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    const double mean = sum[j] / reps;
    CHECK(std::abs(mean - g[j]) <= 4.0 * sigma * std::sqrt(static_cast<double>(d) / reps));
    CHECK(sum2[j] / reps == doctest::Approx(sigma * sigma).epsilon(0.05));
  }
}

TEST_CASE("validate_oracle") {
  const double sigma = 1.3;
  const std::size_t d = 6;
  Vector hard(d, 0.0);
  hard[0] = sigma * sigma * d;
  CHECK(validate_oracle(hard, sigma, d).ok);
  CHECK(validate_oracle(Vector(d, 0.0), sigma, d).ok);
  CHECK(validate_oracle(Vector(d, sigma * sigma), sigma, d).ok);

  Vector over = hard;
  over[0] += 1.0;
  const auto r = validate_oracle(over, sigma, d);
  CHECK_FALSE(r.ok);
  CHECK(r.reason.find("budget") != std::string::npos);

  Vector neg(d, 0.0);
  neg[2] = -0.1;
  const auto r2 = validate_oracle(neg, sigma, d);
  CHECK_FALSE(r2.ok);
  CHECK(r2.reason.find("positive semidefinite") != std::string::npos);
  CHECK_FALSE(validate_oracle(Vector(d - 1, 0.0), sigma, d).ok);

  // Every shipped oracle kind stays within budget.
  for (NoiseKind k : {NoiseKind::Exact, NoiseKind::IsotropicGaussian, NoiseKind::FirstCoordinate}) {
    const GradientOracle o(IsotropicGaussianTarget(Vector(d, 0.0), 1.0), k, sigma);
    CHECK(validate_oracle(o.noise_variances(), sigma, d).ok);
  }
}

TEST_CASE("protocol: n = 0 returns the initial point") {
  const GradientOracle oracle(IsotropicGaussianTarget({0.0, 0.0}, 1.0), NoiseKind::IsotropicGaussian, 1.0);
  const auto t = run_protocol(make_ula(0.1, InitialLaw::gaussian(2.0)), oracle, 0, 42);
  CHECK(t.rounds() == 0);
  CHECK(t.responses.empty());
  CHECK(t.sample.size() == 2);
  // G0 = N(0, 2 I): the sample is the first draw of the sampler stream.
  Rng rng(derive_seed(42, "sampler"));
  const Vector expected = InitialLaw::gaussian(2.0).draw(2, rng);
  CHECK(t.sample == expected);
}

TEST_CASE("protocol: deterministic sampler with exact oracle") {
  const IsotropicGaussianTarget target({1.0, 2.0}, 0.5);
  const GradientOracle oracle(target, NoiseKind::Exact, 1.0);
  const FixedQuerySampler sampler({3.0, -1.0});
  const auto a = run_protocol(sampler, oracle, 5, 1);
  const auto b = run_protocol(sampler, oracle, 5, 999);
  CHECK(a.queries == b.queries);
  CHECK(a.responses == b.responses);
  CHECK(a.sample == potential_grad(target, Vector{3.0, -1.0}));
  CHECK(a.rounds() == 5);
}

TEST_CASE("protocol: replay is bit-exact and streams are independent") {
  const GradientOracle oracle(IsotropicGaussianTarget({0.5, -0.5, 1.0}, 2.0), NoiseKind::IsotropicGaussian, 1.0);
  const auto ula = make_ula(0.05);
  const auto a = run_protocol(ula, oracle, 50, 123);
  const auto b = run_protocol(ula, oracle, 50, 123);
  CHECK(a == b);
  const auto c = run_protocol(ula, oracle, 50, 124);
  CHECK(a.sample != c.sample);

  // The first oracle answer does not depend on the sampler's draws: two
  // samplers with the same y0 but different kernels see the same noise.
  const FixedQuerySampler fixed({0.0, 0.0, 0.0});
  const auto f = run_protocol(fixed, oracle, 1, 77);
  const auto u = run_protocol(make_ula(0.3), oracle, 1, 77);
  CHECK(f.responses[0] == u.responses[0]);
}

TEST_CASE("transcript csv dump") {
  const GradientOracle oracle(IsotropicGaussianTarget({0.0, 0.0}, 1.0), NoiseKind::Exact, 1.0);
  const auto t = run_protocol(FixedQuerySampler({1.0, 2.0}), oracle, 2, 0);
  std::ostringstream os;
  write_transcript_csv(os, t);
  CHECK(os.str() == "round,y_1,y_2,z_1,z_2\n0,1,2,1,2\n1,1,2,1,2\n2,1,2,,\n");
}

TEST_CASE("derive_seed is stable and separates roles") {
  CHECK(derive_seed(1, "oracle") == derive_seed(1, "oracle"));
  CHECK(derive_seed(1, "oracle") != derive_seed(1, "sampler"));
  CHECK(derive_seed(1, "trial", 0) != derive_seed(1, "trial", 1));
  CHECK(derive_seed(1, "trial", 0) != derive_seed(2, "trial", 0));
}
