#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sglb/model.hpp"
#include "sglb/rng.hpp"

namespace sglb {

enum class NoiseKind { Exact, IsotropicGaussian, FirstCoordinate };

std::string_view to_string(NoiseKind kind);
NoiseKind parse_noise_kind(std::string_view name);

// Stochastic gradient oracle Q_x: returns grad f(x) + xi with zero-mean
// Gaussian xi. The trace of the noise covariance is exactly sigma^2 d for
// both noisy kinds:
//   IsotropicGaussian  cov = sigma^2 I
//   FirstCoordinate    cov = diag(sigma^2 d, 0, ..., 0)
class GradientOracle {
 public:
  GradientOracle(IsotropicGaussianTarget target, NoiseKind kind, double sigma);

  const IsotropicGaussianTarget& target() const { return target_; }
  NoiseKind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  std::size_t dim() const { return target_.dim(); }

  // Diagonal of the noise covariance.
  Vector noise_variances() const;

  Vector query(std::span<const double> y, Rng& rng) const;

 private:
  IsotropicGaussianTarget target_;
  NoiseKind kind_;
  double sigma_;
};

struct OracleCheck {
  bool ok = true;
  std::string reason;
};

// Diagonal noise covariance is admissible iff it is PSD and its trace is at
// most sigma^2 d.
OracleCheck validate_oracle(std::span<const double> noise_diagonal, double sigma, std::size_t d);

// Initial distribution G0 of a sampler.
struct InitialLaw {
  enum class Kind { Origin, Gaussian };
  Kind kind = Kind::Origin;
  double variance = 0.0;  // per-coordinate variance for Kind::Gaussian

  static InitialLaw origin() { return {}; }
  static InitialLaw gaussian(double variance) { return {Kind::Gaussian, variance}; }

  Vector draw(std::size_t dim, Rng& rng) const;
};

// Read-only view of the interaction so far. This is everything a sampler
// can see: past queries, past responses, the budget and the dimension.
class History {
 public:
  History(std::span<const Vector> queries, std::span<const Vector> responses, std::size_t budget,
          std::size_t dim)
      : queries_(queries), responses_(responses), budget_(budget), dim_(dim) {}

  // Number of answered queries.
  std::size_t round() const { return responses_.size(); }
  std::size_t budget() const { return budget_; }
  std::size_t dim() const { return dim_; }
  bool final() const { return round() == budget_; }

  std::span<const double> query(std::size_t i) const { return queries_[i]; }
  std::span<const double> response(std::size_t i) const { return responses_[i]; }
  std::span<const Vector> queries() const { return queries_; }
  std::span<const Vector> responses() const { return responses_; }

 private:
  std::span<const Vector> queries_;
  std::span<const Vector> responses_;
  std::size_t budget_;
  std::size_t dim_;
};

// Gradient-based sampling algorithm: an initial distribution and
// history-dependent kernels. Called with history of length i < n, next_point
// returns the query y_i; called with the full history it returns the sample.
class Sampler {
 public:
  virtual ~Sampler() = default;

  virtual std::string_view name() const = 0;
  virtual Vector initial_point(std::size_t dim, Rng& rng) const = 0;
  virtual Vector next_point(const History& history, Rng& rng) const = 0;

  // Optional mean estimate t reported alongside the sample.
  virtual std::optional<Vector> estimate(const History&) const { return std::nullopt; }
};

struct Transcript {
  std::vector<Vector> queries;
  std::vector<Vector> responses;
  Vector sample;
  std::optional<Vector> estimate;
  std::uint64_t seed = 0;
  std::optional<Hypothesis> theta;

  std::size_t rounds() const { return queries.size(); }
  bool operator==(const Transcript&) const = default;
};

// The n-round interaction: y0 ~ G0, z_i ~ Q_{y_i}, y_{i+1} = K(history).
// Sampler and oracle draw from independent streams derived from `seed`.
Transcript run_protocol(const Sampler& sampler, const GradientOracle& oracle, std::size_t n,
                        std::uint64_t seed);

// Debug dump. Header `round,y_1..y_d,z_1..z_d`; one row per round, then a
// row for the sample with empty z fields.
void write_transcript_csv(std::ostream& os, const Transcript& transcript);

}  // namespace sglb
