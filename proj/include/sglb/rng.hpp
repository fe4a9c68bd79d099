#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace sglb {

// Stable 64-bit child seed for (master seed, role tag, index). The value only
// depends on its arguments, so runs can be replayed or spread across threads.
std::uint64_t derive_seed(std::uint64_t master, std::string_view role, std::uint64_t index = 0);

// Randomness stream handed to oracles and samplers. Each stream owns its
// engine; two streams never share state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  void fill_normal(std::span<double> out) {
    for (double& v : out) v = normal_(engine_);
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace sglb
