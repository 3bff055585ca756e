#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace polardyn {

// Seeded 64-bit generator with portable derived draws. The engine's output
// sequence is fixed by the standard; the helpers below avoid std
// distributions, whose algorithms differ between standard libraries.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64+splitmix64";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer on [0, n), n > 0 (Lemire's multiply-and-reject).
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Seed of replicate `stream`; stream 0 returns `base` unchanged so a single
// replicate reproduces a plain run.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace polardyn
