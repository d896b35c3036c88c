#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace q1d {

/// MT19937-64 with the variates built by hand. The engine's output sequence is
/// fixed by the C++ standard, but <random> distributions are not, so uniform and
/// exponential draws are derived here to keep trajectories bit-identical across
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Exponential waiting time with the given rate (> 0).
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer applied to base + index * golden-ratio increment, giving
/// well-separated per-trajectory seeds.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace q1d
