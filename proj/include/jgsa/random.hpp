#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace jgsa {

/// Portable random stream, algorithm version 1.
///
/// The raw engine is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. The standard distributions are not portable across library
/// implementations, so every derived draw is defined here:
///   - uniform01: top 53 bits of one engine output, scaled by 2^-53
///   - below(n):  rejection sampling on the top bits (no modulo bias)
///   - normal:    Box-Muller, both variates used in order
/// Changing any of these is a format break and must bump kVersion.
class Rng {
 public:
  static constexpr int kVersion = 1;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform01();

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);

  /// Standard normal variate.
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Sorted indices of `count` distinct elements drawn from [0, n).
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count,
                                                    std::uint64_t seed);

}  // namespace jgsa
