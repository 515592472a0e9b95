#pragma once

#include <cstdint>
#include <random>

namespace liso {

/// Deterministic random source.
///
/// The engine is std::mt19937_64, whose output sequence for a given seed is
/// fixed by the C++ standard. Distributions are implemented here rather than
/// taken from <random>, whose distribution algorithms are unspecified:
///   - uniform(): top 53 bits of one engine word, scaled by 2^-53, in [0, 1).
///   - normal(): Marsaglia polar method on uniforms mapped to (-1, 1); each
///     accepted pair yields two variates, the second cached for the next call.
/// Given the same libm, a seed fixes every variate bit-for-bit.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  /// Stream for trial `trial` of an experiment seeded with `base`.
  static SeededRng for_trial(std::uint64_t base, std::uint64_t trial);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double normal();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// base XOR splitmix64(trial): independent, reproducible per-trial seeds.
std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial) noexcept;

}  // namespace liso
