#pragma once

#include <cmath>
#include <cstdint>

namespace trolleyloc {

// splitmix64 step; the whole harness keys every random draw off this so runs
// are reproducible bit-for-bit across platforms (no libstdc++ distributions).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Stated 64-bit mix used to derive per-scenario / per-stream seeds:
/// mix_seed(base, tag) = splitmix64(base XOR golden_ratio * (tag + 1)).
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t tag) {
  return splitmix64(base ^ (0x9E3779B97F4A7C15ull * (tag + 1)));
}

/// Small deterministic generator (splitmix64 stream + Box-Muller, no cached
/// spare: every gaussian() consumes exactly two uniforms).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

  /// Standard normal draw.
  double gaussian() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double gaussian(double sigma) { return sigma * gaussian(); }

 private:
  std::uint64_t state_;
};

}  // namespace trolleyloc
