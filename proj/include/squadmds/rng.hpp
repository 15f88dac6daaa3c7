#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace squadmds {

/// Deterministic random stream. The engine is mt19937_64, whose output
/// sequence for a given seed is fixed by the C++ standard, and every
/// derived quantity (uniform doubles, normals, bounded ints, shuffles) is
/// implemented here rather than with std distributions, which are
/// implementation-defined. Two builds on different standard libraries
/// therefore draw identical values from identical seeds.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(mix_(seed, stream)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller. Draws two uniforms every other call.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // 1 - uniform() lies in (0, 1], so the log is finite.
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
  }

  /// Uniform integer in [0, bound), unbiased via rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

private:
  // splitmix64 step, used to spread (seed, stream) into a full-entropy
  // engine seed so that nearby seeds or stream ids do not correlate.
  static std::uint64_t mix_(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline RngStream seeded_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return RngStream(seed, stream);
}

}  // namespace squadmds
