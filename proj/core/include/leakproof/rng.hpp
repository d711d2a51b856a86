#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace leakproof {

// Seeded generator with a fixed algorithm identity.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard distributions are not, so every derived draw is
// implemented here:
//   UniformIndex(n)  rejection sampling on the top of the 64-bit range
//   UniformReal()    53 high bits scaled to [0, 1)
//   Normal()         Box-Muller, one value per call (the sine branch is dropped)
//   Shuffle          Fisher-Yates from the back
// Two implementations honouring this contract produce identical splits and
// initializations for identical seeds.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t UniformIndex(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

  /// Uniform integer in [lo, hi].
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(UniformIndex(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform real in [0, 1).
  double UniformReal() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double UniformReal(double lo, double hi) { return lo + (hi - lo) * UniformReal(); }

  /// exp(U(log lo, log hi)).
  double LogUniform(double lo, double hi) { return std::exp(UniformReal(std::log(lo), std::log(hi))); }

  double Normal(double mean, double stddev) {
    double u1 = UniformReal();
    while (u1 <= 0.0) u1 = UniformReal();
    const double u2 = UniformReal();
    return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  template <typename T>
  void Shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = UniformIndex(i);
      std::swap(values[i - 1], values[j]);
    }
  }

  /// k distinct indices from [0, n), in draw order (partial Fisher-Yates).
  std::vector<std::uint32_t> SampleWithoutReplacement(std::uint32_t n, std::uint32_t k) {
    std::vector<std::uint32_t> pool(n);
    for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
    for (std::uint32_t i = 0; i < k && i < n; ++i) {
      const auto j = i + static_cast<std::uint32_t>(UniformIndex(n - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(std::min(k, n));
    return pool;
  }

  /// Engine state in the standard's textual representation.
  void Save(std::ostream& out) const { out << engine_; }
  void Load(std::istream& in) { in >> engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace leakproof
