#ifndef OPTDES_RNG_HPP
#define OPTDES_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace optdes {

// Seedable generator with hand-rolled bounded-int and normal draws so that
// streams are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double next_uniform() {
    // 53 random bits mapped to [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound), bound >= 1. Rejection sampling keeps the
  // draw exactly uniform.
  std::uint64_t next_index(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % bound;
  }

  double next_normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = next_uniform();
    while (u1 <= 0.0) u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return r * std::cos(theta);
  }

  // Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(next_index(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct values sampled uniformly from {0, ..., n-1} (partial
  // Fisher-Yates over an index table).
  std::vector<std::ptrdiff_t> sample_without_replacement(std::ptrdiff_t n, std::ptrdiff_t k) {
    std::vector<std::ptrdiff_t> idx(static_cast<std::size_t>(n));
    for (std::ptrdiff_t i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (std::ptrdiff_t i = 0; i < k; ++i) {
      const auto j = i + static_cast<std::ptrdiff_t>(next_index(static_cast<std::uint64_t>(n - i)));
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    idx.resize(static_cast<std::size_t>(k));
    return idx;
  }

 private:
  std::mt19937_64 engine_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace optdes

#endif  // OPTDES_RNG_HPP
