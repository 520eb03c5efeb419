// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace nogo {

// Deterministic random source. std::mt19937_64 has a standard-pinned output
// sequence; the double conversions below avoid std::uniform_real_distribution,
// whose algorithm is implementation-defined. Identical seeds therefore give
// identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1]; safe as a log() argument.
  double uniform_pos() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller, one cached spare.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

  // Uniform integer in [0, bound), rejection sampling (no modulo bias).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
    const std::uint64_t limit =
        (std::numeric_limits<std::uint64_t>::max() / bound) * bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Inverse-CDF sampler for a fixed discrete distribution.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(const std::vector<double>& weights) {
    if (weights.empty())
      throw std::invalid_argument("CategoricalSampler: empty distribution");
    cdf_.reserve(weights.size());
    double acc = 0.0;
    for (double w : weights) {
      if (w < 0.0)
        throw std::invalid_argument("CategoricalSampler: negative weight");
      acc += w;
      cdf_.push_back(acc);
    }
    if (acc <= 0.0)
      throw std::invalid_argument("CategoricalSampler: zero total weight");
  }

  std::size_t sample(Rng& rng) const {
    const double u = rng.uniform() * cdf_.back();
    std::size_t lo = 0;
    std::size_t hi = cdf_.size() - 1;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (cdf_[mid] > u)
        hi = mid;
      else
        lo = mid + 1;
    }
    return lo;
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace nogo
