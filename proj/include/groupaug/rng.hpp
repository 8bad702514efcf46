/*
 * Copyright 2026 The groupaug Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Deterministic random streams shared by all sampling code.
//
// The generator is SplitMix64 (Steele, Lea & Flood, "Fast splittable
// pseudorandom number generators"). It is fixed: changing it changes every
// seeded artifact the toolkit produces.
//
//   Rng rng(seed);        // root stream
//   Rng child = rng.split();          // consumes one draw of the parent
//   Rng keyed = Rng::derive(seed, k); // stream addressed by (seed, key)
//
// All distributions below are implemented here rather than through <random>
// so that output does not depend on the standard library vendor.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>

namespace groupaug {

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kGammaInverse = [] {
    std::uint64_t x = kGamma;  // Newton: each step doubles the correct low bits
    for (int i = 0; i < 6; ++i) x *= 2 - kGamma * x;
    return x;
  }();
  static_assert(kGamma * kGammaInverse == 1);

  explicit Rng(std::uint64_t seed = 0) noexcept : seed_(seed), state_(seed) {}

  // Stream addressed by a (seed, key) pair; independent of draw order.
  static Rng derive(std::uint64_t seed, std::uint64_t key) noexcept {
    return Rng(mix64(seed ^ mix64(key + kGamma)));
  }

  std::uint64_t seed() const noexcept { return seed_; }
  // Draws taken so far. kGamma is odd, so it has an inverse mod 2^64.
  std::uint64_t position() const noexcept { return (state_ - seed_) * kGammaInverse; }

  std::uint64_t next_u64() noexcept {
    state_ += kGamma;
    return mix64(state_);
  }

  // Child stream; consumes exactly one draw of this stream.
  Rng split() noexcept { return Rng(mix64(next_u64() ^ 0xD1B54A32D192ED03ULL)); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi). Returns lo exactly when lo == hi.
  double uniform(double lo, double hi) noexcept { return lo + uniform() * (hi - lo); }

  // Uniform integer in [0, n). Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: empty range");
    std::uint64_t x = next_u64();
    auto m = static_cast<unsigned __int128>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        x = next_u64();
        m = static_cast<unsigned __int128>(x) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform integer in [lo, hi] (inclusive).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("Rng::uniform_int: hi < lo");
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  // Standard normal via Box-Muller; consumes two uniforms per call.
  double normal() noexcept {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double stddev) noexcept { return mean + stddev * normal(); }

  // Index drawn from normalized probabilities (sum assumed 1).
  std::size_t categorical(std::span<const double> probs) noexcept {
    const double u = uniform();
    double cdf = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (probs[i] <= 0.0) continue;
      last_positive = i;
      cdf += probs[i];
      if (u < cdf) return i;
    }
    return last_positive;  // u landed in the rounding slack above the final cdf
  }

  // Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace groupaug
