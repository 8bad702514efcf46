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

// Color-group kernels: solarize, grayscale, color jitter, histogram
// equalization and channel shuffle.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "groupaug/errors.hpp"
#include "groupaug/image.hpp"
#include "groupaug/kernels/resample.hpp"
#include "groupaug/rng.hpp"

namespace groupaug::kernels {

// ITU-R BT.601 luma weights.
inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

inline double luma(double r, double g, double b) noexcept { return kLumaR * r + kLumaG * g + kLumaB * b; }

// v -> 255 - v for v >= threshold.
inline Image solarize(const Image& img, int threshold) {
  if (threshold < 0 || threshold > 255) throw ValidationError("solarize: threshold must be in [0, 255]");
  Image out = img;
  for (auto& v : out.data()) {
    if (v >= threshold) v = static_cast<std::uint8_t>(255 - v);
  }
  return out;
}

inline Image to_gray(const Image& img) {
  Image out = img;
  auto d = out.data();
  for (std::size_t i = 0; i < d.size(); i += 3) {
    const std::uint8_t g = to_u8(luma(d[i], d[i + 1], d[i + 2]));
    d[i] = d[i + 1] = d[i + 2] = g;
  }
  return out;
}

struct JitterStrengths {
  double brightness = 0.4;
  double contrast = 0.4;
  double saturation = 0.4;
  double hue = 0.1;
};

// Concrete per-call factors. hue_shift is a fraction of the hue circle.
struct JitterFactors {
  double brightness = 1.0;
  double contrast = 1.0;
  double saturation = 1.0;
  double hue_shift = 0.0;
};

inline void validate(const JitterStrengths& s) {
  auto in = [](double v, double hi) { return v >= 0.0 && v <= hi; };
  if (!in(s.brightness, 1.5) || !in(s.contrast, 1.5) || !in(s.saturation, 1.5)) {
    throw ValidationError("color_jitter: brightness/contrast/saturation must be in [0, 1.5]");
  }
  if (!in(s.hue, 0.5)) throw ValidationError("color_jitter: hue must be in [0, 0.5]");
}

// Draw order: brightness, contrast, saturation, hue.
inline JitterFactors draw_jitter(const JitterStrengths& s, Rng& rng) {
  validate(s);
  JitterFactors f;
  f.brightness = rng.uniform(std::max(0.0, 1.0 - s.brightness), 1.0 + s.brightness);
  f.contrast = rng.uniform(std::max(0.0, 1.0 - s.contrast), 1.0 + s.contrast);
  f.saturation = rng.uniform(std::max(0.0, 1.0 - s.saturation), 1.0 + s.saturation);
  f.hue_shift = rng.uniform(-s.hue, s.hue);
  return f;
}

namespace detail {

inline void rotate_hue(double& r, double& g, double& b, double shift) noexcept {
  // RGB in [0,255] -> HSV with h in [0,1).
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  if (delta <= 0.0) return;  // achromatic: hue undefined, rotation is a no-op
  double h;
  if (mx == r) {
    h = (g - b) / delta;
  } else if (mx == g) {
    h = 2.0 + (b - r) / delta;
  } else {
    h = 4.0 + (r - g) / delta;
  }
  h = h / 6.0 + shift;
  h -= std::floor(h);
  const double v = mx;
  const double s = delta / mx;
  const double h6 = h * 6.0;
  const int sector = static_cast<int>(h6) % 6;
  const double frac = h6 - std::floor(h6);
  const double p = v * (1.0 - s);
  const double q = v * (1.0 - s * frac);
  const double t = v * (1.0 - s * (1.0 - frac));
  switch (sector) {
    case 0: r = v, g = t, b = p; break;
    case 1: r = q, g = v, b = p; break;
    case 2: r = p, g = v, b = t; break;
    case 3: r = p, g = q, b = v; break;
    case 4: r = t, g = p, b = v; break;
    default: r = v, g = p, b = q; break;
  }
}

inline double clamp255(double v) noexcept { return std::clamp(v, 0.0, 255.0); }

}  // namespace detail

// Applies brightness, contrast, saturation, hue in that order on a double
// buffer, clamping to [0,255] after each stage and rounding once at the end.
inline Image color_jitter_apply(const Image& img, const JitterFactors& f) {
  Plane3 p(img);
  auto& v = p.values;
  if (f.brightness != 1.0) {
    for (double& x : v) x = detail::clamp255(x * f.brightness);
  }
  if (f.contrast != 1.0) {
    double mean = 0.0;
    for (std::size_t i = 0; i < v.size(); i += 3) mean += luma(v[i], v[i + 1], v[i + 2]);
    mean /= static_cast<double>(v.size() / 3);
    for (double& x : v) x = detail::clamp255(f.contrast * x + (1.0 - f.contrast) * mean);
  }
  if (f.saturation != 1.0) {
    for (std::size_t i = 0; i < v.size(); i += 3) {
      const double g = luma(v[i], v[i + 1], v[i + 2]);
      for (std::size_t c = 0; c < 3; ++c) {
        v[i + c] = detail::clamp255(f.saturation * v[i + c] + (1.0 - f.saturation) * g);
      }
    }
  }
  if (f.hue_shift != 0.0) {
    for (std::size_t i = 0; i < v.size(); i += 3) detail::rotate_hue(v[i], v[i + 1], v[i + 2], f.hue_shift);
  }
  return p.to_image();
}

inline Image color_jitter(const Image& img, const JitterStrengths& s, Rng& rng) {
  return color_jitter_apply(img, draw_jitter(s, rng));
}

// Cumulative-histogram remap per channel:
//   lut[v] = round((cdf[v] - cdf_min) * 255 / (N - cdf_min)),
// where cdf_min is the count of the smallest present value. A channel with a
// single distinct value is left unchanged.
inline Image equalize(const Image& img) {
  Image out = img;
  const std::size_t n = img.pixel_count();
  for (int c = 0; c < 3; ++c) {
    std::array<std::size_t, 256> hist{};
    for (std::size_t p = 0; p < n; ++p) ++hist[img.data()[p * 3 + c]];
    std::size_t cdf_min = 0;
    for (std::size_t h : hist) {
      if (h > 0) {
        cdf_min = h;
        break;
      }
    }
    if (cdf_min == n) continue;
    std::array<std::uint8_t, 256> lut{};
    std::size_t cdf = 0;
    for (int v = 0; v < 256; ++v) {
      cdf += hist[v];
      const double mapped = cdf < cdf_min ? 0.0
                                          : static_cast<double>(cdf - cdf_min) * 255.0 /
                                                static_cast<double>(n - cdf_min);
      lut[v] = to_u8(mapped);
    }
    for (std::size_t p = 0; p < n; ++p) out.data()[p * 3 + c] = lut[img.data()[p * 3 + c]];
  }
  return out;
}

using ChannelPermutation = std::array<int, 3>;

// Output channel c takes input channel perm[c].
inline Image channel_shuffle_apply(const Image& img, const ChannelPermutation& perm) {
  std::array<bool, 3> seen{};
  for (int c : perm) {
    if (c < 0 || c > 2 || seen[c]) throw ValidationError("channel_shuffle: not a permutation");
    seen[c] = true;
  }
  Image out = img;
  auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); i += 3) {
    for (int c = 0; c < 3; ++c) dst[i + c] = src[i + perm[c]];
  }
  return out;
}

inline constexpr std::array<ChannelPermutation, 6> kChannelPermutations = {{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

inline Image channel_shuffle(const Image& img, Rng& rng) {
  return channel_shuffle_apply(img, kChannelPermutations[rng.below(6)]);
}

}  // namespace groupaug::kernels
