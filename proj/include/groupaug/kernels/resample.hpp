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

// Resampling primitives shared by the geometric and non-rigid kernels:
// reflect-101 border handling, Keys bicubic interpolation (a = -0.75) and
// separable Gaussian filtering on double-precision planes.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "groupaug/errors.hpp"
#include "groupaug/image.hpp"

namespace groupaug::kernels {

// Index into [0, n) by reflecting without repeating the edge sample
// (gfedcb|abcdefgh|gfedcba).
inline int reflect101(int i, int n) noexcept {
  if (n == 1) return 0;
  const int period = 2 * n - 2;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

// Three-channel double buffer with the Image layout.
struct Plane3 {
  int height = 0;
  int width = 0;
  std::vector<double> values;

  Plane3(int h, int w) : height(h), width(w), values(static_cast<std::size_t>(h) * w * 3, 0.0) {}

  explicit Plane3(const Image& img) : height(img.height()), width(img.width()) {
    values.assign(img.data().begin(), img.data().end());
  }

  double& at(int y, int x, int c) { return values[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
  double at(int y, int x, int c) const {
    return values[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }

  Image to_image() const {
    std::vector<std::uint8_t> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), to_u8);
    return Image(height, width, std::move(out));
  }
};

inline constexpr double kCubicA = -0.75;

// Weights for the four taps at offsets -1, 0, 1, 2 from floor(x), t = x - floor(x).
// At t == 0 the weights are exactly (0, 1, 0, 0).
inline std::array<double, 4> cubic_weights(double t) noexcept {
  constexpr double a = kCubicA;
  auto near = [](double x) { return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0; };
  auto far = [](double x) { return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a; };
  return {far(t + 1.0), near(t), near(1.0 - t), far(2.0 - t)};
}

// Bicubic sample of all three channels at a real-valued position.
inline void sample_bicubic(const Image& img, double sx, double sy, double out[3]) noexcept {
  const double fx = std::floor(sx);
  const double fy = std::floor(sy);
  const auto wx = cubic_weights(sx - fx);
  const auto wy = cubic_weights(sy - fy);
  const int x0 = static_cast<int>(fx) - 1;
  const int y0 = static_cast<int>(fy) - 1;
  out[0] = out[1] = out[2] = 0.0;
  for (int j = 0; j < 4; ++j) {
    if (wy[j] == 0.0) continue;
    const int yy = reflect101(y0 + j, img.height());
    for (int i = 0; i < 4; ++i) {
      if (wx[i] == 0.0) continue;
      const int xx = reflect101(x0 + i, img.width());
      const double w = wy[j] * wx[i];
      for (int c = 0; c < 3; ++c) out[c] += w * img.at(yy, xx, c);
    }
  }
}

// Output pixel (x, y) takes the input sampled at (map_x[k], map_y[k]),
// k = y * width + x.
inline Image remap(const Image& img, std::span<const double> map_x, std::span<const double> map_y) {
  const std::size_t n = img.pixel_count();
  if (map_x.size() != n || map_y.size() != n) throw ValidationError("remap: map size mismatch");
  Image out(img.height(), img.width());
  double px[3];
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const std::size_t k = static_cast<std::size_t>(y) * img.width() + x;
      sample_bicubic(img, map_x[k], map_y[k], px);
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = to_u8(px[c]);
    }
  }
  return out;
}

// Normalized Gaussian taps of odd length `size`.
inline std::vector<double> gaussian_taps(double sigma, int size) {
  if (size < 1 || size % 2 == 0) throw ValidationError("gaussian kernel size must be odd and >= 1");
  std::vector<double> taps(static_cast<std::size_t>(size));
  const int r = size / 2;
  if (size == 1 || sigma <= 0.0) {
    std::fill(taps.begin(), taps.end(), 0.0);
    taps[static_cast<std::size_t>(r)] = 1.0;
    return taps;
  }
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    const double w = std::exp(-0.5 * (i * i) / (sigma * sigma));
    taps[static_cast<std::size_t>(i + r)] = w;
    sum += w;
  }
  for (double& w : taps) w /= sum;
  return taps;
}

// Separable correlation of a single-channel field with reflect-101 borders.
inline std::vector<double> filter_separable(std::span<const double> field, int height, int width,
                                            std::span<const double> taps) {
  const int r = static_cast<int>(taps.size()) / 2;
  std::vector<double> tmp(field.size(), 0.0), out(field.size(), 0.0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) {
        acc += taps[static_cast<std::size_t>(i + r)] *
               field[static_cast<std::size_t>(y) * width + reflect101(x + i, width)];
      }
      tmp[static_cast<std::size_t>(y) * width + x] = acc;
    }
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) {
        acc += taps[static_cast<std::size_t>(i + r)] *
               tmp[static_cast<std::size_t>(reflect101(y + i, height)) * width + x];
      }
      out[static_cast<std::size_t>(y) * width + x] = acc;
    }
  }
  return out;
}

}  // namespace groupaug::kernels
