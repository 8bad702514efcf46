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

// Quality-group kernels: Gaussian blur and additive Gaussian noise.

#include <cmath>
#include <vector>

#include "groupaug/errors.hpp"
#include "groupaug/image.hpp"
#include "groupaug/kernels/resample.hpp"
#include "groupaug/rng.hpp"

namespace groupaug::kernels {

// 2*ceil(3*sigma)+1; 1 for sigma <= 0.
inline int auto_kernel_size(double sigma) noexcept {
  if (!(sigma > 0.0)) return 1;
  return 2 * static_cast<int>(std::ceil(3.0 * sigma)) + 1;
}

// Separable Gaussian blur, reflect-101 padded. kernel_size 0 picks the size
// from sigma.
inline Image gaussian_blur_apply(const Image& img, double sigma, int kernel_size = 0) {
  if (sigma < 0.0) throw ValidationError("gaussian_blur: sigma must be >= 0");
  if (kernel_size == 0) kernel_size = auto_kernel_size(sigma);
  const auto taps = gaussian_taps(sigma, kernel_size);
  if (kernel_size == 1) return img;
  const int h = img.height();
  const int w = img.width();
  Plane3 out(h, w);
  std::vector<double> channel(img.pixel_count());
  for (int c = 0; c < 3; ++c) {
    for (std::size_t p = 0; p < channel.size(); ++p) channel[p] = img.data()[p * 3 + c];
    const auto filtered = filter_separable(channel, h, w, taps);
    for (std::size_t p = 0; p < channel.size(); ++p) out.values[p * 3 + c] = filtered[p];
  }
  return out.to_image();
}

struct GaussianBlurParams {
  double sigma_min = 0.1;
  double sigma_max = 2.0;
  int kernel_size = 0;  // 0: auto from the drawn sigma
};

inline Image gaussian_blur(const Image& img, const GaussianBlurParams& p, Rng& rng) {
  if (p.sigma_min < 0.0 || p.sigma_max < p.sigma_min) {
    throw ValidationError("gaussian_blur: need 0 <= sigma_min <= sigma_max");
  }
  if (p.kernel_size < 0 || (p.kernel_size != 0 && p.kernel_size % 2 == 0)) {
    throw ValidationError("gaussian_blur: kernel_size must be odd (or 0 for auto)");
  }
  const double sigma = rng.uniform(p.sigma_min, p.sigma_max);
  return gaussian_blur_apply(img, sigma, p.kernel_size);
}

// i.i.d. N(0, variance) added to every channel value, then clamp and round.
inline Image gauss_noise_apply(const Image& img, double variance, Rng& rng) {
  if (variance < 0.0) throw ValidationError("gauss_noise: variance must be >= 0");
  const double sd = std::sqrt(variance);
  Image out = img;
  for (auto& v : out.data()) v = to_u8(v + sd * rng.normal());
  return out;
}

struct GaussNoiseParams {
  double var_min = 10.0;
  double var_max = 50.0;
};

inline Image gauss_noise(const Image& img, const GaussNoiseParams& p, Rng& rng) {
  if (p.var_min < 0.0 || p.var_max < p.var_min) {
    throw ValidationError("gauss_noise: need 0 <= var_min <= var_max");
  }
  return gauss_noise_apply(img, rng.uniform(p.var_min, p.var_max), rng);
}

}  // namespace groupaug::kernels
