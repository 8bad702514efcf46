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

// Geometric and non-rigid kernels. Every warp is expressed as an inverse
// coordinate map (output pixel -> input position) followed by a single
// bicubic resample with reflect-101 borders.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "groupaug/errors.hpp"
#include "groupaug/image.hpp"
#include "groupaug/kernels/resample.hpp"
#include "groupaug/rng.hpp"

namespace groupaug::kernels {

inline Image horizontal_flip(const Image& img) {
  Image out = img;
  const int w = img.width();
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = img.at(y, w - 1 - x, c);
    }
  }
  return out;
}

// cos/sin of an angle in degrees, exact at multiples of 90.
inline std::array<double, 2> cos_sin_deg(double deg) noexcept {
  const double r = std::fmod(deg, 360.0);
  const double q = r / 90.0;
  if (q == std::floor(q)) {
    switch ((static_cast<int>(q) % 4 + 4) % 4) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double rad = deg * std::numbers::pi / 180.0;
  return {std::cos(rad), std::sin(rad)};
}

struct AffineParams {
  double angle_deg = 0.0;  // counter-clockwise on screen
  double scale = 1.0;
  double shift_x = 0.0;  // fraction of width
  double shift_y = 0.0;  // fraction of height
};

struct ShiftScaleRotateLimits {
  double shift = 0.0625;
  double scale = 0.1;
  double rotate = 45.0;
};

// Rotation and scaling about the image center ((w-1)/2, (h-1)/2), then shift.
inline Image shift_scale_rotate_apply(const Image& img, const AffineParams& p) {
  if (!(p.scale > 0.0)) throw ValidationError("shift_scale_rotate: scale must be positive");
  const int h = img.height();
  const int w = img.width();
  const double cx = (w - 1) / 2.0;
  const double cy = (h - 1) / 2.0;
  const auto [cs, sn] = cos_sin_deg(p.angle_deg);
  const double tx = p.shift_x * w;
  const double ty = p.shift_y * h;
  std::vector<double> mx(img.pixel_count()), my(img.pixel_count());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      // Forward (y down): dst = s * [[c, s], [-s, c]] (src - ctr) + ctr + t.
      const double u = (x - cx - tx) / p.scale;
      const double v = (y - cy - ty) / p.scale;
      const std::size_t k = static_cast<std::size_t>(y) * w + x;
      mx[k] = cs * u - sn * v + cx;
      my[k] = sn * u + cs * v + cy;
    }
  }
  return remap(img, mx, my);
}

inline void validate(const ShiftScaleRotateLimits& l) {
  if (l.shift < 0.0 || l.shift > 1.0) throw ValidationError("shift_scale_rotate: shift limit in [0, 1]");
  if (l.scale < 0.0 || l.scale >= 1.0) throw ValidationError("shift_scale_rotate: scale limit in [0, 1)");
  if (l.rotate < 0.0 || l.rotate > 180.0) throw ValidationError("shift_scale_rotate: rotate limit in [0, 180]");
}

// Draw order: angle, scale, shift x, shift y.
inline AffineParams draw_affine(const ShiftScaleRotateLimits& l, Rng& rng) {
  validate(l);
  AffineParams p;
  p.angle_deg = rng.uniform(-l.rotate, l.rotate);
  p.scale = 1.0 + rng.uniform(-l.scale, l.scale);
  p.shift_x = rng.uniform(-l.shift, l.shift);
  p.shift_y = rng.uniform(-l.shift, l.shift);
  return p;
}

inline Image shift_scale_rotate(const Image& img, const ShiftScaleRotateLimits& l, Rng& rng) {
  return shift_scale_rotate_apply(img, draw_affine(l, rng));
}

// Output pixel (x, y) samples the input at (x + dx[k], y + dy[k]).
inline Image displace(const Image& img, std::span<const double> dx, std::span<const double> dy) {
  if (dx.size() != img.pixel_count() || dy.size() != img.pixel_count()) {
    throw ValidationError("displace: field size mismatch");
  }
  std::vector<double> mx(dx.size()), my(dy.size());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const std::size_t k = static_cast<std::size_t>(y) * img.width() + x;
      mx[k] = x + dx[k];
      my[k] = y + dy[k];
    }
  }
  return remap(img, mx, my);
}

struct ElasticParams {
  double alpha = 0.5;
  double sigma = 10.0;
  double alpha_affine = 5.0;
};

struct GridDistortionParams {
  int num_steps = 5;
  double distort_limit = 0.3;
};

struct OpticalDistortionParams {
  double distort_limit = 0.5;
  double shift_limit = 0.5;  // pixels
};

// Displacement field (dx, dy), one entry per pixel.
struct DisplacementField {
  std::vector<double> dx;
  std::vector<double> dy;
};

// Random affine from perturbing three anchor points around the center by up
// to alpha_affine pixels, composed with a smoothed uniform noise field
// scaled by alpha. Draw order: 6 anchor offsets, dx noise, dy noise.
inline DisplacementField elastic_field(int h, int w, const ElasticParams& p, Rng& rng) {
  if (p.alpha < 0.0 || p.sigma < 0.0 || p.alpha_affine < 0.0) {
    throw ValidationError("elastic_transform: parameters must be non-negative");
  }
  const std::size_t n = static_cast<std::size_t>(h) * w;
  const double cx = (w - 1) / 2.0;
  const double cy = (h - 1) / 2.0;
  const double sq = std::min(h, w) / 3.0;
  const std::array<std::array<double, 2>, 3> anchors = {{{cx + sq, cy + sq}, {cx + sq, cy - sq}, {cx - sq, cy - sq}}};
  std::array<std::array<double, 2>, 3> delta{};
  for (auto& d : delta) {
    d[0] = rng.uniform(-p.alpha_affine, p.alpha_affine);
    d[1] = rng.uniform(-p.alpha_affine, p.alpha_affine);
  }

  // Forward affine M = I + D with D(anchor_i) = delta_i; D solved by Cramer.
  // The inverse map is applied below, so a zero perturbation is exactly identity.
  double m[2][3] = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
  const bool has_affine = delta[0] != std::array<double, 2>{} || delta[1] != std::array<double, 2>{} ||
                          delta[2] != std::array<double, 2>{};
  if (has_affine && sq > 0.0) {
    // Rows of the system: [x_i, y_i, 1] . coeffs = delta_i[r].
    auto det3 = [](const std::array<std::array<double, 3>, 3>& a) {
      return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
             a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
             a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    };
    std::array<std::array<double, 3>, 3> sys{};
    for (int i = 0; i < 3; ++i) sys[i] = {anchors[i][0], anchors[i][1], 1.0};
    const double det = det3(sys);
    for (int r = 0; r < 2; ++r) {
      for (int col = 0; col < 3; ++col) {
        auto replaced = sys;
        for (int i = 0; i < 3; ++i) replaced[i][col] = delta[i][r];
        m[r][col] += det3(replaced) / det;
      }
    }
  }
  const double det_m = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  if (std::abs(det_m) < 1e-12) throw ValidationError("elastic_transform: degenerate affine draw");

  auto noise = [&] {
    std::vector<double> f(n);
    for (double& v : f) v = rng.uniform(-1.0, 1.0);
    if (p.sigma > 0.0) {
      const int radius = static_cast<int>(std::ceil(4.0 * p.sigma));
      const auto taps = gaussian_taps(p.sigma, 2 * radius + 1);
      f = filter_separable(f, h, w, taps);
    }
    for (double& v : f) v *= p.alpha;
    return f;
  };
  const auto ex = noise();
  const auto ey = noise();

  DisplacementField field{std::vector<double>(n), std::vector<double>(n)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t k = static_cast<std::size_t>(y) * w + x;
      const double px = x + ex[k] - m[0][2];
      const double py = y + ey[k] - m[1][2];
      const double sx = (m[1][1] * px - m[0][1] * py) / det_m;
      const double sy = (-m[1][0] * px + m[0][0] * py) / det_m;
      field.dx[k] = sx - x;
      field.dy[k] = sy - y;
    }
  }
  return field;
}

// Piecewise-linear node displacements along one axis of `span` pixels split
// into `steps` cells; both ends stay fixed.
inline std::vector<double> grid_axis_offsets(int length, int steps, std::span<const double> cell_delta) {
  std::vector<double> offsets(static_cast<std::size_t>(length), 0.0);
  const double span = length - 1.0;
  if (span <= 0.0) return offsets;
  const double cell = span / steps;
  double total = 0.0;
  for (double d : cell_delta) total += cell * d;
  std::vector<double> node(static_cast<std::size_t>(steps) + 1, 0.0);
  double acc = 0.0;
  for (int k = 0; k <= steps; ++k) {
    node[static_cast<std::size_t>(k)] = acc - total * k / steps;
    if (k < steps) acc += cell * cell_delta[static_cast<std::size_t>(k)];
  }
  for (int i = 0; i < length; ++i) {
    const double pos = i / cell;
    const int k = std::min(static_cast<int>(pos), steps - 1);
    const double t = pos - k;
    offsets[static_cast<std::size_t>(i)] =
        node[static_cast<std::size_t>(k)] * (1.0 - t) + node[static_cast<std::size_t>(k) + 1] * t;
  }
  return offsets;
}

// Draw order: num_steps x-cell deltas, then num_steps y-cell deltas.
inline DisplacementField grid_distortion_field(int h, int w, const GridDistortionParams& p, Rng& rng) {
  if (p.num_steps < 1) throw ValidationError("grid_distortion: num_steps must be >= 1");
  if (p.distort_limit < 0.0 || p.distort_limit >= 1.0) {
    throw ValidationError("grid_distortion: distort_limit must be in [0, 1)");
  }
  std::vector<double> xs(static_cast<std::size_t>(p.num_steps)), ys(xs.size());
  for (double& d : xs) d = rng.uniform(-p.distort_limit, p.distort_limit);
  for (double& d : ys) d = rng.uniform(-p.distort_limit, p.distort_limit);
  const auto ox = grid_axis_offsets(w, p.num_steps, xs);
  const auto oy = grid_axis_offsets(h, p.num_steps, ys);
  const std::size_t n = static_cast<std::size_t>(h) * w;
  DisplacementField field{std::vector<double>(n), std::vector<double>(n)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t k = static_cast<std::size_t>(y) * w + x;
      field.dx[k] = ox[static_cast<std::size_t>(x)];
      field.dy[k] = oy[static_cast<std::size_t>(y)];
    }
  }
  return field;
}

// Radial lens model with focal lengths (w, h): a point at normalized radius r
// samples the input at factor (1 + k r^2). Draw order: k, center dx, center dy.
inline DisplacementField optical_distortion_field(int h, int w, const OpticalDistortionParams& p, Rng& rng) {
  if (p.distort_limit < 0.0 || p.shift_limit < 0.0) {
    throw ValidationError("optical_distortion: limits must be non-negative");
  }
  const double k = rng.uniform(-p.distort_limit, p.distort_limit);
  const double cx = (w - 1) / 2.0 + rng.uniform(-p.shift_limit, p.shift_limit);
  const double cy = (h - 1) / 2.0 + rng.uniform(-p.shift_limit, p.shift_limit);
  const std::size_t n = static_cast<std::size_t>(h) * w;
  DisplacementField field{std::vector<double>(n), std::vector<double>(n)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double xn = (x - cx) / w;
      const double yn = (y - cy) / h;
      const double r2 = xn * xn + yn * yn;
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      field.dx[i] = (x - cx) * k * r2;
      field.dy[i] = (y - cy) * k * r2;
    }
  }
  return field;
}

enum class DisplacementKind { elastic, grid_distortion, optical_distortion };

inline DisplacementKind parse_displacement_kind(std::string_view s) {
  if (s == "elastic") return DisplacementKind::elastic;
  if (s == "grid_distortion") return DisplacementKind::grid_distortion;
  if (s == "optical_distortion") return DisplacementKind::optical_distortion;
  throw ValidationError("unknown displacement kind: " + std::string(s));
}

inline Image elastic_transform(const Image& img, const ElasticParams& p, Rng& rng) {
  const auto f = elastic_field(img.height(), img.width(), p, rng);
  return displace(img, f.dx, f.dy);
}

inline Image grid_distortion(const Image& img, const GridDistortionParams& p, Rng& rng) {
  const auto f = grid_distortion_field(img.height(), img.width(), p, rng);
  return displace(img, f.dx, f.dy);
}

inline Image optical_distortion(const Image& img, const OpticalDistortionParams& p, Rng& rng) {
  const auto f = optical_distortion_field(img.height(), img.width(), p, rng);
  return displace(img, f.dx, f.dy);
}

// Scale-and-aspect crop box resized back to the input size. Used by the
// baseline policy only.
struct CropBox {
  int x0 = 0, y0 = 0, width = 0, height = 0;
};

// Area fraction in [scale_lo, 1], aspect ratio log-uniform in [3/4, 4/3];
// ten attempts, then the full image.
inline CropBox draw_resized_crop(int h, int w, Rng& rng, double scale_lo = 0.2) {
  const double area = static_cast<double>(h) * w;
  for (int attempt = 0; attempt < 10; ++attempt) {
    const double target = area * rng.uniform(scale_lo, 1.0);
    const double ratio = std::exp(rng.uniform(std::log(3.0 / 4.0), std::log(4.0 / 3.0)));
    const int cw = static_cast<int>(std::lround(std::sqrt(target * ratio)));
    const int ch = static_cast<int>(std::lround(std::sqrt(target / ratio)));
    if (cw >= 1 && ch >= 1 && cw <= w && ch <= h) {
      CropBox box;
      box.width = cw;
      box.height = ch;
      box.y0 = static_cast<int>(rng.uniform_int(0, h - ch));
      box.x0 = static_cast<int>(rng.uniform_int(0, w - cw));
      return box;
    }
  }
  return CropBox{0, 0, w, h};
}

inline Image crop_resize(const Image& img, const CropBox& box) {
  const int h = img.height();
  const int w = img.width();
  std::vector<double> mx(img.pixel_count()), my(img.pixel_count());
  const double sx = static_cast<double>(box.width) / w;
  const double sy = static_cast<double>(box.height) / h;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t k = static_cast<std::size_t>(y) * w + x;
      mx[k] = box.x0 + (x + 0.5) * sx - 0.5;
      my[k] = box.y0 + (y + 0.5) * sy - 0.5;
    }
  }
  return remap(img, mx, my);
}

inline Image random_resized_crop(const Image& img, Rng& rng) {
  return crop_resize(img, draw_resized_crop(img.height(), img.width(), rng));
}

}  // namespace groupaug::kernels
