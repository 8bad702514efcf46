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

// Exotic-group kernels: cutout and random grid shuffle.

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "groupaug/errors.hpp"
#include "groupaug/image.hpp"
#include "groupaug/rng.hpp"

namespace groupaug::kernels {

struct Rect {
  int y = 0, x = 0, height = 0, width = 0;
};

// Fills each rectangle (clipped to the image) with zeros.
inline Image cutout_apply(const Image& img, const std::vector<Rect>& holes) {
  Image out = img;
  for (const Rect& r : holes) {
    const int y1 = std::min(img.height(), r.y + r.height);
    const int x1 = std::min(img.width(), r.x + r.width);
    for (int y = std::max(0, r.y); y < y1; ++y) {
      for (int x = std::max(0, r.x); x < x1; ++x) {
        for (int c = 0; c < 3; ++c) out.at(y, x, c) = 0;
      }
    }
  }
  return out;
}

struct CutoutParams {
  int num_holes = 4;
  int hole_height = 0;  // 0: ceil(height / 8)
  int hole_width = 0;   // 0: ceil(width / 8)
};

// Hole origins uniform over positions that keep the hole inside the image.
// Draw order per hole: y, then x.
inline std::vector<Rect> draw_holes(int h, int w, const CutoutParams& p, Rng& rng) {
  if (p.num_holes < 0) throw ValidationError("cutout: num_holes must be >= 0");
  const int hh = p.hole_height > 0 ? p.hole_height : (h + 7) / 8;
  const int hw = p.hole_width > 0 ? p.hole_width : (w + 7) / 8;
  if (hh > h || hw > w) throw ValidationError("cutout: hole larger than image");
  std::vector<Rect> holes;
  holes.reserve(static_cast<std::size_t>(p.num_holes));
  for (int i = 0; i < p.num_holes; ++i) {
    Rect r;
    r.height = hh;
    r.width = hw;
    r.y = static_cast<int>(rng.uniform_int(0, h - hh));
    r.x = static_cast<int>(rng.uniform_int(0, w - hw));
    holes.push_back(r);
  }
  return holes;
}

inline Image cutout(const Image& img, const CutoutParams& p, Rng& rng) {
  return cutout_apply(img, draw_holes(img.height(), img.width(), p, rng));
}

// Tile layout of a grid x grid partition. Row/column boundaries are at
// multiples of side/grid; the last row and column absorb the remainder.
struct TileGrid {
  int grid = 1;
  std::vector<int> row_start, col_start;  // grid + 1 entries each

  TileGrid(int h, int w, int g) : grid(g) {
    if (g < 1) throw ValidationError("random_grid_shuffle: grid must be >= 1");
    if (g > h || g > w) throw ValidationError("random_grid_shuffle: grid exceeds image side");
    for (int i = 0; i < g; ++i) {
      row_start.push_back(i * (h / g));
      col_start.push_back(i * (w / g));
    }
    row_start.push_back(h);
    col_start.push_back(w);
  }

  int tiles() const noexcept { return grid * grid; }
  Rect tile(int index) const {
    const int r = index / grid, c = index % grid;
    return Rect{row_start[r], col_start[c], row_start[r + 1] - row_start[r], col_start[c + 1] - col_start[c]};
  }
};

// Destination tile i receives source tile perm[i]; tiles must share a shape.
inline Image grid_shuffle_apply(const Image& img, int grid, const std::vector<int>& perm) {
  const TileGrid layout(img.height(), img.width(), grid);
  if (perm.size() != static_cast<std::size_t>(layout.tiles())) {
    throw ValidationError("random_grid_shuffle: permutation size mismatch");
  }
  std::vector<bool> seen(perm.size(), false);
  for (int s : perm) {
    if (s < 0 || s >= layout.tiles() || seen[static_cast<std::size_t>(s)]) {
      throw ValidationError("random_grid_shuffle: not a permutation");
    }
    seen[static_cast<std::size_t>(s)] = true;
  }
  Image out = img;
  for (int i = 0; i < layout.tiles(); ++i) {
    const Rect dst = layout.tile(i);
    const Rect src = layout.tile(perm[static_cast<std::size_t>(i)]);
    if (dst.height != src.height || dst.width != src.width) {
      throw ValidationError("random_grid_shuffle: tiles of different shape cannot swap");
    }
    for (int y = 0; y < dst.height; ++y) {
      for (int x = 0; x < dst.width; ++x) {
        for (int c = 0; c < 3; ++c) out.at(dst.y + y, dst.x + x, c) = img.at(src.y + y, src.x + x, c);
      }
    }
  }
  return out;
}

// Uniform permutation within each class of equal-shaped tiles, classes
// visited in order of first appearance.
inline std::vector<int> draw_tile_permutation(int h, int w, int grid, Rng& rng) {
  const TileGrid layout(h, w, grid);
  std::map<std::pair<int, int>, std::vector<int>> classes;
  std::vector<std::pair<int, int>> order;
  for (int i = 0; i < layout.tiles(); ++i) {
    const Rect t = layout.tile(i);
    auto key = std::make_pair(t.height, t.width);
    if (!classes.contains(key)) order.push_back(key);
    classes[key].push_back(i);
  }
  std::vector<int> perm(static_cast<std::size_t>(layout.tiles()));
  for (const auto& key : order) {
    const auto& members = classes[key];
    auto shuffled = members;
    rng.shuffle(std::span<int>(shuffled));
    for (std::size_t j = 0; j < members.size(); ++j) perm[static_cast<std::size_t>(members[j])] = shuffled[j];
  }
  return perm;
}

inline Image random_grid_shuffle(const Image& img, int grid, Rng& rng) {
  return grid_shuffle_apply(img, grid, draw_tile_permutation(img.height(), img.width(), grid, rng));
}

}  // namespace groupaug::kernels
