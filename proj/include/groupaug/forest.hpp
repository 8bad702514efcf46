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

// Random-forest regressor over unit-cube inputs. Shared by the BO surrogate
// (per-tree spread feeds expected improvement) and by the fANOVA importance
// analysis (which walks the leaf partitions).

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "groupaug/errors.hpp"
#include "groupaug/rng.hpp"

namespace groupaug {

struct ForestParams {
  int trees = 64;
  int min_leaf = 3;
  double feature_fraction = 5.0 / 6.0;  // features tried per split, rounded up
  bool bootstrap = true;
  int max_depth = 40;
};

class RegressionTree {
 public:
  struct Node {
    int feature = -1;  // -1: leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
  };

  // Axis-aligned leaf cell of [0,1]^d.
  struct Leaf {
    std::vector<double> lo, hi;
    double value;
  };

  RegressionTree() = default;

  // `x` is row-major n x d.
  void fit(std::span<const double> x, std::span<const double> y, std::size_t d, std::vector<std::size_t> rows,
           const ForestParams& params, Rng& rng) {
    d_ = d;
    nodes_.clear();
    build(x, y, rows, 0, params, rng);
  }

  double predict(std::span<const double> point) const {
    int i = 0;
    while (nodes_[static_cast<std::size_t>(i)].feature >= 0) {
      const Node& n = nodes_[static_cast<std::size_t>(i)];
      i = point[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes_[static_cast<std::size_t>(i)].value;
  }

  std::vector<Leaf> leaves() const {
    std::vector<Leaf> out;
    Leaf root{std::vector<double>(d_, 0.0), std::vector<double>(d_, 1.0), 0.0};
    collect(0, root, out);
    return out;
  }

  const std::vector<Node>& nodes() const noexcept { return nodes_; }

 private:
  int build(std::span<const double> x, std::span<const double> y, std::vector<std::size_t>& rows, int depth,
            const ForestParams& params, Rng& rng) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    double mean = 0.0;
    for (auto r : rows) mean += y[r];
    mean /= static_cast<double>(rows.size());
    nodes_.back().value = mean;

    const auto min_leaf = static_cast<std::size_t>(std::max(1, params.min_leaf));
    if (rows.size() < 2 * min_leaf || depth >= params.max_depth) return id;

    std::vector<std::size_t> features(d_);
    std::iota(features.begin(), features.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(features));
    const auto tried = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(params.feature_fraction * static_cast<double>(d_))), 1, d_);

    double parent_sse = 0.0;
    for (auto r : rows) parent_sse += (y[r] - mean) * (y[r] - mean);

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_sse = parent_sse;
    std::vector<std::size_t> sorted = rows;
    for (std::size_t fi = 0; fi < tried; ++fi) {
      const std::size_t f = features[fi];
      auto key = [&](std::size_t r) { return x[r * d_ + f]; };
      std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
        return key(a) < key(b) || (key(a) == key(b) && a < b);
      });
      double left_sum = 0.0, left_sq = 0.0;
      double total_sum = 0.0, total_sq = 0.0;
      for (auto r : sorted) {
        total_sum += y[r];
        total_sq += y[r] * y[r];
      }
      const std::size_t n = sorted.size();
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left_sum += y[sorted[i]];
        left_sq += y[sorted[i]] * y[sorted[i]];
        const std::size_t nl = i + 1, nr = n - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double a = key(sorted[i]), b = key(sorted[i + 1]);
        if (!(a < b)) continue;
        const double right_sum = total_sum - left_sum, right_sq = total_sq - left_sq;
        const double sse = (left_sq - left_sum * left_sum / static_cast<double>(nl)) +
                           (right_sq - right_sum * right_sum / static_cast<double>(nr));
        if (sse < best_sse - 1e-12 * (1.0 + std::abs(parent_sse))) {
          best_sse = sse;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (a + b);
        }
      }
    }
    if (best_feature < 0) return id;

    std::vector<std::size_t> left_rows, right_rows;
    for (auto r : rows) {
      (x[r * d_ + static_cast<std::size_t>(best_feature)] <= best_threshold ? left_rows : right_rows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = build(x, y, left_rows, depth + 1, params, rng);
    const int r = build(x, y, right_rows, depth + 1, params, rng);
    Node& node = nodes_[static_cast<std::size_t>(id)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  void collect(int i, Leaf cell, std::vector<Leaf>& out) const {
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    if (n.feature < 0) {
      cell.value = n.value;
      out.push_back(std::move(cell));
      return;
    }
    const auto f = static_cast<std::size_t>(n.feature);
    Leaf left = cell, right = std::move(cell);
    left.hi[f] = std::min(left.hi[f], n.threshold);
    right.lo[f] = std::max(right.lo[f], n.threshold);
    collect(n.left, std::move(left), out);
    collect(n.right, std::move(right), out);
  }

  std::size_t d_ = 0;
  std::vector<Node> nodes_;
};

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;  // spread of per-tree predictions
};

class RandomForest {
 public:
  explicit RandomForest(ForestParams params = {}) : params_(params) {}

  // `x` is row-major, rows of length d, values in [0, 1].
  void fit(std::span<const double> x, std::span<const double> y, std::size_t d, Rng& rng) {
    if (d == 0 || y.empty() || x.size() != y.size() * d) throw ValidationError("RandomForest::fit: shape mismatch");
    if (params_.trees < 1) throw ValidationError("RandomForest: trees must be >= 1");
    d_ = d;
    trees_.assign(static_cast<std::size_t>(params_.trees), RegressionTree{});
    const std::size_t n = y.size();
    for (auto& tree : trees_) {
      Rng tree_rng = rng.split();
      std::vector<std::size_t> rows(n);
      if (params_.bootstrap) {
        for (auto& r : rows) r = static_cast<std::size_t>(tree_rng.below(n));
      } else {
        std::iota(rows.begin(), rows.end(), std::size_t{0});
      }
      tree.fit(x, y, d, std::move(rows), params_, tree_rng);
    }
  }

  Prediction predict(std::span<const double> point) const {
    double sum = 0.0, sq = 0.0;
    for (const auto& t : trees_) {
      const double v = t.predict(point);
      sum += v;
      sq += v * v;
    }
    const double n = static_cast<double>(trees_.size());
    const double mean = sum / n;
    return {mean, std::max(0.0, sq / n - mean * mean)};
  }

  const std::vector<RegressionTree>& trees() const noexcept { return trees_; }
  std::size_t dims() const noexcept { return d_; }
  const ForestParams& params() const noexcept { return params_; }

 private:
  ForestParams params_;
  std::size_t d_ = 0;
  std::vector<RegressionTree> trees_;
};

}  // namespace groupaug
