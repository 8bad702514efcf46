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

// First-order functional ANOVA importance from a random forest.
//
// For one tree f on the unit cube with uniform measure, the leaves are boxes
// with constant values. The marginal of dimension j,
//   a_j(x_j) = integral of f over all other coordinates,
// is piecewise constant between the leaf edges along j, so
//   V_j = integral (a_j - f0)^2 dx_j   and   V = sum_leaves vol * (value - f0)^2
// are exact. Each tree contributes V_j / V; trees with V = 0 are skipped and
// the rest are averaged.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "groupaug/bo.hpp"
#include "groupaug/errors.hpp"
#include "groupaug/forest.hpp"
#include "groupaug/prior.hpp"
#include "groupaug/rng.hpp"
#include "groupaug/search_space.hpp"

namespace groupaug {

enum class ImportanceSubset { all, best };

inline std::string_view to_string(ImportanceSubset s) { return s == ImportanceSubset::all ? "all" : "best"; }

struct FanovaOptions {
  double best_fraction = 0.25;  // "best" = this top fraction of non-collapsed trials
  ForestParams forest;
  std::uint64_t seed = 0;
};

struct SubsetImportance {
  std::vector<double> shares;  // one per dimension, in [0, 1]
  bool constant = false;       // scores had no variance; shares are all 0
  std::size_t n_trials = 0;
};

// Per-tree first-order shares. Returns nullopt when the tree is constant.
inline std::optional<std::vector<double>> tree_first_order_shares(const RegressionTree& tree, std::size_t d) {
  const auto leaves = tree.leaves();
  double f0 = 0.0;
  std::vector<double> vols(leaves.size());
  for (std::size_t l = 0; l < leaves.size(); ++l) {
    double v = 1.0;
    for (std::size_t i = 0; i < d; ++i) v *= leaves[l].hi[i] - leaves[l].lo[i];
    vols[l] = v;
    f0 += v * leaves[l].value;
  }
  double total = 0.0;
  for (std::size_t l = 0; l < leaves.size(); ++l) total += vols[l] * (leaves[l].value - f0) * (leaves[l].value - f0);
  if (!(total > 1e-300)) return std::nullopt;

  std::vector<double> shares(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> edges{0.0, 1.0};
    for (const auto& leaf : leaves) {
      edges.push_back(leaf.lo[j]);
      edges.push_back(leaf.hi[j]);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    double vj = 0.0;
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
      const double a = edges[s], b = edges[s + 1];
      const double mid = 0.5 * (a + b);
      double marginal = 0.0;
      for (std::size_t l = 0; l < leaves.size(); ++l) {
        if (mid < leaves[l].lo[j] || mid > leaves[l].hi[j]) continue;
        const double width = leaves[l].hi[j] - leaves[l].lo[j];
        marginal += leaves[l].value * vols[l] / width;
      }
      vj += (b - a) * (marginal - f0) * (marginal - f0);
    }
    shares[j] = vj / total;
  }
  return shares;
}

// Importance from raw unit-cube data (row-major n x d).
inline SubsetImportance fanova_from_data(std::span<const double> x, std::span<const double> y, std::size_t d,
                                         const ForestParams& params, Rng& rng) {
  SubsetImportance out;
  out.n_trials = y.size();
  out.shares.assign(d, 0.0);
  const auto [mn, mx] = std::minmax_element(y.begin(), y.end());
  if (y.empty() || *mn == *mx) {
    out.constant = true;
    return out;
  }
  RandomForest forest(params);
  forest.fit(x, y, d, rng);
  std::size_t used = 0;
  for (const auto& tree : forest.trees()) {
    const auto s = tree_first_order_shares(tree, d);
    if (!s) continue;
    ++used;
    for (std::size_t j = 0; j < d; ++j) out.shares[j] += (*s)[j];
  }
  if (used == 0) {
    out.constant = true;
    return out;
  }
  for (double& s : out.shares) s /= static_cast<double>(used);
  return out;
}

// Non-collapsed completed trials, best first (ties: lower id first).
inline std::vector<const Trial*> ranked_usable(std::span<const Trial> trials) {
  std::vector<const Trial*> out;
  for (const auto& t : trials) {
    if (t.usable()) out.push_back(&t);
  }
  std::stable_sort(out.begin(), out.end(), [](const Trial* a, const Trial* b) {
    return *a->score > *b->score || (*a->score == *b->score && a->id < b->id);
  });
  return out;
}

inline std::size_t best_subset_size(std::size_t n, double fraction) {
  return std::min(n, std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)))));
}

inline SubsetImportance fanova_importance(std::span<const Trial> trials, const SearchSpace& space,
                                          ImportanceSubset subset, const FanovaOptions& options = {}) {
  if (!(options.best_fraction > 0.0 && options.best_fraction <= 1.0)) {
    throw ValidationError("best_fraction must lie in (0, 1]");
  }
  const std::size_t d = space.size();
  auto ranked = ranked_usable(trials);
  if (ranked.size() < 2 * d) {
    throw ValidationError("insufficient trials: fANOVA needs at least " + std::to_string(2 * d) +
                          " completed non-collapsed trials, have " + std::to_string(ranked.size()));
  }
  if (subset == ImportanceSubset::best) ranked.resize(best_subset_size(ranked.size(), options.best_fraction));
  std::vector<double> x, y;
  for (const Trial* t : ranked) {
    const auto u = to_unit_cube(t->configuration);
    x.insert(x.end(), u.begin(), u.end());
    y.push_back(*t->score);
  }
  Rng rng = Rng::derive(options.seed, subset == ImportanceSubset::all ? 0 : 1);
  return fanova_from_data(x, y, d, options.forest, rng);
}

inline int display_percent(double share) { return static_cast<int>(std::lround(100.0 * share)); }

struct ImportanceReport {
  std::vector<std::string> dimensions;
  SubsetImportance all;
  SubsetImportance best;
  double best_fraction = 0.25;
};

inline ImportanceReport importance_report(std::span<const Trial> trials, const SearchSpace& space,
                                          const FanovaOptions& options = {}) {
  ImportanceReport r;
  for (const auto& d : space.dimensions) r.dimensions.push_back(d.name);
  r.all = fanova_importance(trials, space, ImportanceSubset::all, options);
  r.best = fanova_importance(trials, space, ImportanceSubset::best, options);
  r.best_fraction = options.best_fraction;
  return r;
}

}  // namespace groupaug
