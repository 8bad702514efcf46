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

// Per-dimension density estimates over four trial groups: top, bad, all and
// collapsed.
//
// Numeric dimensions: Gaussian KDE in the search coordinate (log for
// log-scaled dimensions) on a 256-point grid spanning the range. The kernel is
// reflected at both range ends so mass does not leak out. Bandwidth is
// Silverman's rule, 0.9 * min(sd, IQR / 1.34) * n^(-1/5), floored at 1.5 grid
// spacings. Categorical dimensions report choice frequencies instead.
//
// Groups: non-collapsed completed trials ranked by score; "top" is the best
// max(1, floor(top_fraction * n)), "bad" the worst max(1, floor(bad_fraction * n))
// capped so the two never overlap. "all" is every trial, "collapsed" every
// completed trial flagged collapsed. An empty group is flagged, not an error.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "groupaug/bo.hpp"
#include "groupaug/errors.hpp"
#include "groupaug/fanova.hpp"
#include "groupaug/prior.hpp"
#include "groupaug/search_space.hpp"

namespace groupaug {

inline constexpr std::size_t kDensityGridPoints = 256;
inline constexpr std::size_t kDensityMinTrials = 10;

enum class DensityGroup { top, bad, all, collapsed };
inline constexpr std::array<DensityGroup, 4> kDensityGroups = {DensityGroup::top, DensityGroup::bad, DensityGroup::all,
                                                              DensityGroup::collapsed};

inline std::string_view to_string(DensityGroup g) {
  switch (g) {
    case DensityGroup::top: return "top";
    case DensityGroup::bad: return "bad";
    case DensityGroup::all: return "all";
    case DensityGroup::collapsed: return "collapsed";
  }
  return "?";
}

struct GroupInfo {
  std::size_t count = 0;
  bool empty = true;
  std::optional<double> score_cutoff;  // top: lowest score kept; bad: highest score kept
};

struct DimensionDensity {
  std::string name;
  DimKind kind = DimKind::real;
  bool log_scale = false;
  // Numeric: grid in the search coordinate and the matching values.
  std::vector<double> grid;
  std::vector<double> grid_values;
  // Categorical: choices.
  std::vector<std::string> choices;
  // Per group: density on the grid or frequency per choice; empty if the group is.
  std::array<std::vector<double>, 4> estimates;
  std::array<double, 4> bandwidth{};  // 0 for categorical or empty groups
};

struct DensityReport {
  double top_fraction = 0.2;
  double bad_fraction = 0.2;
  std::array<GroupInfo, 4> groups;
  std::vector<DimensionDensity> dimensions;
};

inline double silverman_bandwidth(std::vector<double> xs) {
  const auto n = static_cast<double>(xs.size());
  if (xs.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  std::sort(xs.begin(), xs.end());
  auto quantile = [&](double q) {
    const double pos = q * (n - 1.0);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(i);
    return i + 1 < xs.size() ? xs[i] * (1.0 - frac) + xs[i + 1] * frac : xs[i];
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) spread = sd;
  return 0.9 * spread * std::pow(n, -0.2);
}

// Reflected Gaussian KDE of `xs` on [lo, hi] evaluated at `grid`.
inline std::vector<double> reflected_kde(const std::vector<double>& xs, double lo, double hi,
                                         const std::vector<double>& grid, double h) {
  const double width = hi - lo;
  const double norm = 1.0 / (static_cast<double>(xs.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double acc = 0.0;
    for (double x : xs) {
      // Images under reflection at lo and hi: x + 2kW and 2lo - x + 2kW.
      for (int k = -1; k <= 1; ++k) {
        const double shift = 2.0 * k * width;
        const double a = (grid[g] - (x + shift)) / h;
        const double b = (grid[g] - (2.0 * lo - x + shift)) / h;
        acc += std::exp(-0.5 * a * a) + std::exp(-0.5 * b * b);
      }
    }
    out[g] = acc * norm;
  }
  return out;
}

inline double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) s += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
  return s;
}

inline DensityReport density_report(std::span<const Trial> trials, const SearchSpace& space,
                                    double top_fraction = 0.2, double bad_fraction = 0.2) {
  if (!(top_fraction > 0.0 && top_fraction <= 0.5) || !(bad_fraction > 0.0 && bad_fraction <= 0.5)) {
    throw ValidationError("top and bad fractions must lie in (0, 0.5]");
  }
  if (trials.size() < kDensityMinTrials) {
    throw ValidationError("insufficient trials: density reports need at least " + std::to_string(kDensityMinTrials) +
                          ", have " + std::to_string(trials.size()));
  }
  DensityReport rep;
  rep.top_fraction = top_fraction;
  rep.bad_fraction = bad_fraction;

  const auto ranked = ranked_usable(trials);
  const std::size_t n = ranked.size();
  std::array<std::vector<const Trial*>, 4> members;
  if (n > 0) {
    const std::size_t n_top = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(top_fraction * n)));
    const std::size_t n_bad =
        std::min(std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(bad_fraction * n))), n - n_top);
    members[0].assign(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(n_top));
    members[1].assign(ranked.end() - static_cast<std::ptrdiff_t>(n_bad), ranked.end());
  }
  for (const auto& t : trials) {
    members[2].push_back(&t);
    if (t.status == TrialStatus::completed && t.collapsed) members[3].push_back(&t);
  }
  for (std::size_t g = 0; g < 4; ++g) {
    rep.groups[g].count = members[g].size();
    rep.groups[g].empty = members[g].empty();
  }
  if (!members[0].empty()) rep.groups[0].score_cutoff = *members[0].back()->score;
  if (!members[1].empty()) rep.groups[1].score_cutoff = *members[1].front()->score;

  for (std::size_t di = 0; di < space.size(); ++di) {
    const Dimension& dim = space.dimensions[di];
    DimensionDensity dd;
    dd.name = dim.name;
    dd.kind = dim.kind;
    dd.log_scale = dim.log_scale;
    if (dim.kind == DimKind::categorical) {
      dd.choices = dim.choices;
      for (std::size_t g = 0; g < 4; ++g) {
        if (members[g].empty()) continue;
        std::vector<double> freq(dim.choices.size(), 0.0);
        for (const Trial* t : members[g]) freq[dim.choice_index(std::get<std::string>(t->configuration[di]))] += 1.0;
        for (double& f : freq) f /= static_cast<double>(members[g].size());
        dd.estimates[g] = std::move(freq);
      }
    } else {
      const double lo = search_lo(dim), hi = search_hi(dim);
      const double step = (hi - lo) / static_cast<double>(kDensityGridPoints - 1);
      dd.grid.resize(kDensityGridPoints);
      dd.grid_values.resize(kDensityGridPoints);
      for (std::size_t i = 0; i < kDensityGridPoints; ++i) {
        dd.grid[i] = i + 1 == kDensityGridPoints ? hi : lo + step * static_cast<double>(i);
        dd.grid_values[i] = dim.log_scale ? std::exp(dd.grid[i]) : dd.grid[i];
      }
      dd.grid_values.front() = dim.lo;
      dd.grid_values.back() = dim.hi;
      for (std::size_t g = 0; g < 4; ++g) {
        if (members[g].empty()) continue;
        std::vector<double> xs;
        for (const Trial* t : members[g]) xs.push_back(to_search_coord(dim, as_double(t->configuration[di])));
        const double h = std::max(silverman_bandwidth(xs), 1.5 * step);
        dd.bandwidth[g] = h;
        dd.estimates[g] = reflected_kde(xs, lo, hi, dd.grid, h);
      }
    }
    rep.dimensions.push_back(std::move(dd));
  }
  return rep;
}

}  // namespace groupaug
