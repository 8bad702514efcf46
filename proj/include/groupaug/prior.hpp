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

// Expert priors over search-space dimensions and the unit-cube encoding
// used by surrogate models.
//
// Numeric priors are Gaussians centered at the default, truncated to the
// range and renormalized. They live in the dimension's search coordinate:
// log(value) for log-scaled dimensions, the value itself otherwise, so the
// density is maximal at the default in either case. The standard deviation
// is a fraction of the search-coordinate width:
//
//   low 0.5, medium 0.25, high 0.125   (uniform: flat density)
//
// Categorical priors put weight w on the default and spread 1 - w evenly:
//
//   low 0.35, medium 0.5, high 0.75    (never below 1/k; uniform: 1/k)

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

#include "groupaug/errors.hpp"
#include "groupaug/rng.hpp"
#include "groupaug/search_space.hpp"

namespace groupaug {

inline double confidence_stddev_fraction(Confidence c) {
  switch (c) {
    case Confidence::low: return 0.5;
    case Confidence::medium: return 0.25;
    case Confidence::high: return 0.125;
    default: return 0.0;
  }
}

inline double confidence_default_weight(Confidence c, std::size_t choices) {
  const double floor = 1.0 / static_cast<double>(choices);
  switch (c) {
    case Confidence::low: return std::max(0.35, floor);
    case Confidence::medium: return std::max(0.5, floor);
    case Confidence::high: return std::max(0.75, floor);
    default: return floor;
  }
}

// Value -> search coordinate (log for log-scaled dimensions).
inline double to_search_coord(const Dimension& d, double v) { return d.log_scale ? std::log(v) : v; }
inline double search_lo(const Dimension& d) { return to_search_coord(d, d.lo); }
inline double search_hi(const Dimension& d) { return to_search_coord(d, d.hi); }

namespace detail {

inline double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

struct TruncatedGaussian {
  double mean, sd, lo, hi, mass;

  explicit TruncatedGaussian(const Dimension& d)
      : mean(to_search_coord(d, as_double(d.default_value))),
        sd(confidence_stddev_fraction(d.confidence) * (search_hi(d) - search_lo(d))),
        lo(search_lo(d)),
        hi(search_hi(d)),
        mass(std_normal_cdf((hi - mean) / sd) - std_normal_cdf((lo - mean) / sd)) {}

  double pdf(double x) const {
    const double z = (x - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi) * mass);
  }
};

}  // namespace detail

// Density of the prior at `value`, with respect to the search coordinate for
// numeric dimensions and as a probability mass for categorical ones. Integer
// dimensions use the continuous relaxation over [lo, hi].
inline double prior_density(const Dimension& d, const Value& value) {
  if (d.kind == DimKind::categorical) {
    const auto* s = std::get_if<std::string>(&value);
    if (!s) throw ValidationError(d.name + ": expected a categorical choice");
    const std::size_t k = d.choices.size();
    const std::size_t idx = d.choice_index(*s);
    if (d.confidence == Confidence::uniform || k == 1) return 1.0 / static_cast<double>(k);
    const double w = confidence_default_weight(d.confidence, k);
    return idx == d.choice_index(std::get<std::string>(d.default_value)) ? w : (1.0 - w) / static_cast<double>(k - 1);
  }
  const double v = as_double(value);
  if (!(v >= d.lo && v <= d.hi)) throw ValidationError(d.name + ": value outside range");
  if (d.confidence == Confidence::uniform) return 1.0 / (search_hi(d) - search_lo(d));
  return detail::TruncatedGaussian(d).pdf(to_search_coord(d, v));
}

// Density on a raw search coordinate; used for quadrature over the range.
inline double prior_density_at_coord(const Dimension& d, double coord) {
  if (d.kind == DimKind::categorical) throw ValidationError("prior_density_at_coord: numeric dimensions only");
  if (coord < search_lo(d) || coord > search_hi(d)) return 0.0;
  if (d.confidence == Confidence::uniform) return 1.0 / (search_hi(d) - search_lo(d));
  return detail::TruncatedGaussian(d).pdf(coord);
}

// Product of per-dimension prior densities.
inline double joint_prior_density(const Configuration& cfg) {
  double p = 1.0;
  for (std::size_t i = 0; i < cfg.space().size(); ++i) p *= prior_density(cfg.space().dimensions[i], cfg[i]);
  return p;
}

inline Value sample_dimension(const Dimension& d, Rng& rng) {
  if (d.kind == DimKind::categorical) {
    const std::size_t k = d.choices.size();
    std::vector<double> probs(k);
    for (std::size_t i = 0; i < k; ++i) probs[i] = prior_density(d, d.choices[i]);
    return d.choices[rng.categorical(probs)];
  }
  const double lo = search_lo(d), hi = search_hi(d);
  double x;
  if (d.confidence == Confidence::uniform) {
    x = rng.uniform(lo, hi);
  } else {
    const detail::TruncatedGaussian tg(d);
    // Rejection from the untruncated Gaussian; acceptance >= ~0.5 because the
    // mean lies inside the range and sd <= half the width.
    do {
      x = rng.normal(tg.mean, tg.sd);
    } while (x < lo || x > hi);
  }
  double v = d.log_scale ? std::exp(x) : x;
  v = std::clamp(v, d.lo, d.hi);
  if (d.kind == DimKind::integer) return static_cast<std::int64_t>(std::clamp(std::round(v), d.lo, d.hi));
  return v;
}

// One independent draw per dimension, in dimension order.
inline Configuration sample_from_prior(const std::shared_ptr<const SearchSpace>& space, Rng& rng) {
  std::vector<Value> values;
  values.reserve(space->size());
  for (const Dimension& d : space->dimensions) values.push_back(sample_dimension(d, rng));
  return Configuration(space, std::move(values));
}

// Uniform draw per dimension (ignores priors).
inline Configuration sample_uniform(const std::shared_ptr<const SearchSpace>& space, Rng& rng) {
  std::vector<Value> values;
  for (const Dimension& d : space->dimensions) {
    if (d.kind == DimKind::categorical) {
      values.push_back(d.choices[rng.below(d.choices.size())]);
    } else if (d.kind == DimKind::integer) {
      values.push_back(rng.uniform_int(static_cast<std::int64_t>(d.lo), static_cast<std::int64_t>(d.hi)));
    } else {
      const double x = rng.uniform(search_lo(d), search_hi(d));
      values.push_back(std::clamp(d.log_scale ? std::exp(x) : x, d.lo, d.hi));
    }
  }
  return Configuration(space, std::move(values));
}

// ---- unit cube -------------------------------------------------------------
// One coordinate per dimension. Numeric: linear in the search coordinate.
// Categorical: choice i of k sits at the center of its cell, (i + 0.5) / k.

inline double dimension_to_unit(const Dimension& d, const Value& v) {
  if (d.kind == DimKind::categorical) {
    const auto idx = d.choice_index(std::get<std::string>(v));
    return (static_cast<double>(idx) + 0.5) / static_cast<double>(d.choices.size());
  }
  const double lo = search_lo(d), hi = search_hi(d);
  return std::clamp((to_search_coord(d, as_double(v)) - lo) / (hi - lo), 0.0, 1.0);
}

inline Value dimension_from_unit(const Dimension& d, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw ValidationError(d.name + ": unit coordinate outside [0, 1]");
  if (d.kind == DimKind::categorical) {
    const std::size_t k = d.choices.size();
    return d.choices[std::min(k - 1, static_cast<std::size_t>(u * static_cast<double>(k)))];
  }
  if (u == 0.0) return d.kind == DimKind::integer ? Value(static_cast<std::int64_t>(d.lo)) : Value(d.lo);
  if (u == 1.0) return d.kind == DimKind::integer ? Value(static_cast<std::int64_t>(d.hi)) : Value(d.hi);
  const double lo = search_lo(d), hi = search_hi(d);
  const double x = lo + u * (hi - lo);
  const double v = std::clamp(d.log_scale ? std::exp(x) : x, d.lo, d.hi);
  if (d.kind == DimKind::integer) return static_cast<std::int64_t>(std::round(v));
  return v;
}

inline std::vector<double> to_unit_cube(const Configuration& cfg) {
  std::vector<double> u(cfg.space().size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = dimension_to_unit(cfg.space().dimensions[i], cfg[i]);
  return u;
}

inline Configuration from_unit_cube(std::span<const double> u, const std::shared_ptr<const SearchSpace>& space) {
  if (u.size() != space->size()) throw ValidationError("from_unit_cube: dimension mismatch");
  std::vector<Value> values;
  for (std::size_t i = 0; i < u.size(); ++i) values.push_back(dimension_from_unit(space->dimensions[i], u[i]));
  return Configuration(space, std::move(values));
}

}  // namespace groupaug
