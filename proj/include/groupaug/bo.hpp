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

// Bayesian optimization with prior-weighted acquisition.
//
// The first n_init trial ids are drawn from the prior. After that each
// suggestion fits a random forest to the history in unit-cube coordinates
// and maximizes
//
//   EI(x) * prior(x)^(gamma / t)
//
// over 2048 prior samples plus 2048 uniform samples, where t is the number
// of finished trials. A random_fraction share of those suggestions is a
// uniform draw instead (random interleaving). Collapsed and failed trials enter the surrogate at
// (worst observed score - observed score range); outstanding trials enter at
// the worst observed score (constant liar).
//
// Suggestion k uses the stream Rng::derive(seed, k), so a state rebuilt from
// a history file suggests exactly what the original run would have.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "groupaug/errors.hpp"
#include "groupaug/forest.hpp"
#include "groupaug/prior.hpp"
#include "groupaug/rng.hpp"
#include "groupaug/search_space.hpp"

namespace groupaug {

enum class TrialStatus { pending, completed, failed };

inline std::string_view to_string(TrialStatus s) {
  switch (s) {
    case TrialStatus::pending: return "pending";
    case TrialStatus::completed: return "completed";
    default: return "failed";
  }
}

inline TrialStatus parse_trial_status(std::string_view s) {
  if (s == "pending") return TrialStatus::pending;
  if (s == "completed") return TrialStatus::completed;
  if (s == "failed") return TrialStatus::failed;
  throw ValidationError("unknown trial status: " + std::string(s));
}

struct Trial {
  Trial(std::uint64_t trial_id, Configuration cfg) : id(trial_id), configuration(std::move(cfg)) {}

  std::uint64_t id = 0;
  Configuration configuration;
  std::optional<double> score;
  bool collapsed = false;
  std::map<std::string, double> metrics;
  TrialStatus status = TrialStatus::pending;
  std::optional<double> wall_time_s;
  std::optional<std::string> error;

  void validate() const {
    if (status == TrialStatus::completed && !score) throw ValidationError("completed trial without a score");
    if (status == TrialStatus::failed && score) throw ValidationError("failed trial with a score");
    if (score && !std::isfinite(*score)) throw ValidationError("trial score must be finite");
  }

  // Finished, scored and not collapsed.
  bool usable() const noexcept { return status == TrialStatus::completed && score && !collapsed; }
};

struct BoSettings {
  int n_init = 10;
  std::optional<double> gamma;  // default: budget / 10
  ForestParams forest;
  int prior_candidates = 2048;
  int uniform_candidates = 2048;
  // Share of post-init suggestions drawn uniformly instead of from the
  // acquisition (random interleaving). Without it a forest surrogate predicts
  // a flat plateau outside the data, EI ties there, and the prior term breaks
  // every tie, so a misleading prior is never escaped.
  double random_fraction = 0.2;
};

struct Suggestion {
  std::uint64_t id;
  Configuration configuration;
};

class SearchState {
 public:
  SearchState(std::shared_ptr<const SearchSpace> space, int budget, std::uint64_t seed, BoSettings settings = {})
      : space_(std::move(space)), budget_(budget), seed_(seed), settings_(std::move(settings)) {
    if (!space_) throw ValidationError("search state without a space");
    if (budget_ < 1) throw ValidationError("budget must be >= 1");
    if (settings_.n_init < 0) throw ValidationError("n_init must be >= 0");
    if (!(settings_.random_fraction >= 0.0 && settings_.random_fraction <= 1.0)) {
      throw ValidationError("random_fraction must lie in [0, 1]");
    }
    if (settings_.prior_candidates + settings_.uniform_candidates < 1) {
      throw ValidationError("need at least one acquisition candidate");
    }
  }

  const std::shared_ptr<const SearchSpace>& space() const noexcept { return space_; }
  int budget() const noexcept { return budget_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const BoSettings& settings() const noexcept { return settings_; }
  double gamma() const noexcept { return settings_.gamma.value_or(budget_ / 10.0); }

  // Finished trials (completed or failed) in report order.
  const std::vector<Trial>& history() const noexcept { return history_; }
  const std::map<std::uint64_t, Configuration>& pending() const noexcept { return pending_; }

  int finished() const noexcept { return static_cast<int>(history_.size()); }
  int outstanding() const noexcept { return static_cast<int>(pending_.size()); }
  int issued() const noexcept { return finished() + outstanding(); }
  bool exhausted() const noexcept { return issued() >= budget_; }

  // Smallest id neither finished nor outstanding.
  std::uint64_t next_id() const {
    std::uint64_t id = 0;
    while (finished_ids_.contains(id) || pending_.contains(id)) ++id;
    return id;
  }

  void add_pending(std::uint64_t id, Configuration cfg) {
    if (exhausted()) throw ValidationError("budget exhausted");
    pending_.emplace(id, std::move(cfg));
  }

  // Records the result for an outstanding suggestion.
  void report(Trial trial) {
    if (finished_ids_.contains(trial.id)) throw ValidationError("duplicate report for trial " + std::to_string(trial.id));
    auto it = pending_.find(trial.id);
    if (it == pending_.end()) throw ValidationError("report for unknown trial " + std::to_string(trial.id));
    if (trial.status == TrialStatus::pending) throw ValidationError("cannot report a pending trial");
    trial.validate();
    if (!(trial.configuration == it->second)) throw ValidationError("reported configuration differs from suggestion");
    pending_.erase(it);
    finished_ids_.insert(trial.id);
    history_.push_back(std::move(trial));
  }

  // Replays a finished trial from persisted history (no matching suggestion).
  void restore(Trial trial) {
    if (finished_ids_.contains(trial.id)) throw ValidationError("duplicate trial id " + std::to_string(trial.id));
    if (trial.status == TrialStatus::pending) throw ValidationError("cannot restore a pending trial");
    if (issued() >= budget_) throw ValidationError("history holds more trials than the budget");
    trial.validate();
    finished_ids_.insert(trial.id);
    history_.push_back(std::move(trial));
  }

 private:
  std::shared_ptr<const SearchSpace> space_;
  int budget_;
  std::uint64_t seed_;
  BoSettings settings_;
  std::vector<Trial> history_;
  std::set<std::uint64_t> finished_ids_;
  std::map<std::uint64_t, Configuration> pending_;
};

// Best usable score so far, if any.
inline std::optional<double> incumbent_score(const SearchState& state) {
  std::optional<double> best;
  for (const auto& t : state.history()) {
    if (t.usable() && (!best || *t.score > *best)) best = t.score;
  }
  return best;
}

// Training set for the surrogate: unit-cube rows and targets, with the
// imputation rules for collapsed, failed and outstanding trials.
struct SurrogateData {
  std::vector<double> x;
  std::vector<double> y;
  std::size_t dims = 0;
  double incumbent = 0.0;
};

inline SurrogateData surrogate_data(const SearchState& state) {
  SurrogateData data;
  data.dims = state.space()->size();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& t : state.history()) {
    if (t.usable()) {
      lo = std::min(lo, *t.score);
      hi = std::max(hi, *t.score);
    }
  }
  if (!(lo <= hi)) return data;  // nothing usable yet
  data.incumbent = hi;
  const double range_unit = hi > lo ? hi - lo : 1.0;
  const double penalty = lo - range_unit;
  auto add = [&](const Configuration& c, double y) {
    const auto u = to_unit_cube(c);
    data.x.insert(data.x.end(), u.begin(), u.end());
    data.y.push_back(y);
  };
  for (const auto& t : state.history()) add(t.configuration, t.usable() ? *t.score : penalty);
  for (const auto& [id, cfg] : state.pending()) add(cfg, lo);
  return data;
}

inline double expected_improvement(const Prediction& p, double incumbent) {
  const double sd = std::sqrt(p.variance);
  const double gain = p.mean - incumbent;
  if (!(sd > 1e-12)) return std::max(gain, 0.0);
  const double z = gain / sd;
  const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  return std::max(0.0, gain * cdf + sd * pdf);
}

// gamma / t with t the number of finished trials.
inline double prior_weight_exponent(double gamma, int finished) {
  if (finished < 1) throw ValidationError("prior weight needs at least one finished trial");
  return gamma / finished;
}

// Candidate pool for one suggestion: prior samples, then uniform samples.
inline std::vector<Configuration> acquisition_candidates(const SearchState& state, Rng& rng) {
  std::vector<Configuration> out;
  out.reserve(static_cast<std::size_t>(state.settings().prior_candidates + state.settings().uniform_candidates));
  for (int i = 0; i < state.settings().prior_candidates; ++i) out.push_back(sample_from_prior(state.space(), rng));
  for (int i = 0; i < state.settings().uniform_candidates; ++i) out.push_back(sample_uniform(state.space(), rng));
  return out;
}

// Index of the maximal log(acq) + exponent * log(prior); first index wins ties.
inline std::size_t weighted_argmax(std::span<const double> acquisition, std::span<const double> prior,
                                   double exponent) {
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < acquisition.size(); ++i) {
    const double s = std::log(acquisition[i]) + exponent * std::log(prior[i]);
    if (s > best_score) {
      best_score = s;
      best = i;
    }
  }
  return best;
}

// Configuration proposed for trial `id`, without registering it.
inline Configuration propose(const SearchState& state, std::uint64_t id) {
  Rng rng = Rng::derive(state.seed(), id);
  if (id < static_cast<std::uint64_t>(state.settings().n_init) || state.finished() == 0) {
    return sample_from_prior(state.space(), rng);
  }
  if (rng.bernoulli(state.settings().random_fraction)) return sample_uniform(state.space(), rng);
  const SurrogateData data = surrogate_data(state);
  if (data.y.empty()) return sample_from_prior(state.space(), rng);

  Rng fit_rng = rng.split();
  RandomForest forest(state.settings().forest);
  forest.fit(data.x, data.y, data.dims, fit_rng);

  const auto candidates = acquisition_candidates(state, rng);
  std::vector<double> acq(candidates.size()), prior(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    acq[i] = expected_improvement(forest.predict(to_unit_cube(candidates[i])), data.incumbent);
    prior[i] = joint_prior_density(candidates[i]);
  }
  const double exponent = prior_weight_exponent(state.gamma(), state.finished());
  return candidates[weighted_argmax(acq, prior, exponent)];
}

// Allocates the next trial id and registers the suggestion as outstanding.
inline Suggestion suggest(SearchState& state) {
  if (state.exhausted()) throw ValidationError("budget exhausted");
  const std::uint64_t id = state.next_id();
  Configuration cfg = propose(state, id);
  state.add_pending(id, cfg);
  return {id, std::move(cfg)};
}

inline void report(SearchState& state, Trial trial) { state.report(std::move(trial)); }

// Top-k usable trials by score, descending; ties go to the lower id.
inline std::vector<Trial> best_trials(const SearchState& state, int k) {
  if (k < 1) throw ValidationError("best_trials: k must be >= 1");
  std::vector<Trial> usable;
  for (const auto& t : state.history()) {
    if (t.usable()) usable.push_back(t);
  }
  if (usable.empty()) throw ValidationError("best_trials: no completed trials");
  std::sort(usable.begin(), usable.end(), [](const Trial& a, const Trial& b) {
    return *a.score > *b.score || (*a.score == *b.score && a.id < b.id);
  });
  if (usable.size() > static_cast<std::size_t>(k)) usable.erase(usable.begin() + k, usable.end());
  return usable;
}

// Running maximum of usable scores in report order (NaN before the first).
inline std::vector<double> incumbent_trajectory(const SearchState& state) {
  std::vector<double> out;
  double best = std::numeric_limits<double>::quiet_NaN();
  for (const auto& t : state.history()) {
    if (t.usable() && (std::isnan(best) || *t.score > best)) best = *t.score;
    out.push_back(best);
  }
  return out;
}

}  // namespace groupaug
