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

// The search driver: suggest / evaluate / report until the budget is spent,
// with up to `parallelism` evaluations in flight, plus repeated evaluation of
// the best configurations afterwards.
//
// Only the driver thread touches SearchState. Each worker owns one evaluator
// and handles one request at a time.

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <thread>
#include <vector>

#include "groupaug/bo.hpp"
#include "groupaug/evaluator.hpp"
#include "groupaug/protocol.hpp"
#include "groupaug/rng.hpp"

namespace groupaug {

inline constexpr double kDefaultChanceLevel = 0.1;

struct SearchOptions {
  int parallelism = 1;
  double chance_level = kDefaultChanceLevel;
  Split split = Split::validation;
  bool timing = true;  // false: wall_time stays null, which keeps histories byte-stable
  std::function<void(const Trial&)> on_trial;  // called on the driver thread after each report
};

// Seed sent with the request for trial `id`.
inline std::uint64_t trial_seed(std::uint64_t search_seed, std::uint64_t id) {
  return Rng::derive(search_seed ^ 0x6A09E667F3BCC908ULL, id).next_u64();
}

namespace detail {

struct Job {
  std::uint64_t id;
  ObjectiveRequest request;
};

struct Done {
  std::uint64_t id;
  ObjectiveResponse response;
  double seconds;
};

// Blocking queue closed by the driver.
template <typename T>
class Channel {
 public:
  void push(T v) {
    {
      std::lock_guard lock(mu_);
      items_.push_back(std::move(v));
    }
    cv_.notify_one();
  }
  std::optional<T> pop() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return closed_ || !items_.empty(); });
    if (items_.empty()) return std::nullopt;
    T v = std::move(items_.front());
    items_.pop_front();
    return v;
  }
  void close() {
    {
      std::lock_guard lock(mu_);
      closed_ = true;
    }
    cv_.notify_all();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<T> items_;
  bool closed_ = false;
};

inline Done run_job(Evaluator& ev, const Job& job) {
  const auto t0 = std::chrono::steady_clock::now();
  ObjectiveResponse r;
  try {
    r = ev.evaluate(job.request);
  } catch (const std::exception& e) {
    r = ObjectiveResponse::failure(job.id, e.what());
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {job.id, std::move(r), s};
}

}  // namespace detail

// Runs until the state's budget is fully issued and every trial reported.
// `state` may already hold restored history. Objective failures become failed
// trials; the loop carries on.
inline void run_search(SearchState& state, const EvaluatorFactory& make_evaluator, std::string space_name,
                       const SearchOptions& options = {}) {
  if (options.parallelism < 1) throw ValidationError("parallelism must be >= 1");
  if (state.outstanding() != 0) throw ValidationError("run_search needs a state without outstanding trials");

  auto make_job = [&](const Suggestion& s) {
    ObjectiveRequest req;
    req.trial_id = s.id;
    req.space_name = space_name;
    req.values = to_json(s.configuration);
    req.seed = trial_seed(state.seed(), s.id);
    req.split = options.split;
    return detail::Job{s.id, std::move(req)};
  };
  auto finish = [&](const detail::Done& d) {
    Trial t = trial_from_response(d.id, state.pending().at(d.id), d.response, options.chance_level);
    if (options.timing) t.wall_time_s = d.seconds;
    state.report(t);
    if (options.on_trial) options.on_trial(t);
  };

  if (options.parallelism == 1) {
    auto ev = make_evaluator();
    while (!state.exhausted()) finish(detail::run_job(*ev, make_job(suggest(state))));
    return;
  }

  detail::Channel<detail::Job> jobs;
  detail::Channel<detail::Done> done;
  std::vector<std::jthread> workers;
  const int n_workers = std::min(options.parallelism, state.budget() - state.finished());
  for (int w = 0; w < n_workers; ++w) {
    workers.emplace_back([&] {
      std::unique_ptr<Evaluator> ev;
      while (auto job = jobs.pop()) {
        if (!ev) {
          try {
            ev = make_evaluator();
          } catch (const std::exception& e) {
            done.push({job->id, ObjectiveResponse::failure(job->id, e.what()), 0.0});
            continue;
          }
        }
        done.push(detail::run_job(*ev, *job));
      }
    });
  }
  try {
    for (;;) {
      while (!state.exhausted() && state.outstanding() < options.parallelism) jobs.push(make_job(suggest(state)));
      if (state.outstanding() == 0) break;
      finish(*done.pop());
    }
  } catch (...) {
    jobs.close();
    throw;
  }
  jobs.close();
}

// ---- repeated evaluation of the best configurations -------------------------

struct ReevalEntry {
  std::uint64_t trial_id;
  Configuration configuration;
  double search_score;
  std::vector<std::uint64_t> seeds;
  std::vector<std::optional<double>> scores;  // nullopt: that repeat failed
  std::vector<std::string> errors;            // one per failed repeat
  double mean = 0.0;
  double standard_error = 0.0;  // sample sd / sqrt(successful repeats); 0 with fewer than 2
  int successes = 0;
};

inline constexpr int kDefaultRepeats = 5;

// Mean and standard error of the successful repeats.
inline void summarize(ReevalEntry& e) {
  std::vector<double> ok;
  for (const auto& s : e.scores) {
    if (s) ok.push_back(*s);
  }
  e.successes = static_cast<int>(ok.size());
  if (ok.empty()) {
    e.mean = std::numeric_limits<double>::quiet_NaN();
    e.standard_error = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  double sum = 0.0;
  for (double v : ok) sum += v;
  e.mean = sum / static_cast<double>(ok.size());
  if (ok.size() < 2 || std::all_of(ok.begin(), ok.end(), [&](double v) { return v == ok.front(); })) {
    e.mean = ok.front();  // avoids summation rounding for identical repeats
    e.standard_error = 0.0;
    return;
  }
  double ss = 0.0;
  for (double v : ok) ss += (v - e.mean) * (v - e.mean);
  const double sd = std::sqrt(ss / static_cast<double>(ok.size() - 1));
  e.standard_error = sd / std::sqrt(static_cast<double>(ok.size()));
}

// Evaluates each of the top-k trials `repeats` times. All k * repeats seeds
// are distinct and none reuses a search seed.
inline std::vector<ReevalEntry> reevaluate_best(const SearchState& state, int k, int repeats, Evaluator& evaluator,
                                                const std::string& space_name, std::uint64_t seed,
                                                Split split = Split::validation) {
  if (repeats < 1) throw ValidationError("repeats must be >= 1");
  int usable = 0;
  for (const auto& t : state.history()) usable += t.usable() ? 1 : 0;
  if (usable < k) {
    throw ValidationError("reevaluation needs " + std::to_string(k) + " completed trials, have " +
                          std::to_string(usable));
  }
  const auto best = best_trials(state, k);

  std::set<std::uint64_t> used;
  for (const auto& t : state.history()) used.insert(trial_seed(state.seed(), t.id));
  Rng seeds(Rng::derive(seed, 0x7265657661ULL));

  std::vector<ReevalEntry> out;
  for (const Trial& t : best) {
    ReevalEntry e{t.id, t.configuration, *t.score, {}, {}, {}};
    for (int r = 0; r < repeats; ++r) {
      std::uint64_t s;
      do {
        s = seeds.next_u64();
      } while (!used.insert(s).second);
      e.seeds.push_back(s);
      ObjectiveRequest req{t.id, space_name, to_json(t.configuration), s, split};
      ObjectiveResponse resp;
      try {
        resp = evaluator.evaluate(req);
      } catch (const std::exception& ex) {
        resp = ObjectiveResponse::failure(t.id, ex.what());
      }
      if (resp.error || !resp.score) {
        e.scores.push_back(std::nullopt);
        e.errors.push_back(resp.error.value_or("missing score"));
      } else {
        e.scores.push_back(resp.score);
      }
    }
    summarize(e);
    out.push_back(std::move(e));
  }
  return out;
}

inline nlohmann::json to_json(const ReevalEntry& e) {
  nlohmann::json scores = nlohmann::json::array();
  for (const auto& s : e.scores) scores.push_back(s ? nlohmann::json(*s) : nlohmann::json(nullptr));
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  return {{"trial_id", e.trial_id},
          {"values", to_json(e.configuration)},
          {"search_score", e.search_score},
          {"seeds", e.seeds},
          {"scores", scores},
          {"errors", e.errors},
          {"mean", num(e.mean)},
          {"standard_error", num(e.standard_error)},
          {"successes", e.successes}};
}

}  // namespace groupaug
