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

// Objective evaluators: the interface the search loop drives, built-in
// synthetic surfaces for desk-scale runs, and the resident subprocess
// evaluator that speaks the line protocol.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "groupaug/bo.hpp"
#include "groupaug/errors.hpp"
#include "groupaug/prior.hpp"
#include "groupaug/protocol.hpp"
#include "groupaug/rng.hpp"
#include "groupaug/search_space.hpp"

extern char** environ;

namespace groupaug {

class Evaluator {
 public:
  virtual ~Evaluator() = default;
  // Never throws for objective-side problems; they come back as error responses.
  virtual ObjectiveResponse evaluate(const ObjectiveRequest& request) = 0;
};

// One evaluator per worker.
using EvaluatorFactory = std::function<std::unique_ptr<Evaluator>()>;

// ---- synthetic surfaces ------------------------------------------------------
//
// All three work on unit-cube coordinates u of the configuration.
//   quadratic       1 - mean_i (u_i - 0.7)^2                  (optimum 1.0 at u = 0.7)
//   additive_mix    sum_i w_i t_i, w_i = 2^-i / sum_j 2^-j,
//                   t_i = u_i for even i, 1 - u_i for odd i   (dimension 0 dominates)
//   collapse_valley quadratic, except p_grayscale in [0.45, 0.55] collapses
//                   with score kCollapseScore

inline constexpr double kQuadraticOptimum = 0.7;
inline constexpr double kCollapseBandLo = 0.45;
inline constexpr double kCollapseBandHi = 0.55;
inline constexpr double kCollapseScore = 0.1;

inline const std::vector<std::string>& synthetic_names() {
  static const std::vector<std::string> names = {"quadratic", "additive_mix", "collapse_valley"};
  return names;
}

inline double quadratic_score(const Configuration& cfg) {
  const auto u = to_unit_cube(cfg);
  double acc = 0.0;
  for (double x : u) acc += (x - kQuadraticOptimum) * (x - kQuadraticOptimum);
  return 1.0 - acc / static_cast<double>(u.size());
}

inline ObjectiveResponse synthetic_objective(std::string_view name, const Configuration& cfg) {
  ObjectiveResponse r;
  r.collapsed = false;
  if (name == "quadratic") {
    r.score = quadratic_score(cfg);
  } else if (name == "additive_mix") {
    const auto u = to_unit_cube(cfg);
    double norm = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) norm += std::ldexp(1.0, -static_cast<int>(i));
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double term = i % 2 == 0 ? u[i] : 1.0 - u[i];
      s += std::ldexp(1.0, -static_cast<int>(i)) / norm * term;
    }
    r.score = s;
  } else if (name == "collapse_valley") {
    if (!cfg.space().has("p_grayscale")) throw ValidationError("collapse_valley needs a p_grayscale dimension");
    const double g = cfg.real("p_grayscale");
    if (g >= kCollapseBandLo && g <= kCollapseBandHi) {
      r.collapsed = true;
      r.score = kCollapseScore;
    } else {
      r.score = quadratic_score(cfg);
    }
  } else {
    throw ValidationError("unknown synthetic objective: " + std::string(name));
  }
  return r;
}

// Synthetic surface behind the Evaluator interface. With noise_sd > 0 the
// score gets N(0, noise_sd^2) noise seeded by the request seed, clamped to
// [0, 1].
class SyntheticEvaluator : public Evaluator {
 public:
  SyntheticEvaluator(std::string name, std::shared_ptr<const SearchSpace> space, double noise_sd = 0.0)
      : name_(std::move(name)), space_(std::move(space)), noise_sd_(noise_sd) {
    const auto& names = synthetic_names();
    if (std::find(names.begin(), names.end(), name_) == names.end()) {
      throw ValidationError("unknown synthetic objective: " + name_);
    }
    if (noise_sd_ < 0.0) throw ValidationError("noise_sd must be >= 0");
    if (name_ == "collapse_valley" && !space_->has("p_grayscale")) {
      throw ValidationError("collapse_valley needs a p_grayscale dimension");
    }
  }

  ObjectiveResponse evaluate(const ObjectiveRequest& request) override {
    try {
      const Configuration cfg = configuration_from_json(space_, request.values);
      ObjectiveResponse r = synthetic_objective(name_, cfg);
      r.trial_id = request.trial_id;
      if (noise_sd_ > 0.0) {
        Rng rng(request.seed);
        r.score = std::clamp(*r.score + noise_sd_ * rng.normal(), 0.0, 1.0);
      }
      return r;
    } catch (const std::exception& e) {
      return ObjectiveResponse::failure(request.trial_id, e.what());
    }
  }

 private:
  std::string name_;
  std::shared_ptr<const SearchSpace> space_;
  double noise_sd_;
};

// ---- subprocess evaluator ----------------------------------------------------

// Runs `/bin/sh -c command` once and keeps it resident. Requests go to its
// standard input, responses come from its standard output, one line each.
// Its standard error passes through. A timeout or exit kills the process;
// the next request relaunches it.
class SubprocessEvaluator : public Evaluator {
 public:
  explicit SubprocessEvaluator(std::string command, std::optional<double> timeout_s = std::nullopt)
      : command_(std::move(command)), timeout_s_(timeout_s) {}

  SubprocessEvaluator(const SubprocessEvaluator&) = delete;
  SubprocessEvaluator& operator=(const SubprocessEvaluator&) = delete;

  ~SubprocessEvaluator() override { shutdown(); }

  ObjectiveResponse evaluate(const ObjectiveRequest& request) override {
    try {
      if (pid_ <= 0) launch();
      write_line(to_json(request).dump());
      const auto line = read_line();
      if (!line) {
        const int status = reap(std::chrono::milliseconds(1000));
        return ObjectiveResponse::failure(request.trial_id,
                                          "evaluator exited before responding (status " + std::to_string(status) + ")");
      }
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(*line);
      } catch (const nlohmann::json::parse_error&) {
        return ObjectiveResponse::failure(request.trial_id, "malformed response line");
      }
      ObjectiveResponse r = response_from_json(j);
      if (r.trial_id != request.trial_id) {
        return ObjectiveResponse::failure(request.trial_id, "protocol error: response trial_id " +
                                                                std::to_string(r.trial_id) + " does not match request " +
                                                                std::to_string(request.trial_id));
      }
      return r;
    } catch (const ProtocolError& e) {
      return ObjectiveResponse::failure(request.trial_id, std::string("protocol error: ") + e.what());
    } catch (const IoError& e) {
      kill_now();
      return ObjectiveResponse::failure(request.trial_id, e.what());
    }
  }

  // Sends the shutdown message and waits for exit. Returns the exit status,
  // or -1 when no process is running.
  int shutdown(std::chrono::milliseconds grace = std::chrono::milliseconds(5000)) {
    if (pid_ <= 0) return -1;
    try {
      write_line(shutdown_message().dump());
    } catch (const IoError&) {
    }
    close_fd(to_child_);
    return reap(grace);
  }

  bool running() const noexcept { return pid_ > 0; }

 private:
  void launch() {
    int in_pair[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, in_pair) != 0) throw IoError("socketpair failed");
    int out_pipe[2];
    if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
      ::close(in_pair[0]);
      ::close(in_pair[1]);
      throw IoError("pipe failed");
    }
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, in_pair[1], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
    std::string sh = "/bin/sh", flag = "-c";
    char* argv[] = {sh.data(), flag.data(), command_.data(), nullptr};
    pid_t pid = -1;
    const int rc = ::posix_spawn(&pid, "/bin/sh", &actions, nullptr, argv, environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(in_pair[1]);
    ::close(out_pipe[1]);
    if (rc != 0) {
      ::close(in_pair[0]);
      ::close(out_pipe[0]);
      throw IoError("cannot launch evaluator: " + command_);
    }
    pid_ = pid;
    to_child_ = in_pair[0];
    from_child_ = out_pipe[0];
    buffer_.clear();
  }

  void write_line(const std::string& text) {
    if (to_child_ < 0) throw IoError("evaluator input closed");
    std::string line = text + "\n";
    std::size_t off = 0;
    while (off < line.size()) {
      const ssize_t n = ::send(to_child_, line.data() + off, line.size() - off, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw IoError("evaluator closed its input");
      }
      off += static_cast<std::size_t>(n);
    }
  }

  // Next line without its newline; nullopt at end of stream. Throws IoError on
  // timeout.
  std::optional<std::string> read_line() {
    using clock = std::chrono::steady_clock;
    const auto deadline = timeout_s_ ? std::optional(clock::now() + std::chrono::duration_cast<clock::duration>(
                                                                       std::chrono::duration<double>(*timeout_s_)))
                                     : std::nullopt;
    for (;;) {
      const auto nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      int wait_ms = -1;
      if (deadline) {
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(*deadline - clock::now()).count();
        if (left <= 0) throw IoError("evaluator timed out");
        wait_ms = static_cast<int>(std::min<long long>(left, 1 << 30));
      }
      pollfd pfd{from_child_, POLLIN, 0};
      const int rc = ::poll(&pfd, 1, wait_ms);
      if (rc < 0) {
        if (errno == EINTR) continue;
        throw IoError("poll failed");
      }
      if (rc == 0) continue;  // deadline re-checked above
      char chunk[4096];
      const ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
      if (n < 0) {
        if (errno == EINTR) continue;
        throw IoError("read from evaluator failed");
      }
      if (n == 0) return std::nullopt;
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  // Waits up to `grace` for exit, then kills. Returns the exit code (128+sig
  // for signals).
  int reap(std::chrono::milliseconds grace) {
    if (pid_ <= 0) return -1;
    const auto deadline = std::chrono::steady_clock::now() + grace;
    int status = 0;
    for (;;) {
      const pid_t r = ::waitpid(pid_, &status, WNOHANG);
      if (r == pid_) break;
      if (r < 0) {
        status = 0;
        break;
      }
      if (std::chrono::steady_clock::now() >= deadline) {
        ::kill(pid_, SIGKILL);
        ::waitpid(pid_, &status, 0);
        break;
      }
      ::usleep(2000);
    }
    pid_ = -1;
    close_fd(to_child_);
    close_fd(from_child_);
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
    return -1;
  }

  void kill_now() {
    if (pid_ > 0) ::kill(pid_, SIGKILL);
    reap(std::chrono::milliseconds(1000));
  }

  static void close_fd(int& fd) {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }

  std::string command_;
  std::optional<double> timeout_s_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

// Turns a response into a finished trial. When the evaluator omits the
// collapse flag, a score at or below chance_level counts as collapsed.
inline Trial trial_from_response(std::uint64_t id, Configuration cfg, const ObjectiveResponse& r, double chance_level) {
  Trial t{id, std::move(cfg)};
  t.metrics = r.metrics;
  if (r.error || !r.score) {
    t.status = TrialStatus::failed;
    t.error = r.error.value_or("missing score");
    return t;
  }
  t.status = TrialStatus::completed;
  t.score = r.score;
  t.collapsed = r.collapsed.value_or(*r.score <= chance_level);
  return t;
}

}  // namespace groupaug
