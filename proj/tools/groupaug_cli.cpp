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

// groupaug: command-line front end.
//
// Exit codes: 0 success, 2 usage or validation error, 1 runtime failure.
// Data goes to stdout or files, diagnostics to stderr.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "groupaug.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace groupaug;

namespace {

constexpr const char* kOutputDirEnv = "GROUPAUG_OUTPUT_DIR";
constexpr const char* kDefaultOutputDir = "groupaug-out";

json read_json_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ValidationError(std::string("cannot open ") + what + " " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("cannot parse ") + what + " " + path + ": " + e.what());
  }
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty() || output == "-") {
    std::cout << text;
    return;
  }
  write_text(output, text);
}

std::string default_output_dir() {
  const char* env = std::getenv(kOutputDirEnv);
  return env && *env ? env : kDefaultOutputDir;
}

// ---- run configuration -------------------------------------------------------

struct RunConfig {
  std::string space;
  std::string evaluator;
  int budget = 50;
  int parallelism = 1;
  std::uint64_t seed = 0;
  std::string output_dir;
  json priors = json::object();  // dimension -> confidence
  BoSettings bo;
  double noise_sd = 0.0;
  std::optional<double> timeout_s;
  double chance_level = kDefaultChanceLevel;
  Split split = Split::validation;
  bool timing = true;
};

template <typename T>
T get_field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("run config: bad value for ") + key);
  }
}

RunConfig run_config_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("run config must be a JSON object");
  static const std::set<std::string> known = {"space",      "evaluator",  "budget",       "parallelism", "seed",
                                              "output_dir", "priors",     "bo",           "noise_sd",    "timeout_s",
                                              "chance_level", "split",    "timing"};
  for (const auto& [k, v] : j.items()) {
    if (!known.contains(k)) throw ValidationError("run config: unknown key " + k);
  }
  RunConfig c;
  if (j.contains("space")) c.space = get_field<std::string>(j, "space");
  if (j.contains("evaluator")) c.evaluator = get_field<std::string>(j, "evaluator");
  if (j.contains("budget")) c.budget = get_field<int>(j, "budget");
  if (j.contains("parallelism")) c.parallelism = get_field<int>(j, "parallelism");
  if (j.contains("seed")) c.seed = get_field<std::uint64_t>(j, "seed");
  if (j.contains("output_dir")) c.output_dir = get_field<std::string>(j, "output_dir");
  if (j.contains("priors")) {
    c.priors = j["priors"];
    if (!c.priors.is_object()) throw ValidationError("run config: priors must map dimensions to confidences");
  }
  if (j.contains("noise_sd")) c.noise_sd = get_field<double>(j, "noise_sd");
  if (j.contains("timeout_s") && !j["timeout_s"].is_null()) c.timeout_s = get_field<double>(j, "timeout_s");
  if (j.contains("chance_level")) c.chance_level = get_field<double>(j, "chance_level");
  if (j.contains("split")) c.split = parse_split(get_field<std::string>(j, "split"));
  if (j.contains("timing")) c.timing = get_field<bool>(j, "timing");
  if (j.contains("bo")) {
    const json& b = j["bo"];
    if (!b.is_object()) throw ValidationError("run config: bo must be an object");
    static const std::set<std::string> bo_keys = {"n_init", "gamma", "trees", "min_leaf", "prior_candidates",
                                                  "uniform_candidates", "random_fraction"};
    for (const auto& [k, v] : b.items()) {
      if (!bo_keys.contains(k)) throw ValidationError("run config: unknown bo key " + k);
    }
    if (b.contains("n_init")) c.bo.n_init = get_field<int>(b, "n_init");
    if (b.contains("gamma") && !b["gamma"].is_null()) c.bo.gamma = get_field<double>(b, "gamma");
    if (b.contains("trees")) c.bo.forest.trees = get_field<int>(b, "trees");
    if (b.contains("min_leaf")) c.bo.forest.min_leaf = get_field<int>(b, "min_leaf");
    if (b.contains("prior_candidates")) c.bo.prior_candidates = get_field<int>(b, "prior_candidates");
    if (b.contains("uniform_candidates")) c.bo.uniform_candidates = get_field<int>(b, "uniform_candidates");
    if (b.contains("random_fraction")) c.bo.random_fraction = get_field<double>(b, "random_fraction");
  }
  return c;
}

json to_json(const RunConfig& c) {
  return {{"space", c.space},
          {"evaluator", c.evaluator},
          {"budget", c.budget},
          {"parallelism", c.parallelism},
          {"seed", c.seed},
          {"output_dir", c.output_dir},
          {"priors", c.priors},
          {"bo",
           {{"n_init", c.bo.n_init},
            {"gamma", c.bo.gamma ? json(*c.bo.gamma) : json(nullptr)},
            {"trees", c.bo.forest.trees},
            {"min_leaf", c.bo.forest.min_leaf},
            {"prior_candidates", c.bo.prior_candidates},
            {"uniform_candidates", c.bo.uniform_candidates},
            {"random_fraction", c.bo.random_fraction}}},
          {"noise_sd", c.noise_sd},
          {"timeout_s", c.timeout_s ? json(*c.timeout_s) : json(nullptr)},
          {"chance_level", c.chance_level},
          {"split", to_string(c.split)},
          {"timing", c.timing}};
}

void validate(const RunConfig& c) {
  if (c.space.empty()) throw ValidationError("run config: space is required");
  if (c.evaluator.empty()) throw ValidationError("run config: evaluator is required");
  if (c.budget < 1) throw ValidationError("run config: budget must be >= 1");
  if (c.parallelism < 1) throw ValidationError("run config: parallelism must be >= 1");
  if (c.noise_sd < 0.0) throw ValidationError("run config: noise_sd must be >= 0");
  if (c.timeout_s && !(*c.timeout_s > 0.0)) throw ValidationError("run config: timeout_s must be > 0");
  if (c.bo.forest.trees < 1 || c.bo.forest.min_leaf < 1) throw ValidationError("run config: bad forest settings");
  if (c.bo.gamma && !(*c.bo.gamma >= 0.0)) throw ValidationError("run config: gamma must be >= 0");
}

bool is_synthetic(const std::string& evaluator) {
  const auto& names = synthetic_names();
  return std::find(names.begin(), names.end(), evaluator) != names.end();
}

EvaluatorFactory evaluator_factory(const RunConfig& c, std::shared_ptr<const SearchSpace> space) {
  if (is_synthetic(c.evaluator)) {
    return [name = c.evaluator, space, noise = c.noise_sd]() -> std::unique_ptr<Evaluator> {
      return std::make_unique<SyntheticEvaluator>(name, space, noise);
    };
  }
  return [cmd = c.evaluator, timeout = c.timeout_s]() -> std::unique_ptr<Evaluator> {
    return std::make_unique<SubprocessEvaluator>(cmd, timeout);
  };
}

std::shared_ptr<const SearchSpace> run_space(const RunConfig& c) {
  auto space = resolve_space(c.space);
  if (!c.priors.empty()) space = with_confidences(*space, c.priors);
  return space;
}

json num_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json summary_json(const SearchState& state, const std::string& space_name) {
  int completed = 0, failed = 0, collapsed = 0;
  for (const auto& t : state.history()) {
    if (t.status == TrialStatus::completed) ++completed;
    if (t.status == TrialStatus::failed) ++failed;
    if (t.status == TrialStatus::completed && t.collapsed) ++collapsed;
  }
  json traj = json::array();
  for (double v : incumbent_trajectory(state)) traj.push_back(num_or_null(v));
  json best = json::array();
  if (completed - collapsed > 0) {
    int rank = 1;
    for (const auto& t : best_trials(state, 5)) {
      best.push_back({{"rank", rank++}, {"id", t.id}, {"score", *t.score}, {"collapsed", t.collapsed}, {"values", groupaug::to_json(t.configuration)}});
    }
  }
  return {{"space", space_name},
          {"seed", state.seed()},
          {"budget", state.budget()},
          {"trials", state.finished()},
          {"completed", completed},
          {"failed", failed},
          {"collapsed", collapsed},
          {"incumbent_trajectory", traj},
          {"best", best}};
}

// ---- subcommands -----------------------------------------------------------

int cmd_spaces(const std::string& name, const std::string& output) {
  if (name.empty()) {
    std::string text;
    for (const auto& n : builtin_space_names()) text += n + "\n";
    emit(text, output);
    return 0;
  }
  emit(groupaug::to_json(*resolve_space(name)).dump(2) + "\n", output);
  return 0;
}

int cmd_augmentations(const std::string& output) {
  emit(registry_json().dump(2) + "\n", output);
  return 0;
}

int cmd_sample_policy(const std::string& space_name, const json& priors, std::uint64_t seed, int count,
                      const std::string& output) {
  if (count < 1) throw ValidationError("count must be >= 1");
  auto space = resolve_space(space_name);
  if (!priors.empty()) space = with_confidences(*space, priors);
  Rng cfg_rng = Rng::derive(seed, 0);
  const Configuration cfg = sample_from_prior(space, cfg_rng);
  const Policy policy = policy_from_configuration(cfg);
  const auto* ga = std::get_if<GroupAugmentPolicy>(&policy);
  if (!ga) throw ValidationError("sample-policy needs a GroupAugment space, got " + space->name);
  Rng draw_rng = Rng::derive(seed, 1);
  json draws = json::array();
  for (int i = 0; i < count; ++i) draws.push_back(groupaug::to_json(sample_policy_draw(*ga, draw_rng), *ga));
  const json doc{{"space", space->name},
                 {"seed", seed},
                 {"configuration", groupaug::to_json(cfg)},
                 {"policy", groupaug::to_json(policy)},
                 {"draws", draws}};
  emit(doc.dump(2) + "\n", output);
  return 0;
}

int cmd_apply(const std::string& policy_path, const std::string& input, const std::string& output,
              std::uint64_t seed) {
  json doc = read_json_file(policy_path, "policy file");
  if (doc.is_object() && doc.contains("policy") && !doc.contains("kind")) doc = doc["policy"];
  const Policy policy = policy_from_json(doc);
  const Image img = load_image(input);
  Rng rng(seed);
  save_image(apply(policy, img, rng), output);
  return 0;
}

int cmd_search(RunConfig cfg) {
  validate(cfg);
  const auto space = run_space(cfg);
  const fs::path dir = cfg.output_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ValidationError("output_dir " + dir.string() + " cannot be created");

  const fs::path run_path = dir / "run.json";
  const fs::path history_path = dir / "history.jsonl";
  json run = {{"config", to_json(cfg)}, {"space_definition", groupaug::to_json(*space)}};
  if (fs::exists(run_path) && fs::exists(history_path)) {
    const json old = read_json_file(run_path.string(), "run file");
    if (old.value("space_definition", json()) != run["space_definition"] ||
        old.value("config", json()).value("seed", json()) != run["config"]["seed"]) {
      throw ValidationError("existing history in " + dir.string() + " belongs to a different space or seed");
    }
  }
  write_text(run_path, run.dump(2) + "\n");

  SearchState state(space, cfg.budget, cfg.seed, cfg.bo);
  std::uintmax_t keep = 0;
  if (fs::exists(history_path)) {
    auto hist = read_history(history_path, space);
    if (hist.truncated_tail) std::cerr << "note: dropping an incomplete last record in " << history_path << "\n";
    for (auto& t : hist.trials) state.restore(std::move(t));
    keep = hist.valid_bytes;
  }
  if (state.finished() > 0) std::cerr << "resuming with " << state.finished() << " finished trials\n";

  HistoryWriter writer(history_path, keep);
  SearchOptions opts;
  opts.parallelism = cfg.parallelism;
  opts.chance_level = cfg.chance_level;
  opts.split = cfg.split;
  opts.timing = cfg.timing;
  opts.on_trial = [&](const Trial& t) { writer.append(t); };
  const auto factory = evaluator_factory(cfg, space);
  if (is_synthetic(cfg.evaluator)) factory();  // surface/space mismatches are usage errors
  run_search(state, factory, space->name, opts);

  const json summary = summary_json(state, space->name);
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  std::cout << "trials " << summary["trials"] << " completed " << summary["completed"] << " failed "
            << summary["failed"] << " collapsed " << summary["collapsed"];
  if (!summary["best"].empty()) {
    std::cout << " best " << summary["best"][0]["score"] << " (trial " << summary["best"][0]["id"] << ")";
  }
  std::cout << "\n";
  if (summary["completed"] == 0) {
    std::cerr << "error: every trial failed";
    for (auto it = state.history().rbegin(); it != state.history().rend(); ++it) {
      if (it->error) {
        std::cerr << " (last error: " << *it->error << ")";
        break;
      }
    }
    std::cerr << "\n";
    return 1;
  }
  return 0;
}

struct LoadedRun {
  RunConfig config;
  std::shared_ptr<const SearchSpace> space;
};

LoadedRun load_run(const fs::path& dir) {
  const json run = read_json_file((dir / "run.json").string(), "run file");
  if (!run.contains("config") || !run.contains("space_definition")) throw ValidationError("malformed run file");
  json config = run["config"];
  if (config.contains("bo") && config["bo"].is_object()) config["bo"].erase("gamma");
  LoadedRun r{run_config_from_json(config), space_from_json(run["space_definition"])};
  if (run["config"].contains("bo") && !run["config"]["bo"].value("gamma", json()).is_null()) {
    r.config.bo.gamma = run["config"]["bo"]["gamma"].get<double>();
  }
  return r;
}

std::shared_ptr<const SearchSpace> analysis_space(const std::string& space_arg, const fs::path& history) {
  if (!space_arg.empty()) return resolve_space(space_arg);
  const fs::path run = history.parent_path() / "run.json";
  if (!fs::exists(run)) throw ValidationError("no --space given and no run.json next to " + history.string());
  return load_run(history.parent_path()).space;
}

int cmd_reeval(const std::string& run_dir, const std::string& evaluator_override, int k, int repeats,
               std::uint64_t seed, const std::string& output) {
  if (k < 1) throw ValidationError("k must be >= 1");
  auto run = load_run(run_dir);
  if (!evaluator_override.empty()) run.config.evaluator = evaluator_override;
  const auto hist = read_history(fs::path(run_dir) / "history.jsonl", run.space);
  SearchState state(run.space, std::max<int>(run.config.budget, static_cast<int>(hist.trials.size())), run.config.seed,
                    run.config.bo);
  for (const auto& t : hist.trials) state.restore(t);
  auto ev = evaluator_factory(run.config, run.space)();
  const auto entries = reevaluate_best(state, k, repeats, *ev, run.space->name, seed, run.config.split);
  json out = json::array();
  for (const auto& e : entries) out.push_back(groupaug::to_json(e));
  const json doc{{"k", k}, {"repeats", repeats}, {"seed", seed}, {"results", out}};
  emit(doc.dump(2) + "\n", output.empty() ? (fs::path(run_dir) / "reeval.json").string() : output);
  for (const auto& e : entries) {
    std::cout << "trial " << e.trial_id << " mean " << format_double(e.mean) << " se "
              << format_double(e.standard_error) << " (" << e.successes << "/" << repeats << " ok)\n";
  }
  return 0;
}

int cmd_analyze(const std::string& history, const std::string& space_arg, const std::string& kind,
                const std::string& out_dir, double top_fraction, double bad_fraction, double best_fraction,
                std::uint64_t seed) {
  const auto space = analysis_space(space_arg, history);
  const auto hist = read_history(history, space);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw ValidationError("output dir " + out_dir + " cannot be created");
  const bool importance = kind == "importance" || kind == "all";
  const bool density = kind == "density" || kind == "all";
  if (importance) {
    FanovaOptions opts;
    opts.best_fraction = best_fraction;
    opts.seed = seed;
    const auto rep = importance_report(hist.trials, *space, opts);
    export_report(rep, fs::path(out_dir) / "importance.csv", ExportFormat::csv);
    export_report(rep, fs::path(out_dir) / "importance.json", ExportFormat::json);
  }
  if (density) {
    const auto rep = density_report(hist.trials, *space, top_fraction, bad_fraction);
    export_report(rep, fs::path(out_dir) / "density.csv", ExportFormat::csv);
    export_report(rep, fs::path(out_dir) / "density.json", ExportFormat::json);
    for (std::size_t g = 0; g < 4; ++g) {
      if (rep.groups[g].empty) std::cerr << "note: group " << to_string(kDensityGroups[g]) << " is empty\n";
    }
  }
  return 0;
}

json parse_priors(const std::vector<std::string>& items) {
  json out = json::object();
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("--prior expects dim=confidence, got " + item);
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"groupaug: augmentation policies, prior-guided search and analysis"};
  app.require_subcommand(1);

  std::string output;

  auto* spaces = app.add_subcommand("spaces", "List builtin search spaces or dump one as JSON");
  std::string space_name;
  spaces->add_option("name", space_name, "Builtin space name or space file");
  spaces->add_option("-o,--output", output, "Write to this file instead of stdout");

  auto* augs = app.add_subcommand("augmentations", "Dump the augmentation kernel registry as JSON");
  augs->add_option("-o,--output", output, "Write to this file instead of stdout");

  auto* sample = app.add_subcommand("sample-policy", "Draw augmentation sequence lists from a prior-sampled policy");
  std::string sample_space = "group_augment";
  std::uint64_t seed = 0;
  int count = 1;
  std::vector<std::string> prior_items;
  sample->add_option("--space", sample_space, "GroupAugment space name or file")->capture_default_str();
  sample->add_option("--seed", seed, "Random seed")->capture_default_str();
  sample->add_option("--count", count, "Number of draws")->capture_default_str();
  sample->add_option("--prior", prior_items, "Prior confidence override, dim=low|medium|high|uniform");
  sample->add_option("-o,--output", output, "Write to this file instead of stdout");

  auto* apply_cmd = app.add_subcommand("apply", "Apply a policy to an image");
  std::string policy_path, input_image, output_image;
  apply_cmd->add_option("--policy", policy_path, "Policy JSON (or sample-policy output)")->required();
  apply_cmd->add_option("--input", input_image, "Input image (.png, .ppm, .pgm)")->required();
  apply_cmd->add_option("--output", output_image, "Output image (.png or PPM)")->required();
  apply_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();

  auto* search = app.add_subcommand("search", "Run a prior-guided search");
  std::string config_path;
  RunConfig over;
  std::optional<int> o_budget, o_parallelism, o_n_init;
  std::optional<std::uint64_t> o_seed;
  std::optional<double> o_gamma, o_timeout, o_noise, o_chance;
  std::string o_space, o_evaluator, o_output_dir;
  bool o_no_timing = false;
  search->add_option("--config", config_path, "Run configuration JSON");
  search->add_option("--space", o_space, "Space name or file");
  search->add_option("--evaluator", o_evaluator, "Synthetic objective name or evaluator command");
  search->add_option("--budget", o_budget, "Number of evaluations");
  search->add_option("--parallelism", o_parallelism, "Concurrent evaluations");
  search->add_option("--seed", o_seed, "Search seed");
  search->add_option("--output-dir", o_output_dir, std::string("Output directory (default $") + kOutputDirEnv + ")");
  search->add_option("--prior", prior_items, "Prior confidence override, dim=low|medium|high|uniform");
  search->add_option("--n-init", o_n_init, "Prior draws before the surrogate takes over");
  search->add_option("--gamma", o_gamma, "Prior decay constant (default budget/10)");
  search->add_option("--timeout", o_timeout, "Per-evaluation timeout in seconds");
  search->add_option("--noise-sd", o_noise, "Noise for synthetic objectives");
  search->add_option("--chance-level", o_chance, "Score at or below which an unflagged trial counts as collapsed");
  search->add_flag("--no-timing", o_no_timing, "Leave wall_time null in the history");

  auto* reeval = app.add_subcommand("reeval", "Re-evaluate the best configurations of a finished run");
  std::string run_dir, reeval_evaluator;
  int k = 5, repeats = kDefaultRepeats;
  reeval->add_option("--run-dir", run_dir, "Directory written by search")->required();
  reeval->add_option("--evaluator", reeval_evaluator, "Override the run's evaluator");
  reeval->add_option("-k,--top", k, "Number of best configurations")->capture_default_str();
  reeval->add_option("--repeats", repeats, "Evaluations per configuration")->capture_default_str();
  reeval->add_option("--seed", seed, "Seed for the repeat seeds")->capture_default_str();
  reeval->add_option("-o,--output", output, "Output JSON (default RUN_DIR/reeval.json)");

  auto* analyze = app.add_subcommand("analyze", "Export importance and density reports from a history");
  std::string history_path, analyze_space, kind = "all", analyze_out;
  double top_fraction = 0.2, bad_fraction = 0.2, best_fraction = 0.25;
  analyze->add_option("--history", history_path, "history.jsonl")->required();
  analyze->add_option("--space", analyze_space, "Space (default: run.json next to the history)");
  analyze->add_option("--kind", kind, "importance, density or all")
      ->check(CLI::IsMember({"importance", "density", "all"}))
      ->capture_default_str();
  analyze->add_option("--output-dir", analyze_out, "Where reports go (default: the history's directory)");
  analyze->add_option("--top-fraction", top_fraction, "Top group fraction")->capture_default_str();
  analyze->add_option("--bad-fraction", bad_fraction, "Bad group fraction")->capture_default_str();
  analyze->add_option("--best-fraction", best_fraction, "Best subset for importance")->capture_default_str();
  analyze->add_option("--seed", seed, "Forest seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*spaces) return cmd_spaces(space_name, output);
    if (*augs) return cmd_augmentations(output);
    if (*sample) return cmd_sample_policy(sample_space, parse_priors(prior_items), seed, count, output);
    if (*apply_cmd) return cmd_apply(policy_path, input_image, output_image, seed);
    if (*search) {
      RunConfig cfg;
      if (!config_path.empty()) cfg = run_config_from_json(read_json_file(config_path, "run config"));
      if (!o_space.empty()) cfg.space = o_space;
      if (!o_evaluator.empty()) cfg.evaluator = o_evaluator;
      if (o_budget) cfg.budget = *o_budget;
      if (o_parallelism) cfg.parallelism = *o_parallelism;
      if (o_seed) cfg.seed = *o_seed;
      if (!o_output_dir.empty()) cfg.output_dir = o_output_dir;
      if (cfg.output_dir.empty()) cfg.output_dir = default_output_dir();
      for (const auto& [dim, conf] : parse_priors(prior_items).items()) cfg.priors[dim] = conf;
      if (o_n_init) cfg.bo.n_init = *o_n_init;
      if (o_gamma) cfg.bo.gamma = *o_gamma;
      if (o_timeout) cfg.timeout_s = *o_timeout;
      if (o_noise) cfg.noise_sd = *o_noise;
      if (o_chance) cfg.chance_level = *o_chance;
      if (o_no_timing) cfg.timing = false;
      return cmd_search(std::move(cfg));
    }
    if (*reeval) return cmd_reeval(run_dir, reeval_evaluator, k, repeats, seed, output);
    if (*analyze) {
      const std::string out = analyze_out.empty() ? fs::path(history_path).parent_path().string() : analyze_out;
      return cmd_analyze(history_path, analyze_space, kind, out.empty() ? "." : out, top_fraction, bad_fraction,
                         best_fraction, seed);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
