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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "cli_util.hpp"
#include "criteria.hpp"

namespace {

using namespace groupaug;
namespace fs = std::filesystem;
using nlohmann::json;

std::string fake(const std::string& args) { return std::string(GROUPAUG_FAKE_EVALUATOR) + " " + args; }

TEST(Cli, SpacesListsAllBuiltins) {
  const auto r = cli::run({"spaces"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out, "simsiam_aug\nsimsiam_training\ngroup_augment\nrandaugment\nsmartaugment\n");
}

TEST(Cli, SpacesDumpsLoadableJson) {
  const auto dir = cli::scratch_dir("cli_spaces");
  const auto r = cli::run({"spaces", "simsiam_training", "-o", (dir / "s.json").string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto back = resolve_space((dir / "s.json").string());
  EXPECT_EQ(to_json(*back), to_json(*builtin_space("simsiam_training")));
  EXPECT_EQ(cli::run({"spaces", (dir / "s.json").string()}).exit_code, 0);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(cli::run({"spaces", "nope"}).exit_code, 2);
  EXPECT_EQ(cli::run({"frobnicate"}).exit_code, 2);
  EXPECT_EQ(cli::run({}).exit_code, 2);
  EXPECT_EQ(cli::run({"search", "--space", "simsiam_aug"}).exit_code, 2);  // no evaluator
  EXPECT_EQ(cli::run({"search", "--space", "simsiam_aug", "--evaluator", "quadratic", "--budget", "0"}).exit_code, 2);
  EXPECT_EQ(cli::run({"search", "--space", "randaugment", "--evaluator", "collapse_valley", "--budget", "2",
                      "--output-dir", (cli::scratch_dir("cli_usage") / "r").string()})
                .exit_code,
            2);
  EXPECT_EQ(cli::run({"sample-policy", "--space", "randaugment"}).exit_code, 2);
  EXPECT_EQ(cli::run({"sample-policy", "--prior", "p_color_transformations"}).exit_code, 2);
  EXPECT_EQ(cli::run({"sample-policy", "--prior", "nope=high"}).exit_code, 2);
  EXPECT_EQ(cli::run({"analyze"}).exit_code, 2);
  EXPECT_EQ(cli::run({"--help"}).exit_code, 0);
}

TEST(Cli, AugmentationsRegistry) {
  const auto r = cli::run({"augmentations"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.dump(), registry_json().dump());
}

TEST(Cli, SamplePolicyAndApply) {
  const auto dir = cli::scratch_dir("cli_apply");
  auto r = cli::run({"sample-policy", "--seed", "3", "--count", "5", "-o", (dir / "p.json").string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto doc = json::parse(cli::slurp(dir / "p.json"));
  EXPECT_EQ(doc["draws"].size(), 5u);
  EXPECT_EQ(doc["space"], "group_augment");
  EXPECT_EQ(cli::run({"sample-policy", "--seed", "3", "--count", "5"}).out, cli::slurp(dir / "p.json"));

  // prior overrides are accepted per dimension
  r = cli::run({"sample-policy", "--seed", "3", "--prior", "p_color_transformations=uniform"});
  EXPECT_EQ(r.exit_code, 0) << r.err;

  const Image input = oracle::random_image(24, 16, 3);
  save_image(input, dir / "in.png");
  r = cli::run({"apply", "--policy", (dir / "p.json").string(), "--input", (dir / "in.png").string(), "--output",
                (dir / "out.png").string(), "--seed", "9"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const Image out = load_image(dir / "out.png");
  EXPECT_EQ(out.width(), input.width());
  EXPECT_EQ(out.height(), input.height());

  // same policy through the library
  Rng rng(9);
  const Image want = apply(policy_from_json(doc["policy"]), input, rng);
  EXPECT_TRUE(out == want);
}

TEST(Cli, ApplyOtherPolicyKindsAndErrors) {
  const auto dir = cli::scratch_dir("cli_apply2");
  save_image(oracle::random_image(20, 20, 3), dir / "in.ppm");
  const Policy p = RandAugmentPolicy{2, 9};
  write_text(dir / "ra.json", to_json(p).dump());
  auto r = cli::run({"apply", "--policy", (dir / "ra.json").string(), "--input", (dir / "in.ppm").string(),
                     "--output", (dir / "out.ppm").string()});
  EXPECT_EQ(r.exit_code, 0) << r.err;

  r = cli::run({"apply", "--policy", (dir / "ra.json").string(), "--input", (dir / "missing.png").string(),
                "--output", (dir / "o.png").string()});
  EXPECT_EQ(r.exit_code, 1);
  r = cli::run({"apply", "--policy", (dir / "ra.json").string(), "--input", (dir / "in.ppm").string(), "--output",
                "/dev/full"});
  EXPECT_EQ(r.exit_code, 1);
  write_text(dir / "bad.json", "{\"kind\": \"nope\"}");
  r = cli::run({"apply", "--policy", (dir / "bad.json").string(), "--input", (dir / "in.ppm").string(), "--output",
                (dir / "o.png").string()});
  EXPECT_EQ(r.exit_code, 2);
}

TEST(Cli, SearchWritesArtifacts) {
  const auto dir = cli::scratch_dir("cli_search");
  const auto r = cli::run({"search", "--space", "simsiam_aug", "--evaluator", "quadratic", "--budget", "15", "--seed",
                           "2", "--output-dir", (dir / "run").string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("trials 15 completed 15"), std::string::npos) << r.out;
  const auto space = builtin_space("simsiam_aug");
  const auto h = read_history(dir / "run" / "history.jsonl", space);
  EXPECT_EQ(h.trials.size(), 15u);
  EXPECT_TRUE(h.trials[0].wall_time_s.has_value());
  const auto run = json::parse(cli::slurp(dir / "run" / "run.json"));
  EXPECT_EQ(run["config"]["seed"], 2);
  EXPECT_EQ(run["space_definition"], to_json(*space));
  const auto summary = json::parse(cli::slurp(dir / "run" / "summary.json"));
  EXPECT_EQ(summary["best"].size(), 5u);
  EXPECT_EQ(summary["incumbent_trajectory"].size(), 15u);
}

TEST(Cli, OutputDirFromEnvironment) {
  const auto dir = cli::scratch_dir("cli_env");
  const auto r = cli::run({"search", "--space", "randaugment", "--evaluator", "additive_mix", "--budget", "3"}, dir,
                          {"GROUPAUG_OUTPUT_DIR=envout"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "envout" / "history.jsonl"));
  const auto r2 = cli::run({"search", "--space", "randaugment", "--evaluator", "additive_mix", "--budget", "3"}, dir);
  ASSERT_EQ(r2.exit_code, 0) << r2.err;
  EXPECT_TRUE(fs::exists(dir / "groupaug-out" / "history.jsonl"));
}

TEST(Cli, AllTrialsFailedExitsOne) {
  const auto dir = cli::scratch_dir("cli_fail");
  const auto r = cli::run({"search", "--space", "randaugment", "--evaluator", fake("error"), "--budget", "3",
                           "--output-dir", (dir / "run").string()});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("simulated failure"), std::string::npos) << r.err;
  EXPECT_EQ(criteria::read_lines(dir / "run" / "history.jsonl").size(), 3u);
}

TEST(Cli, UnwritableOutputDirIsUsageError) {
  const auto r = cli::run({"search", "--space", "randaugment", "--evaluator", "quadratic", "--budget", "2",
                           "--output-dir", "/dev/null/run"});
  EXPECT_EQ(r.exit_code, 2);
}

TEST(Cli, SubprocessEvaluatorSearch) {
  const auto dir = cli::scratch_dir("cli_sub");
  auto r = cli::run({"search", "--space", "simsiam_aug", "--evaluator", fake("quadratic"), "--budget", "12",
                     "--parallelism", "3", "--seed", "4", "--output-dir", (dir / "sub").string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  r = cli::run({"search", "--space", "simsiam_aug", "--evaluator", "quadratic", "--budget", "12", "--parallelism", "3",
                "--seed", "4", "--output-dir", (dir / "mem").string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto space = builtin_space("simsiam_aug");
  const auto a = read_history(dir / "sub" / "history.jsonl", space).trials;
  EXPECT_EQ(a.size(), 12u);
  for (const auto& t : a) {
    EXPECT_EQ(t.status, TrialStatus::completed);
    EXPECT_NEAR(*t.score, *synthetic_objective("quadratic", t.configuration).score, 1e-12);
  }
}

TEST(Cli, TimeoutBecomesFailedTrial) {
  const auto dir = cli::scratch_dir("cli_timeout");
  const auto r = cli::run({"search", "--space", "randaugment", "--evaluator", fake("sleep 5"), "--budget", "1",
                           "--timeout", "0.3", "--output-dir", (dir / "run").string()});
  EXPECT_EQ(r.exit_code, 1);
  const auto h = read_history(dir / "run" / "history.jsonl", builtin_space("randaugment"));
  ASSERT_EQ(h.trials.size(), 1u);
  EXPECT_EQ(h.trials[0].status, TrialStatus::failed);
}

TEST(Cli, DeterministicWithoutTiming) {
  const auto dir = cli::scratch_dir("cli_det");
  for (const char* name : {"a", "b"}) {
    fs::create_directories(dir / name);
    const auto r = cli::run({"search", "--space", "smartaugment", "--evaluator", "additive_mix", "--budget", "20",
                             "--seed", "5", "--output-dir", "run", "--no-timing"},
                            dir / name);
    ASSERT_EQ(r.exit_code, 0) << r.err;
  }
  for (const char* f : {"history.jsonl", "summary.json", "run.json"}) {
    EXPECT_EQ(cli::slurp(dir / "a" / "run" / f), cli::slurp(dir / "b" / "run" / f)) << f;
  }
}

TEST(Cli, KillAndResumeMatchesUninterruptedRun) {
  const auto dir = cli::scratch_dir("cli_resume");
  const std::vector<std::string> base = {"search",   "--space", "simsiam_aug", "--evaluator", "collapse_valley",
                                         "--budget", "25",      "--seed",      "6",           "--no-timing"};
  auto with_dir = [&](const std::string& d) {
    auto a = base;
    a.push_back("--output-dir");
    a.push_back((dir / d).string());
    return a;
  };
  ASSERT_EQ(cli::run(with_dir("full")).exit_code, 0);
  ASSERT_EQ(cli::run(with_dir("cut")).exit_code, 0);
  const std::string text = cli::slurp(dir / "cut" / "history.jsonl");

  // simulate a crash mid-write of record 11
  std::size_t cut = 0;
  for (int n = 0; n < 10; ++n) cut = text.find('\n', cut) + 1;
  fs::resize_file(dir / "cut" / "history.jsonl", cut + 20);
  fs::remove(dir / "cut" / "summary.json");

  const auto r = cli::run(with_dir("cut"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.err.find("resuming with 10"), std::string::npos) << r.err;
  EXPECT_EQ(cli::slurp(dir / "cut" / "history.jsonl"), cli::slurp(dir / "full" / "history.jsonl"));
  EXPECT_EQ(cli::slurp(dir / "cut" / "summary.json"), cli::slurp(dir / "full" / "summary.json"));

  // finished run: rerunning adds nothing
  ASSERT_EQ(cli::run(with_dir("cut")).exit_code, 0);
  EXPECT_EQ(criteria::read_lines(dir / "cut" / "history.jsonl").size(), 25u);
}

TEST(Cli, ResumeWithDifferentSeedIsRejected) {
  const auto dir = cli::scratch_dir("cli_seed");
  ASSERT_EQ(cli::run({"search", "--space", "randaugment", "--evaluator", "quadratic", "--budget", "4", "--seed", "1",
                      "--output-dir", (dir / "run").string()})
                .exit_code,
            0);
  const std::string before = cli::slurp(dir / "run" / "history.jsonl");
  const auto r = cli::run({"search", "--space", "randaugment", "--evaluator", "quadratic", "--budget", "4", "--seed",
                           "2", "--output-dir", (dir / "run").string()});
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(cli::slurp(dir / "run" / "history.jsonl"), before);
  EXPECT_EQ(cli::run({"search", "--space", "smartaugment", "--evaluator", "quadratic", "--budget", "4", "--seed", "1",
                      "--output-dir", (dir / "run").string()})
                .exit_code,
            2);
}

TEST(Cli, AnalyzeWritesReports) {
  const auto dir = cli::scratch_dir("cli_analyze");
  ASSERT_EQ(cli::run({"search", "--space", "simsiam_training", "--evaluator", "quadratic", "--budget", "30",
                      "--output-dir", (dir / "run").string()})
                .exit_code,
            0);
  auto r = cli::run({"analyze", "--history", (dir / "run" / "history.jsonl").string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.err.find("group collapsed is empty"), std::string::npos);
  std::ifstream csv(dir / "run" / "importance.csv");
  const auto rep = parse_importance_csv(csv);
  EXPECT_EQ(rep.dimensions.size(), 6u);
  const auto dj = json::parse(cli::slurp(dir / "run" / "density.json"));
  EXPECT_EQ(dj["dimensions"].size(), 6u);

  r = cli::run({"analyze", "--history", (dir / "run" / "history.jsonl").string(), "--kind", "density",
                "--output-dir", (dir / "only").string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "only" / "density.csv"));
  EXPECT_FALSE(fs::exists(dir / "only" / "importance.csv"));

  EXPECT_EQ(cli::run({"analyze", "--history", (dir / "run" / "history.jsonl").string(), "--kind", "bogus"}).exit_code,
            2);
  EXPECT_EQ(cli::run({"analyze", "--history", (dir / "nothing.jsonl").string(), "--space", "randaugment"}).exit_code,
            1);
}

TEST(Cli, AnalyzeTooFewTrials) {
  const auto dir = cli::scratch_dir("cli_few");
  ASSERT_EQ(cli::run({"search", "--space", "simsiam_aug", "--evaluator", "quadratic", "--budget", "5",
                      "--output-dir", (dir / "run").string()})
                .exit_code,
            0);
  const auto r = cli::run({"analyze", "--history", (dir / "run" / "history.jsonl").string()});
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("insufficient trials"), std::string::npos) << r.err;
}

TEST(Cli, Reeval) {
  const auto dir = cli::scratch_dir("cli_reeval");
  ASSERT_EQ(cli::run({"search", "--space", "simsiam_aug", "--evaluator", "quadratic", "--budget", "12",
                      "--noise-sd", "0.01", "--output-dir", (dir / "run").string()})
                .exit_code,
            0);
  auto r = cli::run({"reeval", "--run-dir", (dir / "run").string(), "-k", "3", "--repeats", "4"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto j = json::parse(cli::slurp(dir / "run" / "reeval.json"));
  ASSERT_EQ(j["results"].size(), 3u);
  for (const auto& e : j["results"]) {
    EXPECT_EQ(e["seeds"].size(), 4u);
    EXPECT_EQ(e["successes"], 4);
    EXPECT_GT(e["standard_error"].get<double>(), 0.0);
  }
  r = cli::run({"reeval", "--run-dir", (dir / "run").string(), "-k", "3", "--evaluator", "quadratic", "--repeats",
                "2", "-o", (dir / "det.json").string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  for (const auto& e : json::parse(cli::slurp(dir / "det.json"))["results"]) EXPECT_EQ(e["standard_error"], 0.0);
  EXPECT_EQ(cli::run({"reeval", "--run-dir", (dir / "run").string(), "-k", "13"}).exit_code, 2);
  EXPECT_EQ(cli::run({"reeval", "--run-dir", (dir / "missing").string()}).exit_code, 2);
}

TEST(Cli, SampleConfigsRun) {
  const fs::path configs = GROUPAUG_CONFIG_DIR;
  int seen = 0;
  for (const auto& e : fs::directory_iterator(configs)) {
    if (e.path().extension() != ".json") continue;
    ++seen;
    const auto dir = cli::scratch_dir("cli_config");
    std::vector<std::string> args = {"search", "--config", e.path().string(), "--budget", "3", "--output-dir",
                                     (dir / "run").string()};
    // external commands are swapped for the scripted evaluator
    const auto cfg = json::parse(cli::slurp(e.path()));
    if (cfg.contains("evaluator") && cfg["evaluator"].get<std::string>().find(' ') != std::string::npos) {
      args.push_back("--evaluator");
      args.push_back(fake("quadratic"));
    }
    const auto r = cli::run(args);
    EXPECT_EQ(r.exit_code, 0) << e.path() << ": " << r.err;
    const auto run = json::parse(cli::slurp(dir / "run" / "run.json"));
    EXPECT_EQ(run["config"]["space"], cfg["space"]) << e.path();
  }
  EXPECT_GE(seen, 3);
}

TEST(Cli, ConfigErrors) {
  const auto dir = cli::scratch_dir("cli_cfg");
  write_text(dir / "unknown.json", R"({"space": "randaugment", "evaluator": "quadratic", "bugdet": 5})");
  write_text(dir / "badbo.json", R"({"space": "randaugment", "evaluator": "quadratic", "bo": {"n_int": 3}})");
  write_text(dir / "notjson.json", "{");
  for (const char* f : {"unknown.json", "badbo.json", "notjson.json", "absent.json"}) {
    EXPECT_EQ(cli::run({"search", "--config", (dir / f).string(), "--output-dir", (dir / "r").string()}).exit_code, 2)
        << f;
  }
}

TEST(Cli, BudgetConformanceCriterion) {
  const auto o = criteria::budget_conformance();
  EXPECT_TRUE(o.pass) << o.detail;
}

TEST(Cli, DeterminismCriterion) {
  const auto o = criteria::cli_determinism();
  EXPECT_TRUE(o.pass) << o.detail;
}

}  // namespace
