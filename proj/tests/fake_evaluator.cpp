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

// Scripted evaluator speaking the objective line protocol, for tests.
//
//   fake_evaluator MODE [ARG]
//
//   echo [score]     answer every request with score (default 0.5), collapsed=false
//   noflag [score]   like echo but without the collapsed field
//   quadratic        synthetic quadratic surface evaluated on the request values
//   error            answer with an error message
//   malformed        print a line that is not JSON
//   mismatch         answer with trial_id + 1
//   percent          answer with score 50 (outside [0, 1])
//   crash [n]        answer n requests (default 0), then exit 3 without answering
//   sleep [seconds]  wait before answering (default 5)
//
// A {"shutdown": true} line ends the process with exit code 0.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include "json.hpp"

#include "groupaug/evaluator.hpp"
#include "groupaug/protocol.hpp"
#include "groupaug/search_space.hpp"

int main(int argc, char** argv) {
  using nlohmann::json;
  const std::string mode = argc > 1 ? argv[1] : "echo";
  const std::string arg = argc > 2 ? argv[2] : "";
  int answered = 0;
  std::string line;
  while (std::getline(std::cin, line)) {
    const json req = json::parse(line);
    if (req.value("shutdown", false)) return 0;
    const auto id = req.at("trial_id").get<std::uint64_t>();
    json resp{{"protocol_version", 1}, {"trial_id", id}};
    if (mode == "echo" || mode == "noflag") {
      resp["score"] = arg.empty() ? 0.5 : std::stod(arg);
      if (mode == "echo") resp["collapsed"] = false;
      resp["metrics"] = {{"embedding_std", 0.02}};
    } else if (mode == "quadratic") {
      const auto space = groupaug::builtin_space(req.at("space_name").get<std::string>());
      const auto cfg = groupaug::configuration_from_json(space, req.at("values"));
      resp["score"] = *groupaug::synthetic_objective("quadratic", cfg).score;
      resp["collapsed"] = false;
    } else if (mode == "error") {
      resp["error"] = "simulated failure";
    } else if (mode == "malformed") {
      std::cout << "this is not json" << std::endl;
      continue;
    } else if (mode == "mismatch") {
      resp["trial_id"] = id + 1;
      resp["score"] = 0.5;
    } else if (mode == "percent") {
      resp["score"] = 50;
    } else if (mode == "crash") {
      if (answered >= (arg.empty() ? 0 : std::stoi(arg))) return 3;
      resp["score"] = 0.5;
    } else if (mode == "sleep") {
      std::this_thread::sleep_for(std::chrono::duration<double>(arg.empty() ? 5.0 : std::stod(arg)));
      resp["score"] = 0.5;
    } else {
      std::cerr << "fake_evaluator: unknown mode " << mode << "\n";
      return 2;
    }
    ++answered;
    std::cout << resp.dump() << std::endl;
  }
  return 0;
}
