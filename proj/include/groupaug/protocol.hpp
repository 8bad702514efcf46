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

// Objective wire protocol, version 1. One JSON object per line.
//
//   request:  {"protocol_version":1,"trial_id":7,"space_name":"simsiam_aug",
//              "values":{...},"seed":123,"split":"validation"}
//   response: {"protocol_version":1,"trial_id":7,"score":0.91,
//              "collapsed":false,"metrics":{"embedding_std":0.02}}
//             or {"protocol_version":1,"trial_id":7,"error":"out of memory"}
//   shutdown: {"protocol_version":1,"shutdown":true}
//
// Scores are accuracies in [0, 1]; percentages are rejected.

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"

#include "groupaug/errors.hpp"

namespace groupaug {

inline constexpr int kProtocolVersion = 1;

enum class Split { validation, test };

inline std::string_view to_string(Split s) { return s == Split::validation ? "validation" : "test"; }

inline Split parse_split(std::string_view s) {
  if (s == "validation") return Split::validation;
  if (s == "test") return Split::test;
  throw ValidationError("unknown split: " + std::string(s));
}

struct ObjectiveRequest {
  std::uint64_t trial_id = 0;
  std::string space_name;
  nlohmann::json values = nlohmann::json::object();
  std::uint64_t seed = 0;
  Split split = Split::validation;
};

struct ObjectiveResponse {
  std::uint64_t trial_id = 0;
  std::optional<double> score;
  std::optional<bool> collapsed;  // absent: the harness applies the chance-level rule
  std::map<std::string, double> metrics;
  std::optional<std::string> error;

  static ObjectiveResponse failure(std::uint64_t id, std::string message) {
    ObjectiveResponse r;
    r.trial_id = id;
    r.error = std::move(message);
    return r;
  }
};

inline nlohmann::json to_json(const ObjectiveRequest& r) {
  return {{"protocol_version", kProtocolVersion},
          {"trial_id", r.trial_id},
          {"space_name", r.space_name},
          {"values", r.values},
          {"seed", r.seed},
          {"split", to_string(r.split)}};
}

inline ObjectiveRequest request_from_json(const nlohmann::json& j) {
  try {
    if (j.value("protocol_version", 0) != kProtocolVersion) throw ValidationError("unsupported protocol_version");
    ObjectiveRequest r;
    r.trial_id = j.at("trial_id").get<std::uint64_t>();
    r.space_name = j.at("space_name").get<std::string>();
    r.values = j.at("values");
    if (!r.values.is_object()) throw ValidationError("request values must be an object");
    r.seed = j.at("seed").get<std::uint64_t>();
    r.split = parse_split(j.at("split").get<std::string>());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed request: ") + e.what());
  }
}

inline nlohmann::json to_json(const ObjectiveResponse& r) {
  nlohmann::json j{{"protocol_version", kProtocolVersion}, {"trial_id", r.trial_id}};
  if (r.error) {
    j["error"] = *r.error;
    return j;
  }
  j["score"] = r.score.value_or(0.0);
  if (r.collapsed) j["collapsed"] = *r.collapsed;
  j["metrics"] = r.metrics;
  return j;
}

// Schema check for one response line. Throws ProtocolError.
inline ObjectiveResponse response_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ProtocolError("response is not a JSON object");
  if (j.contains("protocol_version") && j["protocol_version"] != kProtocolVersion) {
    throw ProtocolError("unsupported protocol_version in response");
  }
  if (!j.contains("trial_id") || !j["trial_id"].is_number_unsigned()) {
    throw ProtocolError("response needs an unsigned integer trial_id");
  }
  ObjectiveResponse r;
  r.trial_id = j["trial_id"].get<std::uint64_t>();
  const bool has_error = j.contains("error") && !j["error"].is_null();
  const bool has_score = j.contains("score") && !j["score"].is_null();
  if (has_error == has_score) throw ProtocolError("response needs exactly one of score and error");
  if (has_error) {
    if (!j["error"].is_string()) throw ProtocolError("error must be a string");
    r.error = j["error"].get<std::string>();
    return r;
  }
  if (!j["score"].is_number()) throw ProtocolError("score must be a number");
  const double s = j["score"].get<double>();
  if (!(s >= 0.0 && s <= 1.0)) throw ProtocolError("score must be an accuracy fraction in [0, 1]");
  r.score = s;
  if (j.contains("collapsed") && !j["collapsed"].is_null()) {
    if (!j["collapsed"].is_boolean()) throw ProtocolError("collapsed must be a boolean");
    r.collapsed = j["collapsed"].get<bool>();
  }
  if (j.contains("metrics") && !j["metrics"].is_null()) {
    if (!j["metrics"].is_object()) throw ProtocolError("metrics must be an object");
    for (const auto& [k, v] : j["metrics"].items()) {
      if (!v.is_number()) throw ProtocolError("metric " + k + " must be a number");
      r.metrics[k] = v.get<double>();
    }
  }
  return r;
}

inline nlohmann::json shutdown_message() { return {{"protocol_version", kProtocolVersion}, {"shutdown", true}}; }

}  // namespace groupaug
