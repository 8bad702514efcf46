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

// Search history: one finished trial per line, appended as trials finish.
//
//   {"id":3,"values":{...},"score":0.82,"collapsed":false,"metrics":{},
//    "status":"completed","wall_time":1.25}
//
// score and wall_time are null when absent; failed trials carry "error".
// A crash can leave a partial last line; loading drops it and the writer
// truncates it away before appending.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "groupaug/bo.hpp"
#include "groupaug/errors.hpp"
#include "groupaug/search_space.hpp"

namespace groupaug {

inline nlohmann::json to_json(const Trial& t) {
  nlohmann::json j;
  j["id"] = t.id;
  j["values"] = to_json(t.configuration);
  j["score"] = t.score ? nlohmann::json(*t.score) : nlohmann::json(nullptr);
  j["collapsed"] = t.collapsed;
  j["metrics"] = t.metrics;
  j["status"] = to_string(t.status);
  j["wall_time"] = t.wall_time_s ? nlohmann::json(*t.wall_time_s) : nlohmann::json(nullptr);
  if (t.error) j["error"] = *t.error;
  return j;
}

inline Trial trial_from_json(const std::shared_ptr<const SearchSpace>& space, const nlohmann::json& j) {
  try {
    Trial t{j.at("id").get<std::uint64_t>(), configuration_from_json(space, j.at("values"))};
    if (!j.at("score").is_null()) t.score = j["score"].get<double>();
    t.collapsed = j.at("collapsed").get<bool>();
    if (j.contains("metrics")) t.metrics = j["metrics"].get<std::map<std::string, double>>();
    t.status = parse_trial_status(j.at("status").get<std::string>());
    if (j.contains("wall_time") && !j["wall_time"].is_null()) t.wall_time_s = j["wall_time"].get<double>();
    if (j.contains("error") && !j["error"].is_null()) t.error = j["error"].get<std::string>();
    t.validate();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed trial record: ") + e.what());
  }
}

struct HistoryFile {
  std::vector<Trial> trials;
  std::uintmax_t valid_bytes = 0;  // length of the well-formed prefix
  bool truncated_tail = false;
};

// Reads a history file. A final line that does not parse (or lacks its
// newline) is treated as an interrupted write and skipped; a bad line anywhere
// else is an error.
inline HistoryFile read_history(const std::filesystem::path& path, const std::shared_ptr<const SearchSpace>& space) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open history file " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  HistoryFile out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    ++line_no;
    const std::size_t nl = text.find('\n', pos);
    const bool last = nl == std::string::npos || nl + 1 == text.size();
    const std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    if (nl == std::string::npos) {
      out.truncated_tail = true;  // no newline: the write never finished
      break;
    }
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error&) {
        if (last) {
          out.truncated_tail = true;
          break;
        }
        throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": not valid JSON");
      }
      out.trials.push_back(trial_from_json(space, j));
    }
    pos = nl + 1;
    out.valid_bytes = pos;
  }
  return out;
}

// Append-only writer; every record is flushed as soon as it is written.
class HistoryWriter {
 public:
  // Drops any partial tail so new records start on a fresh line.
  HistoryWriter(const std::filesystem::path& path, std::uintmax_t keep_bytes) : path_(path) {
    if (std::filesystem::exists(path) && std::filesystem::file_size(path) != keep_bytes) {
      std::filesystem::resize_file(path, keep_bytes);
    }
    out_.open(path, std::ios::binary | std::ios::app);
    if (!out_) throw IoError("cannot open history file " + path.string() + " for writing");
  }

  void append(const Trial& t) {
    out_ << to_json(t).dump() << '\n';
    out_.flush();
    if (!out_) throw IoError("write to " + path_.string() + " failed");
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace groupaug
