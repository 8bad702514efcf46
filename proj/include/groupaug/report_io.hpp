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

// Exports for analysis reports, as CSV and as JSON carrying the same content.
//
// importance.csv   dimension,share_all,percent_all,share_best,percent_best
// density.csv      dimension,kind,x,value,top,bad,all,collapsed
//
// In density.csv, numeric dimensions contribute one row per grid point (x is
// the search coordinate, value the parameter value) and categorical
// dimensions one row per choice (x is the choice index, value its name). A
// group with no members keeps its column, with empty cells; the JSON mirror
// flags it with "empty": true. Percentages are shares * 100 rounded to the
// nearest integer.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "json.hpp"

#include "groupaug/density.hpp"
#include "groupaug/errors.hpp"
#include "groupaug/fanova.hpp"

namespace groupaug {

enum class ExportFormat { csv, json };

inline ExportFormat parse_export_format(std::string_view s) {
  if (s == "csv") return ExportFormat::csv;
  if (s == "json") return ExportFormat::json;
  throw ValidationError("unknown export format: " + std::string(s));
}

// Shortest text that reads back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write to " + path.string() + " failed");
}

// ---- importance --------------------------------------------------------------

inline nlohmann::json to_json(const ImportanceReport& r) {
  auto subset = [&](const SubsetImportance& s) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < r.dimensions.size(); ++i) {
      rows.push_back({{"dimension", r.dimensions[i]}, {"share", s.shares[i]}, {"percent", display_percent(s.shares[i])}});
    }
    return nlohmann::json{{"n_trials", s.n_trials}, {"constant", s.constant}, {"importance", rows}};
  };
  return {{"kind", "importance"}, {"best_fraction", r.best_fraction}, {"all", subset(r.all)}, {"best", subset(r.best)}};
}

inline std::string importance_csv(const ImportanceReport& r) {
  std::string out = "dimension,share_all,percent_all,share_best,percent_best\n";
  for (std::size_t i = 0; i < r.dimensions.size(); ++i) {
    out += csv_field(r.dimensions[i]) + "," + format_double(r.all.shares[i]) + "," +
           std::to_string(display_percent(r.all.shares[i])) + "," + format_double(r.best.shares[i]) + "," +
           std::to_string(display_percent(r.best.shares[i])) + "\n";
  }
  return out;
}

// Dimension names and shares back from importance.csv.
inline ImportanceReport parse_importance_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{"dimension", "share_all", "percent_all",
                                                                                   "share_best", "percent_best"}) {
    throw ValidationError("importance CSV: unexpected header");
  }
  ImportanceReport r;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 5) throw ValidationError("importance CSV: expected 5 fields");
    r.dimensions.push_back(f[0]);
    r.all.shares.push_back(std::stod(f[1]));
    r.best.shares.push_back(std::stod(f[3]));
  }
  return r;
}

// ---- density -----------------------------------------------------------------

inline nlohmann::json to_json(const DensityReport& r) {
  nlohmann::json groups = nlohmann::json::object();
  for (std::size_t g = 0; g < 4; ++g) {
    const auto& info = r.groups[g];
    groups[std::string(to_string(kDensityGroups[g]))] = {
        {"count", info.count},
        {"empty", info.empty},
        {"score_cutoff", info.score_cutoff ? nlohmann::json(*info.score_cutoff) : nlohmann::json(nullptr)}};
  }
  nlohmann::json dims = nlohmann::json::array();
  for (const auto& d : r.dimensions) {
    nlohmann::json jd{{"name", d.name}, {"kind", to_string(d.kind)}};
    if (d.kind == DimKind::categorical) {
      jd["choices"] = d.choices;
    } else {
      jd["log_scale"] = d.log_scale;
      jd["grid"] = d.grid;
      jd["values"] = d.grid_values;
    }
    nlohmann::json est = nlohmann::json::object();
    for (std::size_t g = 0; g < 4; ++g) {
      const std::string name(to_string(kDensityGroups[g]));
      if (d.estimates[g].empty()) {
        est[name] = {{"empty", true}};
      } else {
        est[name] = {{"empty", false}, {d.kind == DimKind::categorical ? "frequency" : "density", d.estimates[g]}};
        if (d.kind != DimKind::categorical) est[name]["bandwidth"] = d.bandwidth[g];
      }
    }
    jd["groups"] = est;
    dims.push_back(std::move(jd));
  }
  return {{"kind", "density"},
          {"top_fraction", r.top_fraction},
          {"bad_fraction", r.bad_fraction},
          {"grid_points", kDensityGridPoints},
          {"groups", groups},
          {"dimensions", dims}};
}

inline std::string density_csv(const DensityReport& r) {
  std::string out = "dimension,kind,x,value,top,bad,all,collapsed\n";
  for (const auto& d : r.dimensions) {
    const bool cat = d.kind == DimKind::categorical;
    const std::size_t rows = cat ? d.choices.size() : d.grid.size();
    for (std::size_t i = 0; i < rows; ++i) {
      out += csv_field(d.name) + "," + std::string(to_string(d.kind)) + ",";
      out += cat ? std::to_string(i) + "," + csv_field(d.choices[i]) : format_double(d.grid[i]) + "," +
                                                                          format_double(d.grid_values[i]);
      for (std::size_t g = 0; g < 4; ++g) {
        out += ",";
        if (!d.estimates[g].empty()) out += format_double(d.estimates[g][i]);
      }
      out += "\n";
    }
  }
  return out;
}

// Grids and estimates back from density.csv. Group counts are not stored in
// the CSV; a group reads back as empty exactly when its cells are empty.
inline DensityReport parse_density_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{"dimension", "kind", "x", "value",
                                                                                   "top", "bad", "all", "collapsed"}) {
    throw ValidationError("density CSV: unexpected header");
  }
  DensityReport r;
  for (auto& g : r.groups) g.empty = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 8) throw ValidationError("density CSV: expected 8 fields");
    if (r.dimensions.empty() || r.dimensions.back().name != f[0]) {
      DimensionDensity d;
      d.name = f[0];
      d.kind = f[1] == "categorical" ? DimKind::categorical : f[1] == "integer" ? DimKind::integer : DimKind::real;
      r.dimensions.push_back(std::move(d));
    }
    auto& d = r.dimensions.back();
    if (d.kind == DimKind::categorical) {
      d.choices.push_back(f[3]);
    } else {
      d.grid.push_back(std::stod(f[2]));
      d.grid_values.push_back(std::stod(f[3]));
    }
    for (std::size_t g = 0; g < 4; ++g) {
      if (f[4 + g].empty()) continue;
      d.estimates[g].push_back(std::stod(f[4 + g]));
      r.groups[g].empty = false;
    }
  }
  return r;
}

// ---- files -------------------------------------------------------------------

template <typename Report>
std::string render(const Report& r, ExportFormat format) {
  if (format == ExportFormat::json) return to_json(r).dump(2) + "\n";
  if constexpr (std::is_same_v<Report, ImportanceReport>) {
    return importance_csv(r);
  } else {
    return density_csv(r);
  }
}

template <typename Report>
void export_report(const Report& r, const std::filesystem::path& path, ExportFormat format) {
  write_text(path, render(r, format));
}

}  // namespace groupaug
