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

// Typed hyperparameter spaces. Five builtin spaces reproduce the tables the
// toolkit searches over; custom spaces load from JSON.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "groupaug/errors.hpp"

namespace groupaug {

enum class DimKind { real, integer, categorical };

// Prior concentration around the default. `uniform` overrides the Gaussian
// prior with a flat one.
enum class Confidence { low, medium, high, uniform };

using Value = std::variant<double, std::int64_t, std::string>;

inline double as_double(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  throw ValidationError("expected a numeric value");
}

inline std::string_view to_string(DimKind k) {
  switch (k) {
    case DimKind::real: return "float";
    case DimKind::integer: return "integer";
    default: return "categorical";
  }
}

inline std::string_view to_string(Confidence c) {
  switch (c) {
    case Confidence::low: return "low";
    case Confidence::medium: return "medium";
    case Confidence::high: return "high";
    default: return "uniform";
  }
}

inline Confidence parse_confidence(std::string_view s) {
  if (s == "low") return Confidence::low;
  if (s == "medium") return Confidence::medium;
  if (s == "high") return Confidence::high;
  if (s == "uniform") return Confidence::uniform;
  throw ValidationError("unknown prior confidence: " + std::string(s));
}

struct Dimension {
  std::string name;
  DimKind kind = DimKind::real;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::string> choices;
  bool log_scale = false;
  Value default_value = 0.0;
  Confidence confidence = Confidence::medium;

  static Dimension real(std::string name, double lo, double hi, double def, bool log = false) {
    Dimension d{std::move(name), DimKind::real, lo, hi, {}, log, def, Confidence::medium};
    d.validate();
    return d;
  }
  static Dimension integer(std::string name, std::int64_t lo, std::int64_t hi, std::int64_t def) {
    Dimension d{std::move(name), DimKind::integer, static_cast<double>(lo), static_cast<double>(hi), {}, false, def,
                Confidence::medium};
    d.validate();
    return d;
  }
  static Dimension categorical(std::string name, std::vector<std::string> choices, std::string def) {
    Dimension d{std::move(name), DimKind::categorical, 0.0, 0.0, std::move(choices), false, std::move(def),
                Confidence::medium};
    d.validate();
    return d;
  }

  bool numeric() const noexcept { return kind != DimKind::categorical; }

  std::size_t choice_index(const std::string& c) const {
    auto it = std::find(choices.begin(), choices.end(), c);
    if (it == choices.end()) throw ValidationError(name + ": '" + c + "' is not a valid choice");
    return static_cast<std::size_t>(it - choices.begin());
  }

  bool contains(const Value& v) const {
    switch (kind) {
      case DimKind::real: {
        const auto* d = std::get_if<double>(&v);
        return d && *d >= lo && *d <= hi;
      }
      case DimKind::integer: {
        const auto* i = std::get_if<std::int64_t>(&v);
        return i && static_cast<double>(*i) >= lo && static_cast<double>(*i) <= hi;
      }
      default: {
        const auto* s = std::get_if<std::string>(&v);
        return s && std::find(choices.begin(), choices.end(), *s) != choices.end();
      }
    }
  }

  void validate() const {
    if (name.empty()) throw ValidationError("dimension name must not be empty");
    if (kind == DimKind::categorical) {
      if (choices.empty()) throw ValidationError(name + ": categorical needs choices");
      for (std::size_t i = 0; i < choices.size(); ++i) {
        if (std::find(choices.begin() + static_cast<std::ptrdiff_t>(i) + 1, choices.end(), choices[i]) !=
            choices.end()) {
          throw ValidationError(name + ": duplicate choice " + choices[i]);
        }
      }
      if (log_scale) throw ValidationError(name + ": categorical cannot be log-scaled");
    } else {
      if (!(lo < hi)) throw ValidationError(name + ": need lo < hi");
      if (log_scale && !(lo > 0.0)) throw ValidationError(name + ": log scale needs lo > 0");
      if (kind == DimKind::integer && (lo != std::floor(lo) || hi != std::floor(hi))) {
        throw ValidationError(name + ": integer bounds must be integral");
      }
    }
    if (!contains(default_value)) throw ValidationError(name + ": default outside range");
  }

  friend bool operator==(const Dimension&, const Dimension&) = default;
};

struct SearchSpace {
  std::string name;
  std::vector<Dimension> dimensions;

  SearchSpace() = default;
  SearchSpace(std::string n, std::vector<Dimension> dims) : name(std::move(n)), dimensions(std::move(dims)) {
    validate();
  }

  std::size_t size() const noexcept { return dimensions.size(); }

  std::size_t index_of(std::string_view dim) const {
    for (std::size_t i = 0; i < dimensions.size(); ++i) {
      if (dimensions[i].name == dim) return i;
    }
    throw ValidationError("space " + name + " has no dimension " + std::string(dim));
  }
  bool has(std::string_view dim) const {
    return std::any_of(dimensions.begin(), dimensions.end(), [&](const Dimension& d) { return d.name == dim; });
  }

  void validate() const {
    for (std::size_t i = 0; i < dimensions.size(); ++i) {
      dimensions[i].validate();
      for (std::size_t j = i + 1; j < dimensions.size(); ++j) {
        if (dimensions[i].name == dimensions[j].name) {
          throw ValidationError("space " + name + ": duplicate dimension " + dimensions[i].name);
        }
      }
    }
  }

  friend bool operator==(const SearchSpace&, const SearchSpace&) = default;
};

// A point in a space: one value per dimension, in dimension order.
class Configuration {
 public:
  Configuration(std::shared_ptr<const SearchSpace> space, std::vector<Value> values)
      : space_(std::move(space)), values_(std::move(values)) {
    if (!space_) throw ValidationError("configuration without a space");
    if (values_.size() != space_->size()) throw ValidationError("configuration: wrong number of values");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!space_->dimensions[i].contains(values_[i])) {
        throw ValidationError("configuration: value for " + space_->dimensions[i].name + " outside its range");
      }
    }
  }

  const SearchSpace& space() const noexcept { return *space_; }
  const std::shared_ptr<const SearchSpace>& space_ptr() const noexcept { return space_; }
  const std::vector<Value>& values() const noexcept { return values_; }
  const Value& operator[](std::size_t i) const { return values_.at(i); }
  const Value& at(std::string_view dim) const { return values_[space_->index_of(dim)]; }

  double real(std::string_view dim) const { return as_double(at(dim)); }
  std::int64_t integer(std::string_view dim) const {
    const Value& v = at(dim);
    if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
    throw ValidationError(std::string(dim) + " is not an integer dimension");
  }
  const std::string& choice(std::string_view dim) const {
    const Value& v = at(dim);
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    throw ValidationError(std::string(dim) + " is not a categorical dimension");
  }

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.space() == b.space() && a.values_ == b.values_;
  }

 private:
  std::shared_ptr<const SearchSpace> space_;
  std::vector<Value> values_;
};

inline Configuration default_configuration(std::shared_ptr<const SearchSpace> space) {
  std::vector<Value> values;
  for (const Dimension& d : space->dimensions) values.push_back(d.default_value);
  return Configuration(std::move(space), std::move(values));
}

inline const std::vector<std::string>& builtin_space_names() {
  static const std::vector<std::string> names = {"simsiam_aug", "simsiam_training", "group_augment", "randaugment",
                                                 "smartaugment"};
  return names;
}

inline std::shared_ptr<const SearchSpace> builtin_space(std::string_view name) {
  using D = Dimension;
  if (name == "simsiam_aug") {
    return std::make_shared<const SearchSpace>(
        "simsiam_aug", std::vector<D>{
                           D::real("p_colorjitter", 0, 1, 0.8),
                           D::real("p_grayscale", 0, 1, 0.2),
                           D::real("p_horizontal_flip", 0, 1, 0.5),
                           D::real("p_solarize", 0, 1, 0.2),
                           D::real("brightness_strength", 0, 1.5, 0.4),
                           D::real("contrast_strength", 0, 1.5, 0.4),
                           D::real("saturation_strength", 0, 1.5, 0.4),
                           D::real("hue_strength", 0, 0.5, 0.1),
                           D::integer("solarize_threshold", 0, 255, 127),
                       });
  }
  if (name == "simsiam_training") {
    return std::make_shared<const SearchSpace>(
        "simsiam_training", std::vector<D>{
                                D::real("learning_rate", 0.003, 0.3, 0.03, true),
                                D::integer("warmup_epochs", 0, 80, 0),
                                D::real("warmup_multiplier", 1.0, 3.0, 1.0),
                                D::categorical("optimizer", {"AdamW", "SGD", "LARS"}, "SGD"),
                                D::real("weight_decay_start", 5e-6, 5e-2, 5e-4, true),
                                D::real("weight_decay_end", 5e-6, 5e-2, 5e-4, true),
                            });
  }
  if (name == "group_augment") {
    return std::make_shared<const SearchSpace>(
        "group_augment", std::vector<D>{
                             D::real("p_color_transformations", 0, 1, 0.5),
                             D::real("p_geometric_transformations", 0, 1, 0.5),
                             D::real("p_non_rigid_transformations", 0, 1, 0.0),
                             D::real("p_quality_transformations", 0, 1, 0.0),
                             D::real("p_exotic_transformations", 0, 1, 0.0),
                             D::integer("num_color_transformations", 1, 5, 1),
                             D::integer("num_geometric_transformations", 1, 2, 1),
                             D::integer("num_non_rigid_transformations", 1, 3, 1),
                             D::integer("num_quality_transformations", 1, 2, 1),
                             D::integer("num_exotic_transformations", 1, 2, 1),
                             D::integer("num_total_group_samples", 1, 5, 1),
                         });
  }
  if (name == "randaugment") {
    return std::make_shared<const SearchSpace>(
        "randaugment", std::vector<D>{D::integer("num_ops", 1, 15, 3), D::integer("magnitude", 0, 30, 4)});
  }
  if (name == "smartaugment") {
    return std::make_shared<const SearchSpace>(
        "smartaugment", std::vector<D>{
                            D::integer("num_col_ops", 1, 9, 2),
                            D::integer("num_geo_ops", 1, 5, 1),
                            D::integer("col_magnitude", 0, 30, 4),
                            D::integer("geo_magnitude", 0, 30, 4),
                            D::real("p_apply_ops", 0, 1, 1.0),
                        });
  }
  throw ValidationError("unknown search space: " + std::string(name));
}

// ---- JSON ----------------------------------------------------------------

inline nlohmann::json value_to_json(const Value& v) {
  return std::visit([](const auto& x) { return nlohmann::json(x); }, v);
}

inline Value value_from_json(const Dimension& d, const nlohmann::json& j) {
  switch (d.kind) {
    case DimKind::real:
      if (!j.is_number()) throw ValidationError(d.name + ": expected a number");
      return j.get<double>();
    case DimKind::integer: {
      if (!j.is_number()) throw ValidationError(d.name + ": expected an integer");
      const double x = j.get<double>();
      if (x != std::floor(x)) throw ValidationError(d.name + ": expected an integer");
      return static_cast<std::int64_t>(x);
    }
    default:
      if (!j.is_string()) throw ValidationError(d.name + ": expected a string choice");
      return j.get<std::string>();
  }
}

inline nlohmann::json to_json(const Dimension& d) {
  nlohmann::json j{{"name", d.name}, {"type", to_string(d.kind)}};
  if (d.kind == DimKind::categorical) {
    j["choices"] = d.choices;
  } else if (d.kind == DimKind::integer) {
    j["range"] = {static_cast<std::int64_t>(d.lo), static_cast<std::int64_t>(d.hi)};
  } else {
    j["range"] = {d.lo, d.hi};
  }
  j["log"] = d.log_scale;
  j["default"] = value_to_json(d.default_value);
  j["confidence"] = to_string(d.confidence);
  return j;
}

inline Dimension dimension_from_json(const nlohmann::json& j) {
  try {
    Dimension d;
    d.name = j.at("name").get<std::string>();
    const auto type = j.at("type").get<std::string>();
    if (type == "float") {
      d.kind = DimKind::real;
    } else if (type == "integer") {
      d.kind = DimKind::integer;
    } else if (type == "categorical") {
      d.kind = DimKind::categorical;
    } else {
      throw ValidationError(d.name + ": unknown type " + type);
    }
    if (d.kind == DimKind::categorical) {
      d.choices = j.at("choices").get<std::vector<std::string>>();
      d.lo = d.hi = 0.0;  // unused; matches Dimension::categorical
    } else {
      const auto range = j.at("range");
      if (!range.is_array() || range.size() != 2) throw ValidationError(d.name + ": range must be [lo, hi]");
      d.lo = range[0].get<double>();
      d.hi = range[1].get<double>();
    }
    d.log_scale = j.value("log", false);
    d.default_value = value_from_json(d, j.at("default"));
    d.confidence = parse_confidence(j.value("confidence", std::string("medium")));
    d.validate();
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed dimension: ") + e.what());
  }
}

inline nlohmann::json to_json(const SearchSpace& s) {
  nlohmann::json dims = nlohmann::json::array();
  for (const Dimension& d : s.dimensions) dims.push_back(to_json(d));
  return {{"name", s.name}, {"dimensions", dims}};
}

inline std::shared_ptr<const SearchSpace> space_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dimensions") || !j["dimensions"].is_array()) {
    throw ValidationError("space document needs a \"dimensions\" array");
  }
  std::vector<Dimension> dims;
  for (const auto& d : j["dimensions"]) dims.push_back(dimension_from_json(d));
  return std::make_shared<const SearchSpace>(j.value("name", std::string("custom")), std::move(dims));
}

// Builtin name, or path to a JSON space document.
inline std::shared_ptr<const SearchSpace> resolve_space(const std::string& name_or_path) {
  const auto& names = builtin_space_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return builtin_space(name_or_path);
  std::ifstream in(name_or_path);
  if (!in) throw ValidationError("unknown search space: " + name_or_path);
  try {
    return space_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("cannot parse space file " + name_or_path + ": " + e.what());
  }
}

inline nlohmann::json to_json(const Configuration& c) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < c.space().size(); ++i) j[c.space().dimensions[i].name] = value_to_json(c[i]);
  return j;
}

// Every dimension must be present; extra keys are rejected.
inline Configuration configuration_from_json(std::shared_ptr<const SearchSpace> space, const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("configuration must be a JSON object");
  if (j.size() != space->size()) throw ValidationError("configuration: expected one value per dimension");
  std::vector<Value> values;
  for (const Dimension& d : space->dimensions) {
    if (!j.contains(d.name)) throw ValidationError("configuration: missing " + d.name);
    values.push_back(value_from_json(d, j[d.name]));
  }
  return Configuration(std::move(space), std::move(values));
}

// Applies {"dim": "confidence"} overrides, e.g. from a run configuration.
inline std::shared_ptr<const SearchSpace> with_confidences(const SearchSpace& base, const nlohmann::json& overrides) {
  SearchSpace copy = base;
  for (const auto& [dim, conf] : overrides.items()) {
    copy.dimensions[copy.index_of(dim)].confidence = parse_confidence(conf.get<std::string>());
  }
  return std::make_shared<const SearchSpace>(std::move(copy));
}

}  // namespace groupaug
