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

// The augmentation catalog: named kernels with typed, range-checked
// parameters, dispatch from a serializable spec, and the magnitude-level
// mapping used by the RandAugment/SmartAugment-style policies.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "groupaug/errors.hpp"
#include "groupaug/image.hpp"
#include "groupaug/kernels/color.hpp"
#include "groupaug/kernels/exotic.hpp"
#include "groupaug/kernels/geometric.hpp"
#include "groupaug/kernels/quality.hpp"
#include "groupaug/rng.hpp"

namespace groupaug {

struct ParamInfo {
  std::string name;
  double default_value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool integer = false;
  std::string unit;
};

struct KernelInfo {
  std::string name;
  std::string group;  // default catalog group id
  std::vector<ParamInfo> params;
};

// Catalog order is the group order color, geometric, non_rigid, quality,
// exotic, members in catalog order within each group.
inline const std::vector<KernelInfo>& kernel_registry() {
  static const std::vector<KernelInfo> registry = {
      {"color_jitter", "color",
       {{"brightness", 0.4, 0.0, 1.5, false, "strength"},
        {"contrast", 0.4, 0.0, 1.5, false, "strength"},
        {"saturation", 0.4, 0.0, 1.5, false, "strength"},
        {"hue", 0.1, 0.0, 0.5, false, "fraction of hue circle"}}},
      {"to_gray", "color", {}},
      {"solarize", "color", {{"threshold", 127, 0, 255, true, "intensity"}}},
      {"equalize", "color", {}},
      {"channel_shuffle", "color", {}},
      {"shift_scale_rotate", "geometric",
       {{"shift_limit", 0.0625, 0.0, 1.0, false, "fraction of side"},
        {"scale_limit", 0.1, 0.0, 0.99, false, "multiplicative delta"},
        {"rotate_limit", 45.0, 0.0, 180.0, false, "degrees"}}},
      {"horizontal_flip", "geometric", {}},
      {"elastic_transform", "non_rigid",
       {{"alpha", 0.5, 0.0, 1000.0, false, "pixels"},
        {"sigma", 10.0, 0.0, 100.0, false, "pixels"},
        {"alpha_affine", 5.0, 0.0, 100.0, false, "pixels"}}},
      {"grid_distortion", "non_rigid",
       {{"num_steps", 5, 1, 64, true, "cells per side"},
        {"distort_limit", 0.3, 0.0, 0.99, false, "fraction of cell"}}},
      {"optical_distortion", "non_rigid",
       {{"distort_limit", 0.5, 0.0, 2.0, false, "radial coefficient"},
        {"shift_limit", 0.5, 0.0, 100.0, false, "pixels"}}},
      {"gaussian_blur", "quality",
       {{"sigma_min", 0.1, 0.0, 20.0, false, "pixels"},
        {"sigma_max", 2.0, 0.0, 20.0, false, "pixels"},
        {"kernel_size", 0, 0, 255, true, "pixels, odd; 0 = 2*ceil(3*sigma)+1"}}},
      {"gauss_noise", "quality",
       {{"var_min", 10.0, 0.0, 10000.0, false, "intensity^2"},
        {"var_max", 50.0, 0.0, 10000.0, false, "intensity^2"}}},
      {"random_grid_shuffle", "exotic", {{"grid", 3, 1, 64, true, "cells per side"}}},
      {"cutout", "exotic",
       {{"num_holes", 4, 0, 64, true, "count"},
        {"hole_height", 0, 0, 4096, true, "pixels; 0 = ceil(height/8)"},
        {"hole_width", 0, 0, 4096, true, "pixels; 0 = ceil(width/8)"}}},
  };
  return registry;
}

inline const KernelInfo& find_kernel(std::string_view name) {
  const auto& reg = kernel_registry();
  auto it = std::find_if(reg.begin(), reg.end(), [&](const KernelInfo& k) { return k.name == name; });
  if (it == reg.end()) throw ValidationError("unknown augmentation: " + std::string(name));
  return *it;
}

struct AugmentationSpec {
  std::string name;
  std::map<std::string, double> params;

  double param(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) throw ValidationError(name + ": missing parameter " + key);
    return it->second;
  }
  int int_param(const std::string& key) const { return static_cast<int>(std::lround(param(key))); }

  friend bool operator==(const AugmentationSpec&, const AugmentationSpec&) = default;
  friend auto operator<=>(const AugmentationSpec&, const AugmentationSpec&) = default;
};

// Throws unless `spec` names a catalog kernel and carries exactly that
// kernel's parameters, each within range (integers integral).
inline void validate_spec(const AugmentationSpec& spec) {
  const KernelInfo& k = find_kernel(spec.name);
  if (spec.params.size() != k.params.size()) throw ValidationError(spec.name + ": wrong parameter set");
  for (const ParamInfo& p : k.params) {
    auto it = spec.params.find(p.name);
    if (it == spec.params.end()) throw ValidationError(spec.name + ": missing parameter " + p.name);
    const double v = it->second;
    if (!(v >= p.lo && v <= p.hi)) {
      throw ValidationError(spec.name + ": parameter " + p.name + " out of range");
    }
    if (p.integer && v != std::floor(v)) throw ValidationError(spec.name + ": parameter " + p.name + " must be integral");
  }
  if (spec.name == "gaussian_blur") {
    if (spec.param("sigma_max") < spec.param("sigma_min")) throw ValidationError("gaussian_blur: sigma_max < sigma_min");
    const int ks = spec.int_param("kernel_size");
    if (ks != 0 && ks % 2 == 0) throw ValidationError("gaussian_blur: kernel_size must be odd");
  }
  if (spec.name == "gauss_noise" && spec.param("var_max") < spec.param("var_min")) {
    throw ValidationError("gauss_noise: var_max < var_min");
  }
}

// Spec with catalog defaults, selected parameters overridden.
inline AugmentationSpec make_spec(std::string_view name, const std::map<std::string, double>& overrides = {}) {
  const KernelInfo& k = find_kernel(name);
  AugmentationSpec spec{k.name, {}};
  for (const ParamInfo& p : k.params) spec.params[p.name] = p.default_value;
  for (const auto& [key, value] : overrides) {
    if (!spec.params.contains(key)) throw ValidationError(spec.name + ": unknown parameter " + key);
    spec.params[key] = value;
  }
  validate_spec(spec);
  return spec;
}

inline Image apply_augmentation(const AugmentationSpec& spec, const Image& img, Rng& rng) {
  validate_spec(spec);
  namespace k = kernels;
  const std::string& n = spec.name;
  if (n == "color_jitter") {
    return k::color_jitter(img,
                           {spec.param("brightness"), spec.param("contrast"), spec.param("saturation"),
                            spec.param("hue")},
                           rng);
  }
  if (n == "to_gray") return k::to_gray(img);
  if (n == "solarize") return k::solarize(img, spec.int_param("threshold"));
  if (n == "equalize") return k::equalize(img);
  if (n == "channel_shuffle") return k::channel_shuffle(img, rng);
  if (n == "shift_scale_rotate") {
    return k::shift_scale_rotate(
        img, {spec.param("shift_limit"), spec.param("scale_limit"), spec.param("rotate_limit")}, rng);
  }
  if (n == "horizontal_flip") return k::horizontal_flip(img);
  if (n == "elastic_transform") {
    return k::elastic_transform(img, {spec.param("alpha"), spec.param("sigma"), spec.param("alpha_affine")}, rng);
  }
  if (n == "grid_distortion") {
    return k::grid_distortion(img, {spec.int_param("num_steps"), spec.param("distort_limit")}, rng);
  }
  if (n == "optical_distortion") {
    return k::optical_distortion(img, {spec.param("distort_limit"), spec.param("shift_limit")}, rng);
  }
  if (n == "gaussian_blur") {
    return k::gaussian_blur(img, {spec.param("sigma_min"), spec.param("sigma_max"), spec.int_param("kernel_size")},
                            rng);
  }
  if (n == "gauss_noise") return k::gauss_noise(img, {spec.param("var_min"), spec.param("var_max")}, rng);
  if (n == "random_grid_shuffle") return k::random_grid_shuffle(img, spec.int_param("grid"), rng);
  if (n == "cutout") {
    return k::cutout(img, {spec.int_param("num_holes"), spec.int_param("hole_height"), spec.int_param("hole_width")},
                     rng);
  }
  throw ValidationError("unknown augmentation: " + n);  // unreachable after validate_spec
}

inline constexpr int kMaxMagnitude = 30;

// Spec for `name` at magnitude `level` in [0, 30]. Strength parameters move
// linearly from their identity value at level 0 to a fixed maximum at level
// 30; structural parameters keep catalog defaults. Kernels without a
// strength parameter (to_gray, equalize, channel_shuffle, horizontal_flip)
// ignore the level. Solarize has no identity threshold inside [0, 255], so
// level 0 returns nullopt, meaning "skip".
inline std::optional<AugmentationSpec> magnitude_spec(std::string_view name, int level) {
  if (level < 0 || level > kMaxMagnitude) throw ValidationError("magnitude must be in [0, 30]");
  const double r = static_cast<double>(level) / kMaxMagnitude;
  const std::string n(name);
  if (n == "color_jitter") {
    return make_spec(n, {{"brightness", 1.5 * r}, {"contrast", 1.5 * r}, {"saturation", 1.5 * r}, {"hue", 0.5 * r}});
  }
  if (n == "solarize") {
    if (level == 0) return std::nullopt;
    return make_spec(n, {{"threshold", 255.0 - std::round(255.0 * r)}});
  }
  if (n == "shift_scale_rotate") {
    return make_spec(n, {{"shift_limit", 0.25 * r}, {"scale_limit", 0.5 * r}, {"rotate_limit", 90.0 * r}});
  }
  if (n == "elastic_transform") return make_spec(n, {{"alpha", 50.0 * r}, {"alpha_affine", 20.0 * r}});
  if (n == "grid_distortion") return make_spec(n, {{"distort_limit", 0.6 * r}});
  if (n == "optical_distortion") return make_spec(n, {{"distort_limit", 1.0 * r}, {"shift_limit", 0.5 * r}});
  if (n == "gaussian_blur") return make_spec(n, {{"sigma_min", 0.0}, {"sigma_max", 3.0 * r}});
  if (n == "gauss_noise") return make_spec(n, {{"var_min", 0.0}, {"var_max", 100.0 * r}});
  if (n == "random_grid_shuffle") return make_spec(n, {{"grid", 1.0 + std::round(2.0 * r)}});
  if (n == "cutout") return make_spec(n, {{"num_holes", std::round(8.0 * r)}});
  return make_spec(n);
}

inline void to_json(nlohmann::json& j, const AugmentationSpec& spec) {
  const KernelInfo& k = find_kernel(spec.name);
  nlohmann::json params = nlohmann::json::object();
  for (const ParamInfo& p : k.params) {
    const double v = spec.param(p.name);
    if (p.integer) {
      params[p.name] = static_cast<long long>(std::llround(v));
    } else {
      params[p.name] = v;
    }
  }
  j = nlohmann::json{{"name", spec.name}, {"params", params}};
}

// Missing parameters take catalog defaults; unknown ones are rejected.
inline void from_json(const nlohmann::json& j, AugmentationSpec& spec) {
  if (!j.is_object() || !j.contains("name") || !j["name"].is_string()) {
    throw ValidationError("augmentation spec needs a string \"name\"");
  }
  std::map<std::string, double> overrides;
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw ValidationError("augmentation \"params\" must be an object");
    for (const auto& [key, value] : j["params"].items()) {
      if (!value.is_number()) throw ValidationError("augmentation parameter " + key + " must be a number");
      overrides[key] = value.get<double>();
    }
  }
  spec = make_spec(j["name"].get<std::string>(), overrides);
}

// Machine-readable description of the catalog.
inline nlohmann::json registry_json() {
  nlohmann::json out = nlohmann::json::array();
  for (const KernelInfo& k : kernel_registry()) {
    nlohmann::json params = nlohmann::json::array();
    for (const ParamInfo& p : k.params) {
      params.push_back({{"name", p.name},
                        {"default", p.default_value},
                        {"range", {p.lo, p.hi}},
                        {"type", p.integer ? "integer" : "float"},
                        {"unit", p.unit}});
    }
    out.push_back({{"name", k.name}, {"group", k.group}, {"params", params}});
  }
  return out;
}

}  // namespace groupaug
