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

// Comparison policies (SimSiam baseline, RandAugment, SmartAugment) next to
// GroupAugment behind one value type, plus their JSON form and construction
// from a configuration of the matching builtin search space.

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "groupaug/augmentation.hpp"
#include "groupaug/errors.hpp"
#include "groupaug/image.hpp"
#include "groupaug/kernels/color.hpp"
#include "groupaug/kernels/geometric.hpp"
#include "groupaug/policy.hpp"
#include "groupaug/rng.hpp"
#include "groupaug/search_space.hpp"

namespace groupaug {

// Fixed random resized crop, then flip, color jitter, grayscale and
// solarize, each applied with its own probability.
struct SimSiamBaselinePolicy {
  double p_colorjitter = 0.8;
  double p_grayscale = 0.2;
  double p_horizontal_flip = 0.5;
  double p_solarize = 0.2;
  double brightness_strength = 0.4;
  double contrast_strength = 0.4;
  double saturation_strength = 0.4;
  double hue_strength = 0.1;
  int solarize_threshold = 127;

  void validate() const {
    for (double p : {p_colorjitter, p_grayscale, p_horizontal_flip, p_solarize}) {
      if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("simsiam_baseline: probabilities must be in [0, 1]");
    }
    kernels::validate(kernels::JitterStrengths{brightness_strength, contrast_strength, saturation_strength, hue_strength});
    if (solarize_threshold < 0 || solarize_threshold > 255) {
      throw ValidationError("simsiam_baseline: solarize_threshold must be in [0, 255]");
    }
  }

  // Every Bernoulli draw is consumed even when its probability is 0, so the
  // stream layout does not depend on the probabilities.
  Image apply(const Image& img, Rng& rng) const {
    validate();
    // The flip is decided after the crop box but applied to the source: the
    // box distribution is mirror-symmetric, so this equals flipping the crop,
    // and a symmetric image comes out identical to the crop-only output.
    const auto box = kernels::draw_resized_crop(img.height(), img.width(), rng);
    const bool flip = rng.bernoulli(p_horizontal_flip);
    Image out = kernels::crop_resize(flip ? kernels::horizontal_flip(img) : img, box);
    if (rng.bernoulli(p_colorjitter)) {
      out = kernels::color_jitter(
          out, {brightness_strength, contrast_strength, saturation_strength, hue_strength}, rng);
    }
    if (rng.bernoulli(p_grayscale)) out = kernels::to_gray(out);
    if (rng.bernoulli(p_solarize)) out = kernels::solarize(out, solarize_threshold);
    return out;
  }

  friend bool operator==(const SimSiamBaselinePolicy&, const SimSiamBaselinePolicy&) = default;
};

inline std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (const KernelInfo& k : kernel_registry()) names.push_back(k.name);
  return names;
}

inline std::vector<std::string> group_member_names(std::initializer_list<std::string_view> groups) {
  std::vector<std::string> names;
  for (const KernelInfo& k : kernel_registry()) {
    for (auto g : groups) {
      if (k.group == g) names.push_back(k.name);
    }
  }
  return names;
}

// Specs for `count` names drawn uniformly with replacement from `pool`, each
// at `magnitude`. Skipped (identity-level) ops are dropped.
inline std::vector<AugmentationSpec> draw_magnitude_ops(const std::vector<std::string>& pool, int count, int magnitude,
                                                        Rng& rng) {
  std::vector<AugmentationSpec> ops;
  for (int i = 0; i < count; ++i) {
    const auto& name = pool[rng.below(pool.size())];
    if (auto spec = magnitude_spec(name, magnitude)) ops.push_back(std::move(*spec));
  }
  return ops;
}

// num_ops kernels from the flat 14-kernel catalog, with replacement.
struct RandAugmentPolicy {
  int num_ops = 3;
  int magnitude = 4;

  void validate() const {
    if (num_ops < 1 || num_ops > 15) throw ValidationError("randaugment: num_ops must be in [1, 15]");
    if (magnitude < 0 || magnitude > kMaxMagnitude) throw ValidationError("randaugment: magnitude must be in [0, 30]");
  }

  std::vector<AugmentationSpec> draw(Rng& rng) const {
    validate();
    return draw_magnitude_ops(catalog_names(), num_ops, magnitude, rng);
  }

  Image apply(const Image& img, Rng& rng) const {
    Image out = img;
    for (const auto& spec : draw(rng)) out = apply_augmentation(spec, out, rng);
    return out;
  }

  friend bool operator==(const RandAugmentPolicy&, const RandAugmentPolicy&) = default;
};

// With probability p_apply_ops: color ops from the color group, then
// geometric ops from the geometric and non-rigid groups, both with
// replacement and at their own magnitudes.
struct SmartAugmentPolicy {
  int num_col_ops = 2;
  int num_geo_ops = 1;
  int col_magnitude = 4;
  int geo_magnitude = 4;
  double p_apply_ops = 1.0;

  void validate() const {
    if (num_col_ops < 1 || num_col_ops > 9) throw ValidationError("smartaugment: num_col_ops must be in [1, 9]");
    if (num_geo_ops < 1 || num_geo_ops > 5) throw ValidationError("smartaugment: num_geo_ops must be in [1, 5]");
    if (col_magnitude < 0 || col_magnitude > kMaxMagnitude || geo_magnitude < 0 || geo_magnitude > kMaxMagnitude) {
      throw ValidationError("smartaugment: magnitudes must be in [0, 30]");
    }
    if (!(p_apply_ops >= 0.0 && p_apply_ops <= 1.0)) throw ValidationError("smartaugment: p_apply_ops must be in [0, 1]");
  }

  std::vector<AugmentationSpec> draw(Rng& rng) const {
    validate();
    if (!rng.bernoulli(p_apply_ops)) return {};
    auto ops = draw_magnitude_ops(group_member_names({"color"}), num_col_ops, col_magnitude, rng);
    auto geo = draw_magnitude_ops(group_member_names({"geometric", "non_rigid"}), num_geo_ops, geo_magnitude, rng);
    ops.insert(ops.end(), geo.begin(), geo.end());
    return ops;
  }

  Image apply(const Image& img, Rng& rng) const {
    Image out = img;
    for (const auto& spec : draw(rng)) out = apply_augmentation(spec, out, rng);
    return out;
  }

  friend bool operator==(const SmartAugmentPolicy&, const SmartAugmentPolicy&) = default;
};

// One kernel from the flat catalog per image at a magnitude drawn uniformly
// from [0, max_magnitude]. No hyperparameters to tune beyond the cap.
struct TrivialAugmentPolicy {
  int max_magnitude = kMaxMagnitude;

  void validate() const {
    if (max_magnitude < 0 || max_magnitude > kMaxMagnitude) {
      throw ValidationError("trivialaugment: max_magnitude must be in [0, 30]");
    }
  }

  std::vector<AugmentationSpec> draw(Rng& rng) const {
    validate();
    const auto& pool = catalog_names();
    const auto& name = pool[rng.below(pool.size())];
    const int level = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_magnitude) + 1));
    if (auto spec = magnitude_spec(name, level)) return {std::move(*spec)};
    return {};
  }

  Image apply(const Image& img, Rng& rng) const {
    Image out = img;
    for (const auto& spec : draw(rng)) out = apply_augmentation(spec, out, rng);
    return out;
  }

  friend bool operator==(const TrivialAugmentPolicy&, const TrivialAugmentPolicy&) = default;
};

using Policy = std::variant<GroupAugmentPolicy, SimSiamBaselinePolicy, RandAugmentPolicy, SmartAugmentPolicy,
                            TrivialAugmentPolicy>;

inline std::string policy_kind(const Policy& p) {
  static constexpr const char* kinds[] = {"group_augment", "simsiam_baseline", "randaugment", "smartaugment",
                                          "trivialaugment"};
  return kinds[p.index()];
}

inline Image apply(const Policy& policy, const Image& img, Rng& rng) {
  return std::visit(
      [&](const auto& p) -> Image {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, GroupAugmentPolicy>) {
          return apply_policy(p, img, rng);
        } else {
          return p.apply(img, rng);
        }
      },
      policy);
}

// Two views of one sample, each from an independent child stream.
inline std::pair<Image, Image> two_views(const Policy& policy, const Image& img, Rng& rng) {
  Rng a = rng.split();
  Rng b = rng.split();
  return {apply(policy, img, a), apply(policy, img, b)};
}

// ---- configuration -> policy -------------------------------------------------

inline GroupAugmentPolicy group_augment_from_configuration(const Configuration& cfg) {
  GroupAugmentPolicy p;
  for (const std::string& id : default_group_ids()) {
    p.probs.push_back(cfg.real("p_" + id + "_transformations"));
    p.counts.push_back(static_cast<int>(cfg.integer("num_" + id + "_transformations")));
  }
  p.total = static_cast<int>(cfg.integer("num_total_group_samples"));
  p.validate();
  return p;
}

inline Policy policy_from_configuration(const Configuration& cfg) {
  const std::string& space = cfg.space().name;
  if (space == "group_augment") return group_augment_from_configuration(cfg);
  if (space == "simsiam_aug") {
    SimSiamBaselinePolicy p{cfg.real("p_colorjitter"),       cfg.real("p_grayscale"),
                            cfg.real("p_horizontal_flip"),   cfg.real("p_solarize"),
                            cfg.real("brightness_strength"), cfg.real("contrast_strength"),
                            cfg.real("saturation_strength"), cfg.real("hue_strength"),
                            static_cast<int>(cfg.integer("solarize_threshold"))};
    p.validate();
    return p;
  }
  if (space == "randaugment") {
    RandAugmentPolicy p{static_cast<int>(cfg.integer("num_ops")), static_cast<int>(cfg.integer("magnitude"))};
    p.validate();
    return p;
  }
  if (space == "smartaugment") {
    SmartAugmentPolicy p{static_cast<int>(cfg.integer("num_col_ops")), static_cast<int>(cfg.integer("num_geo_ops")),
                         static_cast<int>(cfg.integer("col_magnitude")), static_cast<int>(cfg.integer("geo_magnitude")),
                         cfg.real("p_apply_ops")};
    p.validate();
    return p;
  }
  throw ValidationError("no augmentation policy for space " + space);
}

// Extra check for GroupAugment configurations: N_g must not exceed the size
// of group g in `groups`.
inline void validate_group_counts(const Configuration& cfg, const std::vector<AugmentationGroup>& groups) {
  for (const auto& g : groups) {
    const auto n = cfg.integer("num_" + g.id + "_transformations");
    if (n < 1 || static_cast<std::size_t>(n) > g.members.size()) {
      throw ValidationError("num_" + g.id + "_transformations exceeds group size");
    }
  }
}

// ---- JSON ------------------------------------------------------------------

inline nlohmann::json to_json(const Policy& policy) {
  nlohmann::json j{{"kind", policy_kind(policy)}};
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GroupAugmentPolicy>) {
          nlohmann::json groups = nlohmann::json::array();
          for (const auto& g : p.groups) {
            nlohmann::json members = nlohmann::json::array();
            for (const auto& m : g.members) members.push_back(m);
            groups.push_back({{"id", g.id}, {"members", members}});
          }
          j["groups"] = groups;
          j["probs"] = p.probs;
          j["counts"] = p.counts;
          j["total"] = p.total;
        } else if constexpr (std::is_same_v<T, SimSiamBaselinePolicy>) {
          j["p_colorjitter"] = p.p_colorjitter;
          j["p_grayscale"] = p.p_grayscale;
          j["p_horizontal_flip"] = p.p_horizontal_flip;
          j["p_solarize"] = p.p_solarize;
          j["brightness_strength"] = p.brightness_strength;
          j["contrast_strength"] = p.contrast_strength;
          j["saturation_strength"] = p.saturation_strength;
          j["hue_strength"] = p.hue_strength;
          j["solarize_threshold"] = p.solarize_threshold;
        } else if constexpr (std::is_same_v<T, RandAugmentPolicy>) {
          j["num_ops"] = p.num_ops;
          j["magnitude"] = p.magnitude;
        } else if constexpr (std::is_same_v<T, TrivialAugmentPolicy>) {
          j["max_magnitude"] = p.max_magnitude;
        } else {
          j["num_col_ops"] = p.num_col_ops;
          j["num_geo_ops"] = p.num_geo_ops;
          j["col_magnitude"] = p.col_magnitude;
          j["geo_magnitude"] = p.geo_magnitude;
          j["p_apply_ops"] = p.p_apply_ops;
        }
      },
      policy);
  return j;
}

namespace detail {

template <typename T>
T field_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j[key];
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number() || v.get<double>() != std::floor(v.get<double>())) {
      throw ValidationError(std::string("policy field ") + key + " must be an integer");
    }
    return static_cast<T>(v.get<double>());
  } else {
    if (!v.is_number()) throw ValidationError(std::string("policy field ") + key + " must be a number");
    return v.get<T>();
  }
}

}  // namespace detail

// Missing fields take the table defaults. A group_augment document without
// "groups" uses the default five-group catalog.
inline Policy policy_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ValidationError("policy document needs a string \"kind\"");
  }
  const auto kind = j["kind"].get<std::string>();
  using detail::field_or;
  try {
    if (kind == "group_augment") {
      GroupAugmentPolicy p;
      if (j.contains("groups")) {
        p.groups.clear();
        for (const auto& g : j.at("groups")) {
          AugmentationGroup group{g.at("id").get<std::string>(), {}};
          for (const auto& m : g.at("members")) group.members.push_back(m.get<AugmentationSpec>());
          p.groups.push_back(std::move(group));
        }
      }
      p.probs = j.at("probs").get<std::vector<double>>();
      p.counts = j.at("counts").get<std::vector<int>>();
      p.total = field_or(j, "total", 1);
      p.validate();
      return p;
    }
    if (kind == "simsiam_baseline") {
      SimSiamBaselinePolicy d;
      SimSiamBaselinePolicy p{field_or(j, "p_colorjitter", d.p_colorjitter),
                              field_or(j, "p_grayscale", d.p_grayscale),
                              field_or(j, "p_horizontal_flip", d.p_horizontal_flip),
                              field_or(j, "p_solarize", d.p_solarize),
                              field_or(j, "brightness_strength", d.brightness_strength),
                              field_or(j, "contrast_strength", d.contrast_strength),
                              field_or(j, "saturation_strength", d.saturation_strength),
                              field_or(j, "hue_strength", d.hue_strength),
                              field_or(j, "solarize_threshold", d.solarize_threshold)};
      p.validate();
      return p;
    }
    if (kind == "randaugment") {
      RandAugmentPolicy p{field_or(j, "num_ops", 3), field_or(j, "magnitude", 4)};
      p.validate();
      return p;
    }
    if (kind == "trivialaugment") {
      TrivialAugmentPolicy p{field_or(j, "max_magnitude", kMaxMagnitude)};
      p.validate();
      return p;
    }
    if (kind == "smartaugment") {
      SmartAugmentPolicy p{field_or(j, "num_col_ops", 2), field_or(j, "num_geo_ops", 1),
                           field_or(j, "col_magnitude", 4), field_or(j, "geo_magnitude", 4),
                           field_or(j, "p_apply_ops", 1.0)};
      p.validate();
      return p;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed policy: ") + e.what());
  }
  throw ValidationError("unknown policy kind: " + kind);
}

}  // namespace groupaug
