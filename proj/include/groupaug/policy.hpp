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

// GroupAugment: T augmentation sequences, each built by drawing a group from
// the (normalized) group probabilities and then N_g distinct members of that
// group uniformly without replacement. Sequences are applied in order.

#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "groupaug/augmentation.hpp"
#include "groupaug/errors.hpp"
#include "groupaug/image.hpp"
#include "groupaug/rng.hpp"

namespace groupaug {

struct AugmentationGroup {
  std::string id;
  std::vector<AugmentationSpec> members;

  friend bool operator==(const AugmentationGroup&, const AugmentationGroup&) = default;
};

inline const std::vector<std::string>& default_group_ids() {
  static const std::vector<std::string> ids = {"color", "geometric", "non_rigid", "quality", "exotic"};
  return ids;
}

// The five groups with every member at its catalog parameters.
inline std::vector<AugmentationGroup> default_groups() {
  std::vector<AugmentationGroup> groups;
  for (const std::string& id : default_group_ids()) groups.push_back({id, {}});
  for (const KernelInfo& k : kernel_registry()) {
    for (auto& g : groups) {
      if (g.id == k.group) g.members.push_back(make_spec(k.name));
    }
  }
  return groups;
}

// Weights -> probabilities summing to one, order preserved. Rejects negative
// or non-finite entries and all-zero vectors.
inline std::vector<double> normalize_probs(std::span<const double> raw) {
  double total = 0.0;
  for (double w : raw) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("group probabilities must be finite and >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw ValidationError("group probabilities are all zero");
  std::vector<double> p(raw.begin(), raw.end());
  for (double& x : p) x /= total;
  return p;
}

struct GroupAugmentPolicy {
  std::vector<AugmentationGroup> groups = default_groups();
  std::vector<double> probs;  // raw weights P_g; normalized before sampling
  std::vector<int> counts;    // N_g
  int total = 1;              // T

  void validate() const {
    if (groups.empty()) throw ValidationError("group_augment: no groups");
    if (probs.size() != groups.size() || counts.size() != groups.size()) {
      throw ValidationError("group_augment: groups, probs and counts must have equal length");
    }
    if (total < 1) throw ValidationError("group_augment: total sequences must be >= 1");
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto& members = groups[g].members;
      if (members.empty()) throw ValidationError("group_augment: group " + groups[g].id + " is empty");
      for (std::size_t i = 0; i < members.size(); ++i) {
        validate_spec(members[i]);
        for (std::size_t j = i + 1; j < members.size(); ++j) {
          if (members[i] == members[j]) throw ValidationError("group_augment: duplicate member in " + groups[g].id);
        }
      }
      if (counts[g] < 1 || static_cast<std::size_t>(counts[g]) > members.size()) {
        throw ValidationError("group_augment: count for group " + groups[g].id + " must be in [1, group size]");
      }
    }
    normalize_probs(probs);
  }

  friend bool operator==(const GroupAugmentPolicy&, const GroupAugmentPolicy&) = default;
};

struct AugmentationSequenceList {
  std::vector<std::size_t> group_index;  // group drawn for each sequence
  std::vector<std::vector<AugmentationSpec>> sequences;

  friend bool operator==(const AugmentationSequenceList&, const AugmentationSequenceList&) = default;
};

// Draws consumed per sequence: one uniform for the group, then one bounded
// integer per member drawn (partial Fisher-Yates).
inline AugmentationSequenceList sample_policy_draw(const GroupAugmentPolicy& policy, Rng& rng) {
  policy.validate();
  const auto probs = normalize_probs(policy.probs);
  AugmentationSequenceList out;
  for (int t = 0; t < policy.total; ++t) {
    const std::size_t g = rng.categorical(probs);
    const auto& members = policy.groups[g].members;
    std::vector<std::size_t> idx(members.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    const auto n = static_cast<std::size_t>(policy.counts[g]);
    std::vector<AugmentationSpec> seq;
    seq.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(idx.size() - i));
      std::swap(idx[i], idx[j]);
      seq.push_back(members[idx[i]]);
    }
    out.group_index.push_back(g);
    out.sequences.push_back(std::move(seq));
  }
  return out;
}

// Left fold of apply_augmentation over the flattened sequences.
inline Image apply_sequences(const AugmentationSequenceList& list, const Image& img, Rng& rng) {
  Image out = img;
  for (const auto& seq : list.sequences) {
    for (const auto& spec : seq) out = apply_augmentation(spec, out, rng);
  }
  return out;
}

// Fresh draw per call; kernels continue on the same stream after the draw.
inline Image apply_policy(const GroupAugmentPolicy& policy, const Image& img, Rng& rng) {
  const auto list = sample_policy_draw(policy, rng);
  return apply_sequences(list, img, rng);
}

inline nlohmann::json to_json(const AugmentationSequenceList& list, const GroupAugmentPolicy& policy) {
  nlohmann::json seqs = nlohmann::json::array();
  for (std::size_t t = 0; t < list.sequences.size(); ++t) {
    nlohmann::json names = nlohmann::json::array();
    for (const auto& s : list.sequences[t]) names.push_back(s.name);
    seqs.push_back({{"group", policy.groups[list.group_index[t]].id}, {"augmentations", names}});
  }
  return seqs;
}

}  // namespace groupaug
