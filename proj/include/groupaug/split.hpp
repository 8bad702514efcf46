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

// Train/validation index partitions for external trainers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "groupaug/errors.hpp"
#include "groupaug/rng.hpp"

namespace groupaug {

struct SplitSpec {
  std::string dataset_name;
  double validation_fraction = 0.1;
  std::uint64_t split_seed = 0;
  bool use_provided_split = false;  // dataset ships its own split; nothing to draw
};

struct IndexPartition {
  bool provided = false;  // pass-through: train/validation left empty
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

inline IndexPartition make_split(const SplitSpec& spec, std::size_t n_train) {
  if (spec.use_provided_split) return IndexPartition{true, {}, {}};
  if (n_train < 10) throw ValidationError("make_split needs at least 10 training examples");
  if (!(spec.validation_fraction > 0.0 && spec.validation_fraction < 1.0)) {
    throw ValidationError("validation_fraction must lie in (0, 1)");
  }
  const auto n_val = static_cast<std::size_t>(std::llround(spec.validation_fraction * static_cast<double>(n_train)));
  if (n_val == 0 || n_val == n_train) throw ValidationError("validation_fraction leaves one side of the split empty");

  std::vector<std::size_t> idx(n_train);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(spec.split_seed);
  rng.shuffle(std::span<std::size_t>(idx));

  IndexPartition p;
  p.validation.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_val));
  p.train.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_val), idx.end());
  std::sort(p.validation.begin(), p.validation.end());
  std::sort(p.train.begin(), p.train.end());
  return p;
}

}  // namespace groupaug
