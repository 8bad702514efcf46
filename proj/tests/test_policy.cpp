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

#include <map>
#include <set>

#include "criteria.hpp"
#include "groupaug/policies.hpp"
#include "groupaug/policy.hpp"

namespace {

using namespace groupaug;
namespace k = groupaug::kernels;

GroupAugmentPolicy policy_with(std::vector<double> probs, std::vector<int> counts, int total) {
  GroupAugmentPolicy p;
  p.probs = std::move(probs);
  p.counts = std::move(counts);
  p.total = total;
  return p;
}

GroupAugmentPolicy forced(std::vector<AugmentationSpec> seq) {
  GroupAugmentPolicy p;
  p.groups = {{"forced", seq}};
  p.probs = {1.0};
  p.counts = {static_cast<int>(seq.size())};
  p.total = 1;
  return p;
}

TEST(NormalizeProbs, Examples) {
  EXPECT_EQ(normalize_probs(std::vector<double>{0.5, 0.5, 0, 0, 0}), (std::vector<double>{0.5, 0.5, 0, 0, 0}));
  EXPECT_EQ(normalize_probs(std::vector<double>{2, 2, 0, 0, 0}), (std::vector<double>{0.5, 0.5, 0, 0, 0}));
  for (double p : normalize_probs(std::vector<double>{0.3, 0.3, 0.3, 0.3, 0.3})) EXPECT_DOUBLE_EQ(p, 0.2);
}

TEST(NormalizeProbs, Errors) {
  EXPECT_THROW(normalize_probs(std::vector<double>{0, 0, 0}), ValidationError);
  EXPECT_THROW(normalize_probs(std::vector<double>{1, -0.1}), ValidationError);
  EXPECT_THROW(normalize_probs(std::vector<double>{1, std::nan("")}), ValidationError);
}

TEST(DefaultGroups, MatchCatalogTable) {
  const auto groups = default_groups();
  std::map<std::string, std::vector<std::string>> want = {
      {"color", {"color_jitter", "to_gray", "solarize", "equalize", "channel_shuffle"}},
      {"geometric", {"shift_scale_rotate", "horizontal_flip"}},
      {"non_rigid", {"elastic_transform", "grid_distortion", "optical_distortion"}},
      {"quality", {"gaussian_blur", "gauss_noise"}},
      {"exotic", {"random_grid_shuffle", "cutout"}},
  };
  ASSERT_EQ(groups.size(), 5u);
  for (const auto& g : groups) {
    std::vector<std::string> names;
    for (const auto& m : g.members) names.push_back(m.name);
    EXPECT_EQ(names, want[g.id]) << g.id;
  }
}

TEST(SamplePolicyDraw, DegenerateCategorical) {
  const auto p = policy_with({1, 0, 0, 0, 0}, {1, 1, 1, 1, 1}, 1);
  const auto groups = default_groups();
  std::set<std::string> color;
  for (const auto& m : groups[0].members) color.insert(m.name);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto list = sample_policy_draw(p, rng);
    ASSERT_EQ(list.sequences.size(), 1u);
    ASSERT_EQ(list.sequences[0].size(), 1u);
    EXPECT_TRUE(color.contains(list.sequences[0][0].name));
    EXPECT_EQ(list.group_index[0], 0u);
  }
}

TEST(SamplePolicyDraw, ExhaustionGivesPermutation) {
  const auto p = policy_with({1, 0, 0, 0, 0}, {5, 1, 1, 1, 1}, 3);
  const auto members = default_groups()[0].members;
  std::set<AugmentationSpec> all(members.begin(), members.end());
  std::set<std::vector<AugmentationSpec>> orders;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    for (const auto& seq : sample_policy_draw(p, rng).sequences) {
      EXPECT_EQ(std::set<AugmentationSpec>(seq.begin(), seq.end()), all);
      orders.insert(seq);
    }
  }
  EXPECT_GT(orders.size(), 20u);  // orders vary
}

TEST(SamplePolicyDraw, ShapeInvariants) {
  Rng meta(3);
  for (int rep = 0; rep < 200; ++rep) {
    auto p = policy_with({meta.uniform(), meta.uniform(), meta.uniform(), meta.uniform(), meta.uniform() + 0.01},
                         {static_cast<int>(meta.uniform_int(1, 5)), static_cast<int>(meta.uniform_int(1, 2)),
                          static_cast<int>(meta.uniform_int(1, 3)), static_cast<int>(meta.uniform_int(1, 2)),
                          static_cast<int>(meta.uniform_int(1, 2))},
                         static_cast<int>(meta.uniform_int(1, 5)));
    Rng rng(rep);
    const auto list = sample_policy_draw(p, rng);
    ASSERT_EQ(list.sequences.size(), static_cast<std::size_t>(p.total));
    for (std::size_t t = 0; t < list.sequences.size(); ++t) {
      const auto& seq = list.sequences[t];
      EXPECT_EQ(seq.size(), static_cast<std::size_t>(p.counts[list.group_index[t]]));
      EXPECT_EQ(std::set<AugmentationSpec>(seq.begin(), seq.end()).size(), seq.size());
      for (const auto& s : seq) {
        const auto& members = p.groups[list.group_index[t]].members;
        EXPECT_NE(std::find(members.begin(), members.end(), s), members.end());
      }
    }
  }
}

TEST(SamplePolicyDraw, Statistics) {
  const auto o = criteria::group_sampling_statistics();
  EXPECT_TRUE(o.pass) << o.detail;
}

TEST(SamplePolicyDraw, NormalizationInvariance) {
  const auto o = criteria::normalization_invariance();
  EXPECT_TRUE(o.pass) << o.detail;
}

TEST(SamplePolicyDraw, PreconditionErrors) {
  Rng rng(0);
  EXPECT_THROW(sample_policy_draw(policy_with({1, 0, 0, 0, 0}, {6, 1, 1, 1, 1}, 1), rng), ValidationError);
  EXPECT_THROW(sample_policy_draw(policy_with({1, 0, 0, 0, 0}, {0, 1, 1, 1, 1}, 1), rng), ValidationError);
  EXPECT_THROW(sample_policy_draw(policy_with({0, 0, 0, 0, 0}, {1, 1, 1, 1, 1}, 1), rng), ValidationError);
  EXPECT_THROW(sample_policy_draw(policy_with({1, 0, 0, 0}, {1, 1, 1, 1}, 1), rng), ValidationError);
  EXPECT_THROW(sample_policy_draw(policy_with({1, 0, 0, 0, 0}, {1, 1, 1, 1, 1}, 0), rng), ValidationError);
  auto dup = forced({make_spec("to_gray"), make_spec("to_gray")});
  EXPECT_THROW(sample_policy_draw(dup, rng), ValidationError);
}

TEST(ApplyPolicy, ForcedSequences) {
  const auto img = oracle::random_image(9, 11, 4);
  Rng rng(1);
  EXPECT_EQ(apply_policy(forced({make_spec("horizontal_flip")}), img, rng), k::horizontal_flip(img));
  // Two identical specs are not a valid group, so chain two one-member sequences.
  GroupAugmentPolicy twice = forced({make_spec("horizontal_flip")});
  twice.total = 2;
  EXPECT_EQ(apply_policy(twice, img, rng), img);
}

TEST(ApplyPolicy, SolarizeThenGrayByHand) {
  // solarize(0) maps (10, 20, 30) to (245, 235, 225); luma 73.255 + 137.945 + 25.65 = 236.85 -> 237.
  GroupAugmentPolicy p;
  p.groups = {{"a", {make_spec("solarize", {{"threshold", 0}})}}, {"b", {make_spec("to_gray")}}};
  p.probs = {1, 0};
  p.counts = {1, 1};
  p.total = 1;
  const Image px(1, 1, std::vector<std::uint8_t>{10, 20, 30});
  Rng rng(0);
  const auto list = sample_policy_draw(p, rng);
  AugmentationSequenceList both{{0, 1}, {list.sequences[0], {make_spec("to_gray")}}};
  const auto out = apply_sequences(both, px, rng);
  EXPECT_EQ(int(out.at(0, 0, 0)), 237);
  EXPECT_EQ(int(out.at(0, 0, 1)), 237);
  EXPECT_EQ(int(out.at(0, 0, 2)), 237);
}

TEST(ApplyPolicy, EqualsFoldOfDraw) {
  const auto img = oracle::random_image(16, 16, 5);
  const auto p = policy_with({0.2, 0.2, 0.2, 0.2, 0.2}, {2, 2, 2, 2, 2}, 4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng a(seed), b(seed);
    const auto list = sample_policy_draw(p, b);
    Image want = img;
    for (const auto& seq : list.sequences) {
      for (const auto& s : seq) want = apply_augmentation(s, want, b);
    }
    EXPECT_EQ(apply_policy(p, img, a), want);
  }
}

TEST(ApplyPolicy, IdentityCatalogReturnsInput) {
  GroupAugmentPolicy p;
  p.groups = {{"id", {make_spec("solarize", {{"threshold", 255}}), make_spec("cutout", {{"num_holes", 0}}),
                      make_spec("gaussian_blur", {{"sigma_min", 0}, {"sigma_max", 0}})}}};
  p.probs = {1};
  p.counts = {3};
  p.total = 3;
  Image img = oracle::random_image(12, 12, 6);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(v % 255);  // keep below the solarize threshold
  Rng rng(2);
  EXPECT_EQ(apply_policy(p, img, rng), img);
}

TEST(Baseline, AllZeroIsCropOnly) {
  SimSiamBaselinePolicy p{0, 0, 0, 0, 0.4, 0.4, 0.4, 0.1, 127};
  const auto img = oracle::random_image(20, 20, 7);
  Rng a(3), b(3);
  EXPECT_EQ(p.apply(img, a), k::random_resized_crop(img, b));
}

TEST(Baseline, SymmetricFlipIsInvisible) {
  Image img(10, 10);
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 5; ++x) {
      for (int c = 0; c < 3; ++c) {
        const auto v = static_cast<std::uint8_t>(y * 20 + x * 7 + c);
        img.at(y, x, c) = v;
        img.at(y, 9 - x, c) = v;
      }
    }
  }
  SimSiamBaselinePolicy flip{0, 0, 1, 0, 0.4, 0.4, 0.4, 0.1, 127};
  SimSiamBaselinePolicy none{0, 0, 0, 0, 0.4, 0.4, 0.4, 0.1, 127};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng a(seed), b(seed);
    EXPECT_EQ(flip.apply(img, a), none.apply(img, b));
  }
}

TEST(Baseline, DefaultsRoundTrip) {
  const Policy p = SimSiamBaselinePolicy{};
  const auto j = to_json(p);
  EXPECT_EQ(j["p_colorjitter"], 0.8);
  EXPECT_EQ(j["solarize_threshold"], 127);
  EXPECT_EQ(policy_from_json(j), p);
  EXPECT_THROW(policy_from_json({{"kind", "simsiam_baseline"}, {"p_grayscale", 1.5}}), ValidationError);
  EXPECT_THROW(policy_from_json({{"kind", "simsiam_baseline"}, {"hue_strength", 0.6}}), ValidationError);
}

TEST(RandAugment, Ranges) {
  EXPECT_NO_THROW((RandAugmentPolicy{3, 4}.validate()));
  EXPECT_NO_THROW((RandAugmentPolicy{15, 30}.validate()));
  EXPECT_THROW((RandAugmentPolicy{16, 4}.validate()), ValidationError);
  EXPECT_THROW((RandAugmentPolicy{0, 4}.validate()), ValidationError);
  EXPECT_THROW((RandAugmentPolicy{3, 31}.validate()), ValidationError);
}

TEST(RandAugment, DrawsWithReplacementFromCatalog) {
  RandAugmentPolicy p{15, 10};
  Rng rng(4);
  bool repeated = false;
  for (int i = 0; i < 50; ++i) {
    const auto ops = p.draw(rng);
    EXPECT_EQ(ops.size(), 15u);
    std::set<std::string> names;
    for (const auto& s : ops) names.insert(s.name);
    repeated = repeated || names.size() < ops.size();
  }
  EXPECT_TRUE(repeated);
}

TEST(RandAugment, MagnitudeZeroIdentityStrength) {
  RandAugmentPolicy p{15, 0};
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    for (const auto& s : p.draw(rng)) {
      EXPECT_NE(s.name, "solarize");  // skipped at level 0
      if (s.name == "color_jitter") {
        EXPECT_EQ(s.param("brightness"), 0.0);
      }
      if (s.name == "cutout") {
        EXPECT_EQ(s.param("num_holes"), 0.0);
      }
    }
  }
}

TEST(SmartAugment, Behaviour) {
  EXPECT_NO_THROW((SmartAugmentPolicy{2, 1, 4, 4, 1.0}.validate()));
  EXPECT_THROW((SmartAugmentPolicy{10, 1, 4, 4, 1.0}.validate()), ValidationError);
  EXPECT_THROW((SmartAugmentPolicy{2, 6, 4, 4, 1.0}.validate()), ValidationError);
  EXPECT_THROW((SmartAugmentPolicy{2, 1, 4, 4, 1.5}.validate()), ValidationError);
  const auto img = oracle::random_image(16, 16, 8);
  Rng rng(6);
  EXPECT_EQ((SmartAugmentPolicy{2, 1, 30, 30, 0.0}.apply(img, rng)), img);
  const std::set<std::string> color = {"color_jitter", "to_gray", "solarize", "equalize", "channel_shuffle"};
  for (int i = 0; i < 30; ++i) {
    const auto ops = SmartAugmentPolicy{3, 2, 10, 10, 1.0}.draw(rng);
    ASSERT_EQ(ops.size(), 5u);
    for (int j = 0; j < 3; ++j) EXPECT_TRUE(color.contains(ops[j].name));
    for (int j = 3; j < 5; ++j) EXPECT_FALSE(color.contains(ops[j].name));
  }
}

TEST(TrivialAugment, OneUniformOpAtUniformLevel) {
  EXPECT_THROW(TrivialAugmentPolicy{31}.validate(), ValidationError);
  EXPECT_THROW(TrivialAugmentPolicy{-1}.validate(), ValidationError);
  const TrivialAugmentPolicy p{10};
  Rng rng(31);
  std::map<std::string, int> names;
  int skipped = 0;
  const int n = 14000;
  for (int i = 0; i < n; ++i) {
    const auto ops = p.draw(rng);
    ASSERT_LE(ops.size(), 1u);
    if (ops.empty()) {
      ++skipped;  // solarize at level 0
      continue;
    }
    ++names[ops[0].name];
    bool matched = false;
    for (int level = 0; level <= 10 && !matched; ++level) {
      const auto want = magnitude_spec(ops[0].name, level);
      matched = want && *want == ops[0];
    }
    EXPECT_TRUE(matched) << ops[0].name;
  }
  EXPECT_EQ(names.size(), 14u);
  // expected skips: 1/14 kernels x 1/11 levels
  EXPECT_NEAR(skipped, n / 154.0, 4.0 * std::sqrt(n / 154.0));
  for (const auto& [name, count] : names) EXPECT_NEAR(count, n / 14.0, 5.0 * std::sqrt(n / 14.0)) << name;

  const auto img = oracle::random_image(12, 12, 3);
  Rng a(4), b(4);
  EXPECT_TRUE(apply(Policy{p}, img, a) == apply(Policy{p}, img, b));
}

TEST(PolicyJson, RoundTripEveryKind) {
  const std::vector<Policy> policies = {policy_with({0.5, 0.5, 0, 0, 0}, {1, 1, 1, 1, 1}, 2), SimSiamBaselinePolicy{},
                                        RandAugmentPolicy{5, 9}, SmartAugmentPolicy{3, 2, 5, 6, 0.5},
                                        TrivialAugmentPolicy{12}};
  for (const auto& p : policies) {
    EXPECT_EQ(policy_from_json(to_json(p)), p) << policy_kind(p);
  }
  EXPECT_THROW(policy_from_json({{"kind", "autoaugment"}}), ValidationError);
  EXPECT_THROW(policy_from_json(nlohmann::json::array()), ValidationError);
}

TEST(PolicyFromConfiguration, EverySpaceWithPolicy) {
  for (const char* name : {"group_augment", "simsiam_aug", "randaugment", "smartaugment"}) {
    const auto cfg = default_configuration(builtin_space(name));
    EXPECT_NO_THROW(policy_from_configuration(cfg)) << name;
  }
  EXPECT_THROW(policy_from_configuration(default_configuration(builtin_space("simsiam_training"))), ValidationError);
  const auto ga = std::get<GroupAugmentPolicy>(policy_from_configuration(default_configuration(builtin_space("group_augment"))));
  EXPECT_EQ(ga.probs, (std::vector<double>{0.5, 0.5, 0, 0, 0}));
  EXPECT_EQ(ga.counts, (std::vector<int>{1, 1, 1, 1, 1}));
  EXPECT_EQ(ga.total, 1);
}

TEST(TwoViews, IndependentStreams) {
  const Policy p = RandAugmentPolicy{3, 20};
  const auto img = oracle::random_image(24, 24, 9);
  Rng a(10), b(10);
  const auto [v1, v2] = two_views(p, img, a);
  const auto [w1, w2] = two_views(p, img, b);
  EXPECT_EQ(v1, w1);
  EXPECT_EQ(v2, w2);
  EXPECT_NE(v1, v2);
}

}  // namespace
