// Copyright 2026 The CrowdLens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "crowdlens/error.hpp"
#include "crowdlens/metrics.hpp"

namespace crowdlens {
namespace {

FeatureVector cat(std::vector<std::string> v) {
  FeatureVector f;
  for (auto& s : v) f.values.emplace_back(std::move(s));
  return f;
}

FeatureVector num(std::vector<double> v) {
  FeatureVector f;
  for (double x : v) f.values.emplace_back(x);
  return f;
}

TEST(Overlap, Examples) {
  const auto eq = WeightVector::equal(4);
  EXPECT_EQ(overlap_distance(cat({"a", "b", "c", "d"}), cat({"a", "b", "c", "d"}), eq), 0.0);
  EXPECT_EQ(overlap_distance(cat({"a", "b", "c", "d"}), cat({"w", "x", "y", "z"}), eq), 1.0);
  EXPECT_EQ(overlap_distance(cat({"a", "b", "c", "d"}), cat({"a", "x", "c", "z"}), eq), 0.5);
  EXPECT_EQ(overlap_distance(cat({"a", "b", "c", "d"}), cat({"a", "b", "c", "d"}),
                             WeightVector({3, 0.1, 0, 2})),
            0.0);
  // Weighted mismatches over N, not over the weight sum.
  EXPECT_DOUBLE_EQ(overlap_distance(cat({"a", "b"}), cat({"x", "b"}), WeightVector({0.5, 1})),
                   0.25);
}

TEST(Euclidean, Examples) {
  EXPECT_EQ(weighted_euclidean(num({1, 2}), num({1, 2}), WeightVector::equal(2)), 0.0);
  EXPECT_DOUBLE_EQ(weighted_euclidean(num({1, 2}), num({4, 6}), WeightVector::equal(2)), 5.0);
  EXPECT_NEAR(weighted_euclidean(num({1, 2}), num({4, 6}), WeightVector({1, 0.25})),
              std::sqrt(13.0), 1e-12);
  EXPECT_NEAR(std::sqrt(13.0), 3.6056, 1e-4);
}

TEST(Metrics, SchemaMismatch) {
  auto code_of = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIoError;
  };
  EXPECT_EQ(code_of([] { overlap_distance(cat({"a"}), num({1}), WeightVector::equal(1)); }),
            ErrorCode::kSchemaMismatch);
  EXPECT_EQ(code_of([] { overlap_distance(cat({"a"}), cat({"a", "b"}), WeightVector::equal(2)); }),
            ErrorCode::kSchemaMismatch);
  EXPECT_EQ(code_of([] { weighted_euclidean(num({1, 2}), num({1, 2}), WeightVector::equal(3)); }),
            ErrorCode::kSchemaMismatch);
  EXPECT_EQ(code_of([] { weighted_euclidean(cat({"a"}), cat({"a"}), WeightVector::equal(1)); }),
            ErrorCode::kSchemaMismatch);
}

TEST(Weights, Validation) {
  EXPECT_THROW(WeightVector({0, 0}), Error);
  EXPECT_THROW(WeightVector({1, -1}), Error);
  EXPECT_THROW(WeightVector({1, std::nan("")}), Error);
  EXPECT_NO_THROW(WeightVector({0, 1}));
}

TEST(Metrics, SymmetryNonNegativityAndZeroSet) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> pick(0, 2);
  std::uniform_real_distribution<double> u(-3, 3);
  std::uniform_real_distribution<double> wd(0, 2);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> w(5);
    for (auto& x : w) x = wd(rng);
    w[t % 5] = 0.0;
    w[(t + 1) % 5] += 0.5;
    const WeightVector wv(w);
    FeatureVector a, b, c, d;
    for (int i = 0; i < 5; ++i) {
      a.values.emplace_back(std::string(1, "xyz"[pick(rng)]));
      b.values.emplace_back(std::string(1, "xyz"[pick(rng)]));
      c.values.emplace_back(u(rng));
      d.values.emplace_back(u(rng));
    }
    const double ov = overlap_distance(a, b, wv);
    EXPECT_EQ(ov, overlap_distance(b, a, wv));
    EXPECT_GE(ov, 0.0);
    const double eu = weighted_euclidean(c, d, wv);
    EXPECT_EQ(eu, weighted_euclidean(d, c, wv));
    EXPECT_GE(eu, 0.0);
    bool agree = true;
    for (int i = 0; i < 5; ++i) agree &= w[i] == 0.0 || a.values[i] == b.values[i];
    EXPECT_EQ(ov == 0.0, agree);

    // Perturbing a zero-weight dimension changes nothing.
    auto a2 = a;
    auto c2 = c;
    a2.values[t % 5] = std::string("perturbed");
    c2.values[t % 5] = 1e6;
    EXPECT_EQ(overlap_distance(a2, b, wv), ov);
    EXPECT_EQ(weighted_euclidean(c2, d, wv), eu);
  }
}

TEST(PairwiseDistances, SymmetricWithZeroDiagonal) {
  std::vector<FeatureVector> items = {num({0, 0}), num({3, 4}), num({6, 8})};
  const auto d = pairwise_distances(items, Metric::kEuclidean, WeightVector::equal(2));
  EXPECT_EQ(d(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(d(0, 1), 5.0);
  EXPECT_DOUBLE_EQ(d(2, 0), 10.0);
  EXPECT_EQ(d(1, 2), d(2, 1));
}

TEST(MinMaxScale, PerDimension) {
  std::vector<FeatureVector> items = {num({0, 5, 10}), num({10, 5, 20}), num({5, 5, 15})};
  min_max_scale(items);
  EXPECT_EQ(std::get<double>(items[0].values[0]), 0.0);
  EXPECT_EQ(std::get<double>(items[1].values[0]), 1.0);
  EXPECT_EQ(std::get<double>(items[2].values[0]), 0.5);
  EXPECT_EQ(std::get<double>(items[2].values[1]), 0.0);
  EXPECT_EQ(std::get<double>(items[2].values[2]), 0.5);
}

TEST(WeightSelection, ParseAndExpand) {
  const auto sel = parse_weight_selection("age_bracket,location:0.5");
  ASSERT_EQ(sel.size(), 2u);
  EXPECT_EQ(sel[0].name, "age_bracket");
  EXPECT_FALSE(sel[0].weight);
  EXPECT_EQ(sel[1].weight, 0.5);
  const std::vector<std::string> names = {"age_bracket", "gender", "location"};
  EXPECT_EQ(selection_weights(names, sel).values(), (std::vector<double>{1.0, 0.05, 0.5}));
  EXPECT_EQ(selection_weights(names, {}).values(), (std::vector<double>{1.0, 1.0, 1.0}));
  EXPECT_THROW(selection_weights(names, parse_weight_selection("shoe_size")), Error);
  EXPECT_THROW(parse_weight_selection("age_bracket:heavy"), Error);
}

}  // namespace
}  // namespace crowdlens
