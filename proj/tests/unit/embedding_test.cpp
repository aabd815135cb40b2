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

#include "crowdlens/embedding.hpp"
#include "crowdlens/error.hpp"
#include "crowdlens/simulator.hpp"
#include "fixtures.hpp"

namespace crowdlens {
namespace {

using testing::make_dataset;

StudyDataset glyph_fixture() {
  return make_dataset({"PPNNNNNN", "PPPPNNNN", "PPPPPPPP"}, "????????");
}

TEST(Glyphs, LightnessDividesByMax) {
  const auto ds = glyph_fixture();
  const auto g = glyph_encodings(ds, EmbeddingItems::kWorkers, {"W1", "W2", "W3"},
                                 GlyphMetric::kPolypCount);
  EXPECT_EQ(g.lightness, (std::vector<double>{0.25, 0.5, 1.0}));
  for (double a : g.arc_fraction) {
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, 1.0);
  }
  EXPECT_DOUBLE_EQ(*std::max_element(g.arc_fraction.begin(), g.arc_fraction.end()), 1.0);
}

TEST(Glyphs, EqualValuesAllOne) {
  const auto ds = make_dataset({"PPNN", "NPPN", "NNPP"}, "????");
  const auto g = glyph_encodings(ds, EmbeddingItems::kWorkers, {"W1", "W2", "W3"},
                                 GlyphMetric::kPolypCount);
  EXPECT_EQ(g.lightness, (std::vector<double>{1, 1, 1}));
}

TEST(Glyphs, AccuracyMetricForSegments) {
  // S1: 2/2 correct, S2: 1/2 correct.
  const auto ds = make_dataset({"PP", "PN"}, "PP");
  const auto g = glyph_encodings(ds, EmbeddingItems::kSegments, {"S1", "S2"},
                                 GlyphMetric::kAccuracy);
  EXPECT_EQ(g.lightness, (std::vector<double>{1.0, 0.5}));
}

TEST(Features, WorkersAreCategoricalProfiles) {
  auto ds = glyph_fixture();
  ds.workers[1].gender = "F";
  const auto f = worker_features(ds);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[1].item_id, "W2");
  ASSERT_EQ(f[1].values.size(), profile_field_names().size());
  EXPECT_EQ(std::get<std::string>(f[1].values[1]), "F");
}

TEST(Features, WorkersWithoutResponsesAreSkipped) {
  auto ds = glyph_fixture();
  ds.workers.push_back(ds.workers[0]);
  ds.workers.back().id = "W9";
  EXPECT_EQ(worker_features(ds).size(), 3u);
}

TEST(Features, SegmentsAreScaledNumbers) {
  const auto ds = make_dataset({"PPN", "PNN"}, "PNN");
  std::vector<std::string> names;
  const auto f = segment_features(ds, &names);
  EXPECT_EQ(names, (std::vector<std::string>{"polyp_ratio", "mean_time", "accuracy"}));
  ASSERT_EQ(f.size(), 3u);
  for (const auto& item : f) {
    for (const auto& v : item.values) {
      EXPECT_GE(std::get<double>(v), 0.0);
      EXPECT_LE(std::get<double>(v), 1.0);
    }
  }
  EXPECT_EQ(std::get<double>(f[0].values[0]), 1.0);  // polyp ratio 1 is the max
  EXPECT_EQ(std::get<double>(f[2].values[0]), 0.0);
}

StudyDataset simulated(std::size_t workers, std::size_t segments) {
  SimulationSpec spec;
  spec.n_segments = segments;
  spec.views_per_segment = 3;
  spec.seed = 5;
  spec.workers = {{WorkerModel{ReliableWorker{0.8}}, workers}};
  return simulate(spec);
}

TEST(Embed, MdsAndTsneProduceNonOverlappingLayouts) {
  const auto ds = simulated(12, 40);
  for (auto method : {EmbeddingMethod::kMds, EmbeddingMethod::kTsne}) {
    for (auto items : {EmbeddingItems::kWorkers, EmbeddingItems::kSegments}) {
      EmbeddingConfig cfg;
      cfg.method = method;
      cfg.items = items;
      cfg.tsne.iterations = 300;
      const auto layout = embed(ds, cfg);
      EXPECT_EQ(layout.items.size(), items == EmbeddingItems::kWorkers ? 12u : 40u);
      EXPECT_EQ(layout.residual_overlaps, 0u);
      EXPECT_TRUE(layout.overlap_converged);
      std::vector<Point2> pts;
      for (const auto& it : layout.items) {
        pts.push_back(it.position);
        EXPECT_GE(it.lightness, 0.0);
        EXPECT_LE(it.lightness, 1.0);
      }
      EXPECT_EQ(count_overlaps(pts, layout.radius), 0u);
      EXPECT_EQ(layout.perplexity.has_value(), method == EmbeddingMethod::kTsne);
      EXPECT_EQ(embed(ds, cfg).items.front().position, layout.items.front().position);
    }
  }
}

TEST(Embed, WeightSelectionIsRecorded) {
  const auto ds = simulated(6, 12);
  EmbeddingConfig cfg;
  cfg.weights = {{"gender", std::nullopt}, {"location", 0.5}};
  const auto layout = embed(ds, cfg);
  const auto& names = layout.feature_names;
  ASSERT_EQ(layout.weights.size(), names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double expected = names[i] == "gender" ? 1.0 : names[i] == "location" ? 0.5 : kUnselectedWeight;
    EXPECT_EQ(layout.weights[i], expected) << names[i];
  }
}

TEST(Embed, DegenerateInput) {
  const auto ds = make_dataset({"PN"}, "PN");
  EmbeddingConfig cfg;
  try {
    embed(ds, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateInput);
  }
  cfg.items = EmbeddingItems::kSegments;
  cfg.weights = {{"nonsense", std::nullopt}};
  EXPECT_THROW(embed(ds, cfg), Error);
}

TEST(Embed, ParsesNames) {
  EXPECT_EQ(parse_embedding_method("tsne"), EmbeddingMethod::kTsne);
  EXPECT_EQ(parse_embedding_items("segments"), EmbeddingItems::kSegments);
  EXPECT_FALSE(parse_embedding_method("pca"));
  EXPECT_EQ(to_string(EmbeddingMethod::kMds), "mds");
}

}  // namespace
}  // namespace crowdlens
