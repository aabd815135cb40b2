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

// Similarity-view layouts: feature extraction for workers (categorical
// profile) and segments (numeric vote/accuracy/timing), distance assembly,
// MDS or t-SNE, glyph encodings, and overlap removal.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crowdlens/consensus.hpp"
#include "crowdlens/layout.hpp"
#include "crowdlens/mds.hpp"
#include "crowdlens/metrics.hpp"
#include "crowdlens/model.hpp"
#include "crowdlens/tsne.hpp"

namespace crowdlens {

enum class EmbeddingMethod { kMds, kTsne };
enum class EmbeddingItems { kWorkers, kSegments };

std::string_view to_string(EmbeddingMethod m);  // mds, tsne
std::string_view to_string(EmbeddingItems i);   // workers, segments
std::optional<EmbeddingMethod> parse_embedding_method(std::string_view s);
std::optional<EmbeddingItems> parse_embedding_items(std::string_view s);

enum class GlyphMetric { kPolypCount, kAccuracy };

struct EmbeddingConfig {
  EmbeddingMethod method = EmbeddingMethod::kMds;
  EmbeddingItems items = EmbeddingItems::kWorkers;
  std::vector<WeightSelection> weights;  // empty: equal weights
  MdsOptions mds;
  TsneOptions tsne;
  // The perplexity is lowered to (n - 1) / 3 for small populations and
  // rows that cannot reach it keep their limiting bandwidth.
  bool clamp_perplexity = true;
  double radius = 0.015;  // circles live in the unit square
  int overlap_iterations = 500;
  // Default: accuracy when every segment has truth, polyp counts otherwise.
  std::optional<GlyphMetric> glyph;
};

/// Worker features: the categorical profile fields.
std::vector<FeatureVector> worker_features(const StudyDataset& dataset);
/// Segment features, min-max scaled: polyp_ratio, mean_time, and accuracy
/// when every segment's truth is known.
std::vector<FeatureVector> segment_features(const StudyDataset& dataset,
                                            std::vector<std::string>* names = nullptr);

struct GlyphEncodings {
  std::vector<double> lightness;     // value / max value
  std::vector<double> arc_fraction;  // normalized aggregated time
};

/// Glyphs for the listed items (ids of workers or segments present in the
/// aggregates). Accuracy glyphs fall back to 0 for items without truth.
GlyphEncodings glyph_encodings(const StudyDataset& dataset, EmbeddingItems items,
                               const std::vector<std::string>& ids, GlyphMetric metric);

struct EmbeddedItem {
  std::string id;
  Point2 position;
  double lightness = 0.0;
  double arc_fraction = 0.0;
};

struct EmbeddingLayout {
  EmbeddingMethod method = EmbeddingMethod::kMds;
  EmbeddingItems items_kind = EmbeddingItems::kWorkers;
  std::vector<std::string> feature_names;
  std::vector<double> weights;
  std::vector<EmbeddedItem> items;
  double radius = 0.0;
  std::size_t residual_overlaps = 0;
  bool overlap_converged = true;
  std::optional<double> perplexity;   // t-SNE only, after clamping
  std::size_t entropy_unreached = 0;  // t-SNE rows that kept the limiting bandwidth
};

/// Items are workers with at least one response, or viewed segments.
/// Throws Error(kDegenerateInput) for fewer than two items.
EmbeddingLayout embed(const StudyDataset& dataset, const EmbeddingConfig& config);

}  // namespace crowdlens
