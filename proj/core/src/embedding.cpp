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

#include "crowdlens/embedding.hpp"

#include <algorithm>
#include <limits>

#include "crowdlens/error.hpp"

namespace crowdlens {

std::string_view to_string(EmbeddingMethod m) {
  return m == EmbeddingMethod::kMds ? "mds" : "tsne";
}
std::string_view to_string(EmbeddingItems i) {
  return i == EmbeddingItems::kWorkers ? "workers" : "segments";
}
std::optional<EmbeddingMethod> parse_embedding_method(std::string_view s) {
  if (s == "mds") return EmbeddingMethod::kMds;
  if (s == "tsne") return EmbeddingMethod::kTsne;
  return std::nullopt;
}
std::optional<EmbeddingItems> parse_embedding_items(std::string_view s) {
  if (s == "workers") return EmbeddingItems::kWorkers;
  if (s == "segments") return EmbeddingItems::kSegments;
  return std::nullopt;
}

std::vector<FeatureVector> worker_features(const StudyDataset& dataset) {
  std::vector<std::string> active;
  for (const auto& a : user_aggregates(dataset)) active.push_back(a.worker_id);
  std::sort(active.begin(), active.end());
  std::vector<FeatureVector> out;
  for (const auto& w : dataset.workers) {
    if (!std::binary_search(active.begin(), active.end(), w.id)) continue;
    FeatureVector fv{w.id, {}};
    for (const auto& field : profile_field_names()) {
      fv.values.emplace_back(std::string(*profile_field(w, field)));
    }
    out.push_back(std::move(fv));
  }
  return out;
}

std::vector<FeatureVector> segment_features(const StudyDataset& dataset,
                                            std::vector<std::string>* names) {
  const bool with_accuracy = dataset.has_ground_truth();
  if (names) {
    *names = {"polyp_ratio", "mean_time"};
    if (with_accuracy) names->push_back("accuracy");
  }
  std::vector<FeatureVector> out;
  for (const auto& agg : segment_aggregates(dataset)) {
    const double viewers = static_cast<double>(agg.n_polyp_votes + agg.n_polyp_free_votes);
    FeatureVector fv{agg.segment_id, {}};
    fv.values.emplace_back(static_cast<double>(agg.n_polyp_votes) / viewers);
    fv.values.emplace_back(agg.mean_response_time_ms);
    if (with_accuracy) fv.values.emplace_back(static_cast<double>(*agg.n_correct) / viewers);
    out.push_back(std::move(fv));
  }
  min_max_scale(out);
  return out;
}

GlyphEncodings glyph_encodings(const StudyDataset& dataset, EmbeddingItems items,
                               const std::vector<std::string>& ids, GlyphMetric metric) {
  std::vector<double> value(ids.size(), 0.0), arc(ids.size(), 0.0);
  auto slot = [&](const std::string& id) -> std::optional<std::size_t> {
    auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) return std::nullopt;
    return static_cast<std::size_t>(it - ids.begin());
  };
  if (items == EmbeddingItems::kWorkers) {
    for (const auto& a : user_aggregates(dataset)) {
      auto k = slot(a.worker_id);
      if (!k) continue;
      value[*k] = metric == GlyphMetric::kPolypCount ? static_cast<double>(a.n_polyp_answers)
                                                     : a.accuracy.value_or(0.0);
      arc[*k] = a.normalized_task_time;
    }
  } else {
    for (const auto& a : segment_aggregates(dataset)) {
      auto k = slot(a.segment_id);
      if (!k) continue;
      const double viewers = static_cast<double>(a.n_polyp_votes + a.n_polyp_free_votes);
      value[*k] = metric == GlyphMetric::kPolypCount
                      ? static_cast<double>(a.n_polyp_votes)
                      : (a.n_correct ? static_cast<double>(*a.n_correct) / viewers : 0.0);
      arc[*k] = a.normalized_time;
    }
  }
  return GlyphEncodings{normalize_by_max(value), std::move(arc)};
}

namespace {

// Fits the embedding into the unit square, preserving aspect ratio.
std::vector<Point2> to_unit_square(const Eigen::MatrixXd& y) {
  const Eigen::Index n = y.rows();
  const double min_x = y.col(0).minCoeff(), min_y = y.col(1).minCoeff();
  const double span = std::max(y.col(0).maxCoeff() - min_x, y.col(1).maxCoeff() - min_y);
  std::vector<Point2> out(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    auto& p = out[static_cast<std::size_t>(i)];
    p.x = span > 0.0 ? (y(i, 0) - min_x) / span : 0.5;
    p.y = span > 0.0 ? (y(i, 1) - min_y) / span : 0.5;
  }
  return out;
}

}  // namespace

EmbeddingLayout embed(const StudyDataset& dataset, const EmbeddingConfig& config) {
  EmbeddingLayout layout;
  layout.method = config.method;
  layout.items_kind = config.items;

  std::vector<FeatureVector> features;
  Metric metric;
  if (config.items == EmbeddingItems::kWorkers) {
    features = worker_features(dataset);
    layout.feature_names = profile_field_names();
    metric = Metric::kOverlap;
  } else {
    features = segment_features(dataset, &layout.feature_names);
    metric = Metric::kEuclidean;
  }
  if (features.size() < 2) {
    throw Error(ErrorCode::kDegenerateInput, "need at least two items to embed",
                {{"items", std::string(to_string(config.items))}, {"n", features.size()}});
  }
  const WeightVector weights = selection_weights(layout.feature_names, config.weights);
  layout.weights = weights.values();
  const Eigen::MatrixXd distances = pairwise_distances(features, metric, weights);

  Eigen::MatrixXd y;
  if (config.method == EmbeddingMethod::kMds) {
    y = mds_embed(distances, config.mds).positions;
  } else {
    TsneOptions opts = config.tsne;
    if (config.clamp_perplexity) {
      const double cap = static_cast<double>(features.size() - 1) / 3.0;
      opts.perplexity = std::max(1.0, std::min(opts.perplexity, cap));
      // Categorical profiles tie often; an unreachable row is not an error here.
      opts.require_entropy_target = false;
    }
    auto result = tsne_embed(distances, opts);
    y = std::move(result.positions);
    layout.perplexity = opts.perplexity;
    layout.entropy_unreached = result.n_unreached;
  }

  std::vector<std::string> ids;
  for (const auto& f : features) ids.push_back(f.item_id);
  const GlyphMetric glyph = config.glyph.value_or(
      dataset.has_ground_truth() ? GlyphMetric::kAccuracy : GlyphMetric::kPolypCount);
  const auto glyphs = glyph_encodings(dataset, config.items, ids, glyph);

  auto resolved = resolve_overlaps(to_unit_square(y), config.radius,
                                   config.overlap_iterations);
  layout.radius = config.radius;
  layout.residual_overlaps = resolved.residual_overlaps;
  layout.overlap_converged = resolved.converged;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    layout.items.push_back(
        {ids[i], resolved.positions[i], glyphs.lightness[i], glyphs.arc_fraction[i]});
  }
  return layout;
}

}  // namespace crowdlens
