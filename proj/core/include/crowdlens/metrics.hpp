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

// Weighted dissimilarities between feature vectors: the overlap
// (mismatch-fraction) metric for categorical data and weighted Euclidean
// distance for numeric data.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace crowdlens {

using FeatureValue = std::variant<std::string, double>;

struct FeatureVector {
  std::string item_id;
  std::vector<FeatureValue> values;
};

/// Non-negative per-dimension weights, not all zero.
class WeightVector {
 public:
  /// Throws Error(kInvalidArgument) on negative, non-finite or all-zero
  /// weights.
  explicit WeightVector(std::vector<double> w);
  static WeightVector equal(std::size_t n) { return WeightVector(std::vector<double>(n, 1.0)); }

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  const std::vector<double>& values() const { return w_; }

 private:
  std::vector<double> w_;
};

/// (sum_i [a_i != b_i] * w_i) / N. Every component must be categorical;
/// throws Error(kSchemaMismatch) otherwise or on dimension mismatch.
double overlap_distance(const FeatureVector& a, const FeatureVector& b,
                        const WeightVector& w);

/// sqrt(sum_i (a_i - b_i)^2 * w_i) over numeric components.
double weighted_euclidean(const FeatureVector& a, const FeatureVector& b,
                          const WeightVector& w);

enum class Metric { kOverlap, kEuclidean };

/// Symmetric n x n matrix of pairwise distances.
Eigen::MatrixXd pairwise_distances(std::span<const FeatureVector> items, Metric metric,
                                   const WeightVector& w);

/// Rescales each numeric dimension to [0, 1] in place (constant
/// dimensions become 0).
void min_max_scale(std::vector<FeatureVector>& items);

struct WeightSelection {
  std::string name;
  std::optional<double> weight;  // nullopt: selected with weight 1
};

inline constexpr double kUnselectedWeight = 0.05;

/// Weights for `dimension_names`. An empty selection weights all
/// dimensions equally; otherwise selected dimensions take their given
/// weight (1 by default) and the rest take `unselected`. Throws
/// Error(kInvalidArgument) for names not in `dimension_names`.
WeightVector selection_weights(const std::vector<std::string>& dimension_names,
                               const std::vector<WeightSelection>& selection,
                               double unselected = kUnselectedWeight);

/// Parses `name[:weight],...`.
std::vector<WeightSelection> parse_weight_selection(std::string_view text);

}  // namespace crowdlens
