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

// Exact (O(n^2)) t-SNE for a few hundred items.

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace crowdlens {

struct TsneOptions {
  double perplexity = 15.0;
  int iterations = 1000;
  double learning_rate = 100.0;
  std::uint64_t seed = 0;
  double early_exaggeration = 4.0;
  int exaggeration_iterations = 100;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  int momentum_switch_iteration = 250;
  double entropy_tolerance_bits = 1e-4;
  // When false, a row whose target entropy is out of reach (tied nearest
  // neighbours bound it from below) keeps the limiting bandwidth instead
  // of raising BadPerplexity.
  bool require_entropy_target = true;
};

struct ConditionalAffinities {
  Eigen::MatrixXd p;                  // row i holds p_{j|i}; zero diagonal
  std::vector<double> beta;           // precision 1 / (2 sigma_i^2)
  std::vector<double> entropy_bits;   // achieved Shannon entropy per row
  std::size_t n_unreached = 0;        // rows outside tolerance (lenient mode)
};

/// Per-point Gaussian bandwidths found by bisection so that each row's
/// entropy equals log2(perplexity) within `tolerance_bits`.
/// Throws Error(kBadPerplexity) when perplexity lies outside [1, n - 1) or
/// a row cannot reach the target and `require_target` holds.
ConditionalAffinities conditional_affinities(const Eigen::MatrixXd& squared_distances,
                                             double perplexity,
                                             double tolerance_bits = 1e-4,
                                             bool require_target = true);

/// (P + P^T) / (2n), summing to one.
Eigen::MatrixXd joint_affinities(const ConditionalAffinities& c);

/// KL(P || Q) with Student-t (one degree of freedom) affinities Q over the
/// embedding `y` (n x 2).
double kl_divergence(const Eigen::MatrixXd& p, const Eigen::MatrixXd& y);

/// 4 sum_j (p_ij - q_ij) (y_i - y_j) / (1 + |y_i - y_j|^2)
Eigen::MatrixXd kl_gradient(const Eigen::MatrixXd& p, const Eigen::MatrixXd& y);

struct TsneResult {
  Eigen::MatrixXd positions;        // n x 2
  std::vector<double> kl_history;   // KL against the unexaggerated P, per step
  std::vector<double> entropy_bits;
  std::size_t n_unreached = 0;
};

/// Embeds from a pairwise distance matrix; squared distances enter the
/// Gaussian kernel. Deterministic for a fixed seed.
TsneResult tsne_embed(const Eigen::MatrixXd& distances, const TsneOptions& options);

/// Embeds rows of `points` using their Euclidean distances.
TsneResult tsne_embed_points(const Eigen::MatrixXd& points, const TsneOptions& options);

}  // namespace crowdlens
