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

// Metric MDS: classical (Torgerson) scaling as the starting configuration,
// refined by SMACOF stress majorization with unit weights.

#pragma once

#include <vector>

#include <Eigen/Dense>

namespace crowdlens {

struct MdsOptions {
  int max_iterations = 300;
  double relative_tolerance = 1e-9;
};

struct MdsResult {
  Eigen::MatrixXd positions;          // n x 2
  std::vector<double> stress_history;  // [0] is the classical-scaling stress
  int iterations = 0;
};

/// sum_{i<j} (d_ij - |x_i - x_j|)^2
double raw_stress(const Eigen::MatrixXd& distances, const Eigen::MatrixXd& positions);

/// Top two principal coordinates of the double-centred squared distances.
Eigen::MatrixXd classical_scaling(const Eigen::MatrixXd& distances);

/// Throws Error(kDegenerateInput) for n < 2, and Error(kInvalidArgument)
/// when `distances` is not square, symmetric, non-negative with a zero
/// diagonal. Iteration stops once the relative stress improvement drops
/// below the tolerance; an iterate that would raise the stress is
/// discarded, so the history is non-increasing.
MdsResult mds_embed(const Eigen::MatrixXd& distances, const MdsOptions& options = {});

/// Validation shared with t-SNE.
void check_distance_matrix(const Eigen::MatrixXd& distances);

}  // namespace crowdlens
