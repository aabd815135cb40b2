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

#include "crowdlens/mds.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "crowdlens/error.hpp"

namespace crowdlens {

void check_distance_matrix(const Eigen::MatrixXd& d) {
  if (d.rows() != d.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "distance matrix must be square",
                {{"rows", d.rows()}, {"cols", d.cols()}});
  }
  if (d.rows() < 2) {
    throw Error(ErrorCode::kDegenerateInput, "need at least two items", {{"n", d.rows()}});
  }
  const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    if (d(i, i) != 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "distance matrix diagonal must be zero",
                  {{"index", i}});
    }
    for (Eigen::Index j = i + 1; j < d.cols(); ++j) {
      if (!std::isfinite(d(i, j)) || d(i, j) < 0.0) {
        throw Error(ErrorCode::kInvalidArgument, "distances must be finite and non-negative",
                    {{"i", i}, {"j", j}});
      }
      if (std::abs(d(i, j) - d(j, i)) > 1e-12 * scale) {
        throw Error(ErrorCode::kInvalidArgument, "distance matrix must be symmetric",
                    {{"i", i}, {"j", j}});
      }
    }
  }
}

double raw_stress(const Eigen::MatrixXd& d, const Eigen::MatrixXd& x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < d.rows(); ++j) {
      const double e = d(i, j) - (x.row(i) - x.row(j)).norm();
      s += e * e;
    }
  }
  return s;
}

Eigen::MatrixXd classical_scaling(const Eigen::MatrixXd& d) {
  const Eigen::Index n = d.rows();
  const Eigen::MatrixXd sq = d.array().square().matrix();
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  const Eigen::MatrixXd b = -0.5 * centering * sq * centering;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  // Eigenvalues come back ascending.
  Eigen::MatrixXd x(n, 2);
  for (int k = 0; k < 2; ++k) {
    const Eigen::Index col = n - 1 - k;
    const double lambda = col >= 0 ? std::max(0.0, eig.eigenvalues()(col)) : 0.0;
    if (col >= 0) {
      x.col(k) = eig.eigenvectors().col(col) * std::sqrt(lambda);
    } else {
      x.col(k).setZero();
    }
  }
  return x;
}

namespace {

// X' = B(X) X / n
Eigen::MatrixXd guttman_transform(const Eigen::MatrixXd& d, const Eigen::MatrixXd& x) {
  const Eigen::Index n = d.rows();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dist = (x.row(i) - x.row(j)).norm();
      const double v = dist > 0.0 ? -d(i, j) / dist : 0.0;
      b(i, j) = b(j, i) = v;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) b(i, i) = -b.row(i).sum();
  return b * x / static_cast<double>(n);
}

}  // namespace

MdsResult mds_embed(const Eigen::MatrixXd& distances, const MdsOptions& options) {
  check_distance_matrix(distances);
  MdsResult result;
  result.positions = classical_scaling(distances);
  double stress = raw_stress(distances, result.positions);
  result.stress_history.push_back(stress);

  while (result.iterations < options.max_iterations && stress > 0.0) {
    Eigen::MatrixXd next = guttman_transform(distances, result.positions);
    const double next_stress = raw_stress(distances, next);
    if (next_stress > stress) break;  // rounding noise at the optimum
    ++result.iterations;
    result.positions = std::move(next);
    result.stress_history.push_back(next_stress);
    const double improvement = (stress - next_stress) / stress;
    stress = next_stress;
    if (improvement < options.relative_tolerance) break;
  }
  return result;
}

}  // namespace crowdlens
