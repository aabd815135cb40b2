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

// Independent numerical oracles shared by unit and acceptance tests.

#pragma once

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace crowdlens::testing {

inline Eigen::MatrixXd distance_matrix(const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) d(i, j) = (points.row(i) - points.row(j)).norm();
  }
  return d;
}

inline Eigen::MatrixXd random_points(std::mt19937_64& rng, Eigen::Index n, Eigen::Index dim = 2) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd p(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < dim; ++k) p(i, k) = u(rng);
  }
  return p;
}

// Relative RMS residual of `y` against `x` after the best rotation,
// reflection and translation of `y` (orthogonal Procrustes via SVD).
inline double procrustes_relative_rms(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  const Eigen::RowVectorXd mx = x.colwise().mean();
  const Eigen::RowVectorXd my = y.colwise().mean();
  const Eigen::MatrixXd xc = x.rowwise() - mx;
  const Eigen::MatrixXd yc = y.rowwise() - my;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(yc.transpose() * xc, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd r = svd.matrixU() * svd.matrixV().transpose();
  const Eigen::MatrixXd aligned = yc * r;
  return std::sqrt((aligned - xc).squaredNorm() / xc.squaredNorm());
}

// Relative RMS error between two distance matrices (upper triangles).
inline double distance_relative_rms(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
      num += (a(i, j) - b(i, j)) * (a(i, j) - b(i, j));
      den += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(num / den);
}

// Central finite-difference gradient of f at y.
inline Eigen::MatrixXd numeric_gradient(const std::function<double(const Eigen::MatrixXd&)>& f,
                                        const Eigen::MatrixXd& y, double h) {
  Eigen::MatrixXd g(y.rows(), y.cols());
  Eigen::MatrixXd probe = y;
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    for (Eigen::Index k = 0; k < y.cols(); ++k) {
      const double orig = probe(i, k);
      probe(i, k) = orig + h;
      const double up = f(probe);
      probe(i, k) = orig - h;
      const double down = f(probe);
      probe(i, k) = orig;
      g(i, k) = (up - down) / (2.0 * h);
    }
  }
  return g;
}

// Shannon entropy (bits) of a probability row, ignoring zero entries.
inline double entropy_bits(const Eigen::VectorXd& row) {
  double h = 0.0;
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    if (row(j) > 0.0) h -= row(j) * std::log2(row(j));
  }
  return h;
}

}  // namespace crowdlens::testing
