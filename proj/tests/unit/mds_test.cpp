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

#include "crowdlens/error.hpp"
#include "crowdlens/mds.hpp"
#include "oracles.hpp"

namespace crowdlens {
namespace {

TEST(Mds, TwoPoints) {
  Eigen::MatrixXd d(2, 2);
  d << 0, 7, 7, 0;
  const auto r = mds_embed(d);
  EXPECT_NEAR((r.positions.row(0) - r.positions.row(1)).norm(), 7.0, 1e-9);
}

TEST(Mds, EquilateralTriangle) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Ones(3, 3) - Eigen::MatrixXd::Identity(3, 3);
  const auto y = mds_embed(d).positions;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) EXPECT_NEAR((y.row(i) - y.row(j)).norm(), 1.0, 1e-6);
  }
}

TEST(Mds, RecoversPlanarConfiguration) {
  std::mt19937_64 rng(21);
  const Eigen::MatrixXd x = testing::random_points(rng, 25);
  const Eigen::MatrixXd d = testing::distance_matrix(x);
  const auto r = mds_embed(d);
  EXPECT_LT(testing::procrustes_relative_rms(x, r.positions), 1e-6);
  EXPECT_LT(testing::distance_relative_rms(d, testing::distance_matrix(r.positions)), 1e-6);
}

TEST(Mds, StressNeverIncreases) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = 8 + trial;
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = u(rng);
    }
    const auto r = mds_embed(d);
    ASSERT_FALSE(r.stress_history.empty());
    for (std::size_t k = 1; k < r.stress_history.size(); ++k) {
      EXPECT_LE(r.stress_history[k], r.stress_history[k - 1]) << "trial " << trial << " step " << k;
    }
    EXPECT_NEAR(r.stress_history.back(), raw_stress(d, r.positions), 1e-9 * (1 + r.stress_history.back()));
    EXPECT_LE(r.iterations, 300);
  }
}

TEST(Mds, ClassicalScalingIsExactForPlanarInput) {
  std::mt19937_64 rng(8);
  const Eigen::MatrixXd x = testing::random_points(rng, 10);
  EXPECT_LT(testing::procrustes_relative_rms(x, classical_scaling(testing::distance_matrix(x))), 1e-9);
}

TEST(Mds, InputValidation) {
  auto code_of = [](const Eigen::MatrixXd& d) {
    try {
      mds_embed(d);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIoError;
  };
  EXPECT_EQ(code_of(Eigen::MatrixXd::Zero(1, 1)), ErrorCode::kDegenerateInput);
  EXPECT_EQ(code_of(Eigen::MatrixXd::Zero(2, 3)), ErrorCode::kInvalidArgument);
  Eigen::MatrixXd asym(2, 2);
  asym << 0, 1, 2, 0;
  EXPECT_EQ(code_of(asym), ErrorCode::kInvalidArgument);
  Eigen::MatrixXd neg(2, 2);
  neg << 0, -1, -1, 0;
  EXPECT_EQ(code_of(neg), ErrorCode::kInvalidArgument);
  Eigen::MatrixXd diag(2, 2);
  diag << 1, 1, 1, 0;
  EXPECT_EQ(code_of(diag), ErrorCode::kInvalidArgument);
}

TEST(Mds, CoincidentPointsHaveZeroStress) {
  const auto r = mds_embed(Eigen::MatrixXd::Zero(4, 4));
  EXPECT_EQ(r.stress_history.back(), 0.0);
  EXPECT_TRUE(r.positions.allFinite());
}

}  // namespace
}  // namespace crowdlens
