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
#include "crowdlens/tsne.hpp"
#include "oracles.hpp"

namespace crowdlens {
namespace {

Eigen::MatrixXd squared(const Eigen::MatrixXd& d) { return d.array().square().matrix(); }

TEST(TsneAffinities, EntropyHitsTarget) {
  std::mt19937_64 rng(2);
  const auto d = testing::distance_matrix(testing::random_points(rng, 40, 3));
  for (double perplexity : {2.0, 5.0, 15.0, 30.0}) {
    const auto c = conditional_affinities(squared(d), perplexity, 1e-4);
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
      const Eigen::VectorXd row = c.p.row(i).transpose();
      EXPECT_NEAR(row.sum(), 1.0, 1e-12);
      EXPECT_EQ(row(i), 0.0);
      EXPECT_NEAR(testing::entropy_bits(row), std::log2(perplexity), 1e-4)
          << "perplexity " << perplexity << " point " << i;
    }
  }
}

TEST(TsneAffinities, JointIsSymmetricAndNormalized) {
  std::mt19937_64 rng(3);
  const auto d = testing::distance_matrix(testing::random_points(rng, 15));
  const auto p = joint_affinities(conditional_affinities(squared(d), 4.0));
  EXPECT_NEAR(p.sum(), 1.0, 1e-12);
  EXPECT_LT((p - p.transpose()).cwiseAbs().maxCoeff(), 1e-18);
}

TEST(TsneAffinities, BadPerplexity) {
  Eigen::MatrixXd d(2, 2);
  d << 0, 1, 1, 0;
  for (double perplexity : {0.5, 1.0, 1.5, 1.99}) {
    try {
      conditional_affinities(squared(d), perplexity);
      FAIL() << perplexity;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kBadPerplexity);
    }
  }
  TsneOptions opts;
  opts.perplexity = 1.5;
  EXPECT_THROW(tsne_embed(d, opts), Error);
}

TEST(TsneAffinities, TiedNeighboursBoundTheEntropy) {
  // Point 0 sits at distance 1 from four others: entropy cannot drop below 2 bits.
  Eigen::MatrixXd x(6, 2);
  x << 0, 0, 1, 0, -1, 0, 0, 1, 0, -1, 5, 5;
  const auto sq = squared(testing::distance_matrix(x));
  EXPECT_THROW(conditional_affinities(sq, 2.0), Error);
  const auto lenient = conditional_affinities(sq, 2.0, 1e-4, false);
  EXPECT_GE(lenient.n_unreached, 1u);
  EXPECT_NEAR(lenient.entropy_bits[0], 2.0, 1e-6);
  EXPECT_TRUE(lenient.p.allFinite());
}

TEST(TsneGradient, MatchesFiniteDifferences) {
  std::mt19937_64 rng(12);
  const auto d = testing::distance_matrix(testing::random_points(rng, 12, 4));
  const auto p = joint_affinities(conditional_affinities(squared(d), 3.0));
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd y(12, 2);
  for (Eigen::Index i = 0; i < y.size(); ++i) y.data()[i] = g(rng);
  const Eigen::MatrixXd analytic = kl_gradient(p, y);
  const Eigen::MatrixXd numeric =
      testing::numeric_gradient([&](const Eigen::MatrixXd& z) { return kl_divergence(p, z); }, y, 1e-5);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double a = analytic.data()[i];
    const double n = numeric.data()[i];
    worst = std::max(worst, std::abs(a - n) / std::max(std::abs(a), std::abs(n)));
  }
  EXPECT_LT(worst, 1e-4);
}

Eigen::MatrixXd two_clusters(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 0.5);
  Eigen::MatrixXd x(10, 3);
  for (Eigen::Index i = 0; i < 10; ++i) {
    const double offset = i < 5 ? 0.0 : 25.0;
    for (Eigen::Index k = 0; k < 3; ++k) x(i, k) = offset + g(rng);
  }
  return x;
}

TEST(Tsne, SeparatesTwoClusters) {
  std::mt19937_64 rng(77);
  const Eigen::MatrixXd x = two_clusters(rng);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    TsneOptions opts;
    opts.perplexity = 3.0;
    opts.iterations = 500;
    opts.seed = seed;
    const auto y = tsne_embed_points(x, opts).positions;
    const auto dy = testing::distance_matrix(y);
    double intra = 0, inter = 0;
    int ni = 0, ne = 0;
    for (int i = 0; i < 10; ++i) {
      for (int j = i + 1; j < 10; ++j) {
        if ((i < 5) == (j < 5)) {
          intra += dy(i, j);
          ++ni;
        } else {
          inter += dy(i, j);
          ++ne;
        }
      }
    }
    EXPECT_LT(intra / ni, inter / ne) << "seed " << seed;
  }
}

TEST(Tsne, DeterministicPerSeedAndKlNonNegative) {
  std::mt19937_64 rng(4);
  const auto d = testing::distance_matrix(testing::random_points(rng, 20, 3));
  TsneOptions opts;
  opts.perplexity = 5;
  opts.iterations = 300;
  opts.seed = 42;
  const auto a = tsne_embed(d, opts);
  const auto b = tsne_embed(d, opts);
  EXPECT_EQ(a.positions, b.positions);
  EXPECT_EQ(a.kl_history, b.kl_history);
  for (double kl : a.kl_history) EXPECT_GE(kl, 0.0);
  EXPECT_LT(a.kl_history.back(), a.kl_history.front());
  opts.seed = 43;
  EXPECT_NE(tsne_embed(d, opts).positions, a.positions);
}

TEST(Tsne, OptionValidation) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Ones(5, 5) - Eigen::MatrixXd::Identity(5, 5);
  TsneOptions opts;
  opts.perplexity = 2;
  opts.iterations = 0;
  EXPECT_THROW(tsne_embed(d, opts), Error);
  opts.iterations = 10;
  opts.learning_rate = 0;
  EXPECT_THROW(tsne_embed(d, opts), Error);
}

}  // namespace
}  // namespace crowdlens
