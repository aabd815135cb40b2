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

#include "crowdlens/tsne.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "crowdlens/error.hpp"
#include "crowdlens/mds.hpp"

namespace crowdlens {

namespace {

// Row entropy in bits and the normalized row, for precision beta.
double row_entropy(const Eigen::MatrixXd& sq, Eigen::Index i, double beta,
                   Eigen::VectorXd& row) {
  const Eigen::Index n = sq.rows();
  double min_sq = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j != i) min_sq = std::min(min_sq, sq(i, j));
  }
  double sum = 0.0;
  double weighted = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j == i) {
      row(j) = 0.0;
      continue;
    }
    const double shifted = sq(i, j) - min_sq;
    row(j) = std::exp(-beta * shifted);
    sum += row(j);
    weighted += shifted * row(j);
  }
  row /= sum;
  // H = log(sum) + beta * E[shifted], in nats.
  return (std::log(sum) + beta * weighted / sum) / std::log(2.0);
}

}  // namespace

ConditionalAffinities conditional_affinities(const Eigen::MatrixXd& sq,
                                             double perplexity, double tolerance,
                                             bool require_target) {
  const Eigen::Index n = sq.rows();
  if (!(perplexity >= 1.0) || !(perplexity < static_cast<double>(n - 1))) {
    throw Error(ErrorCode::kBadPerplexity,
                "perplexity must lie in [1, n - 1) for n items",
                {{"perplexity", perplexity}, {"n", n}});
  }
  const double target = std::log2(perplexity);
  ConditionalAffinities out;
  out.p = Eigen::MatrixXd::Zero(n, n);
  out.beta.resize(static_cast<std::size_t>(n));
  out.entropy_bits.resize(static_cast<std::size_t>(n));
  Eigen::VectorXd row(n);

  for (Eigen::Index i = 0; i < n; ++i) {
    double beta = 1.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double h = row_entropy(sq, i, beta, row);
    for (int iter = 0; iter < 500 && std::abs(h - target) > tolerance; ++iter) {
      if (h > target) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
      } else {
        hi = beta;
        beta = 0.5 * (beta + lo);
      }
      h = row_entropy(sq, i, beta, row);
    }
    if (std::abs(h - target) > tolerance) {
      ++out.n_unreached;
    }
    if (std::abs(h - target) > tolerance && require_target) {
      throw Error(ErrorCode::kBadPerplexity,
                  "bandwidth search cannot reach the target entropy",
                  {{"point", i}, {"entropy_bits", h}, {"target_bits", target}});
    }
    out.p.row(i) = row.transpose();
    out.beta[static_cast<std::size_t>(i)] = beta;
    out.entropy_bits[static_cast<std::size_t>(i)] = h;
  }
  return out;
}

Eigen::MatrixXd joint_affinities(const ConditionalAffinities& c) {
  const double n = static_cast<double>(c.p.rows());
  return (c.p + c.p.transpose()) / (2.0 * n);
}

double kl_divergence(const Eigen::MatrixXd& p, const Eigen::MatrixXd& y) {
  const Eigen::Index n = p.rows();
  Eigen::MatrixXd num = Eigen::MatrixXd::Zero(n, n);
  double z = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
      num(i, j) = num(j, i) = v;
      z += 2.0 * v;
    }
  }
  double kl = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j || p(i, j) <= 0.0) continue;
      kl += p(i, j) * std::log(p(i, j) * z / num(i, j));
    }
  }
  return kl;
}

Eigen::MatrixXd kl_gradient(const Eigen::MatrixXd& p, const Eigen::MatrixXd& y) {
  const Eigen::Index n = p.rows();
  Eigen::MatrixXd num = Eigen::MatrixXd::Zero(n, n);
  double z = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
      num(i, j) = num(j, i) = v;
      z += 2.0 * v;
    }
  }
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, y.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double coeff = 4.0 * (p(i, j) - num(i, j) / z) * num(i, j);
      grad.row(i) += coeff * (y.row(i) - y.row(j));
    }
  }
  return grad;
}

TsneResult tsne_embed(const Eigen::MatrixXd& distances, const TsneOptions& options) {
  check_distance_matrix(distances);
  if (options.iterations < 1) {
    throw Error(ErrorCode::kInvalidArgument, "t-SNE needs at least one iteration");
  }
  if (!(options.learning_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "learning rate must be positive");
  }
  const Eigen::Index n = distances.rows();
  const auto cond = conditional_affinities(distances.array().square().matrix(),
                                           options.perplexity,
                                           options.entropy_tolerance_bits,
                                           options.require_entropy_target);
  const Eigen::MatrixXd p = joint_affinities(cond);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1e-4);
  Eigen::MatrixXd y(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i, 0) = normal(rng);
    y(i, 1) = normal(rng);
  }
  Eigen::MatrixXd update = Eigen::MatrixXd::Zero(n, 2);
  Eigen::MatrixXd gains = Eigen::MatrixXd::Ones(n, 2);

  TsneResult result;
  result.entropy_bits = cond.entropy_bits;
  result.n_unreached = cond.n_unreached;
  result.kl_history.reserve(static_cast<std::size_t>(options.iterations));
  for (int iter = 0; iter < options.iterations; ++iter) {
    const bool exaggerate = iter < options.exaggeration_iterations;
    const Eigen::MatrixXd grad =
        kl_gradient(exaggerate ? Eigen::MatrixXd(p * options.early_exaggeration) : p, y);
    const double momentum = iter < options.momentum_switch_iteration
                                ? options.initial_momentum
                                : options.final_momentum;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index d = 0; d < 2; ++d) {
        // Delta-bar-delta gains: grow when the gradient opposes the
        // running update, shrink otherwise.
        const bool same_sign = (grad(i, d) > 0.0) == (update(i, d) > 0.0);
        gains(i, d) = same_sign ? gains(i, d) * 0.8 : gains(i, d) + 0.2;
        gains(i, d) = std::max(gains(i, d), 0.01);
        update(i, d) = momentum * update(i, d) -
                       options.learning_rate * gains(i, d) * grad(i, d);
      }
    }
    y += update;
    y.rowwise() -= y.colwise().mean();
    result.kl_history.push_back(kl_divergence(p, y));
  }
  result.positions = std::move(y);
  return result;
}

TsneResult tsne_embed_points(const Eigen::MatrixXd& points, const TsneOptions& options) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = (points.row(i) - points.row(j)).norm();
    }
  }
  return tsne_embed(d, options);
}

}  // namespace crowdlens
