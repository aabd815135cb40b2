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

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "crowdlens/layout.hpp"
#include "crowdlens/mds.hpp"
#include "crowdlens/tsne.hpp"

namespace crowdlens {
namespace {

Eigen::MatrixXd random_distances(Eigen::Index n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd x(n, 3);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) d(i, j) = (x.row(i) - x.row(j)).norm();
  }
  return d;
}

void BM_Mds(benchmark::State& state) {
  const auto d = random_distances(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mds_embed(d));
}
BENCHMARK(BM_Mds)->Arg(25)->Arg(136)->Unit(benchmark::kMillisecond);

void BM_Tsne(benchmark::State& state) {
  const auto d = random_distances(state.range(0));
  TsneOptions opts;
  opts.perplexity = 15;
  for (auto _ : state) benchmark::DoNotOptimize(tsne_embed(d, opts));
}
BENCHMARK(BM_Tsne)->Arg(50)->Arg(136)->Unit(benchmark::kMillisecond);

void BM_ResolveOverlaps(benchmark::State& state) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point2> p;
  for (int i = 0; i < state.range(0); ++i) {
    const double r = 0.02 * std::sqrt(u(rng)), t = 6.283185307179586 * u(rng);
    p.push_back({r * std::cos(t), r * std::sin(t)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(resolve_overlaps(p, 0.015));
}
BENCHMARK(BM_ResolveOverlaps)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace crowdlens
