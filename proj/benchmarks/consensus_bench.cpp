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

#include <random>

#include "crowdlens/anomaly.hpp"
#include "crowdlens/consensus.hpp"
#include "crowdlens/jaro_winkler.hpp"
#include "crowdlens/simulator.hpp"

namespace crowdlens {
namespace {

StudyDataset study(std::size_t workers, std::size_t segments) {
  SimulationSpec spec;
  spec.n_segments = segments;
  spec.views_per_segment = std::min<std::size_t>(5, workers);
  spec.seed = 1;
  spec.workers = {{WorkerModel{ReliableWorker{0.8}}, workers}};
  return simulate(spec);
}

void BM_JaroWinkler(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::string a(n, 'P'), b(n, 'P');
  for (auto& c : a) c = "PNU"[rng() % 3];
  for (auto& c : b) c = "PNU"[rng() % 3];
  for (auto _ : state) benchmark::DoNotOptimize(jaro_winkler(a, b));
}
BENCHMARK(BM_JaroWinkler)->Arg(20)->Arg(136)->Arg(1000);

void BM_Classify(benchmark::State& state) {
  const auto ds = study(static_cast<std::size_t>(state.range(0)), 136);
  for (auto _ : state) benchmark::DoNotOptimize(classify(ds, ConsensusThreshold(50)));
}
BENCHMARK(BM_Classify)->Arg(20)->Arg(200);

void BM_Sweep(benchmark::State& state) {
  const auto ds = study(static_cast<std::size_t>(state.range(0)), 136);
  for (auto _ : state) benchmark::DoNotOptimize(sweep(ds, 1.0));
}
BENCHMARK(BM_Sweep)->Arg(20)->Arg(200);

void BM_SimilarWorkers(benchmark::State& state) {
  const auto ds = study(static_cast<std::size_t>(state.range(0)), 136);
  const auto probe = ds.workers.front().id;
  for (auto _ : state) benchmark::DoNotOptimize(similar_workers(ds, probe, 5));
}
BENCHMARK(BM_SimilarWorkers)->Arg(20)->Arg(200);

}  // namespace
}  // namespace crowdlens
