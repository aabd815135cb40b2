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

// Synthetic studies with known ground truth and scripted worker behaviour,
// used as closed-form oracles for consensus, anomaly and sweep logic.

#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "crowdlens/model.hpp"

namespace crowdlens {

struct ReliableWorker {
  double accuracy = 0.8;  // P(answer == truth)
};
struct RandomClicker {};
struct ConstantWorker {
  Answer answer = Answer::kPolyp;
};
struct BiasedWorker {
  double p_yes = 0.5;  // P(answer == polyp), independent of truth
};

using WorkerBehaviour = std::variant<ReliableWorker, RandomClicker, ConstantWorker, BiasedWorker>;

struct WorkerModel {
  WorkerBehaviour behaviour = ReliableWorker{};
  double time_mean_ms = 5000.0;
  double time_stddev_ms = 1500.0;
};

struct WorkerGroup {
  WorkerModel model;
  std::size_t count = 1;
};

struct SimulationSpec {
  std::string dataset_id = "sim";
  Date created_on{2026, 1, 1};
  int fov_degrees = 120;
  int flythrough_speed = 30;
  std::size_t n_segments = 20;
  double polyp_fraction = 0.2;
  std::vector<WorkerGroup> workers;
  std::size_t views_per_segment = 1;
  std::uint64_t seed = 0;
  bool with_comments = true;
};

inline constexpr std::int64_t kMinSimulatedResponseMs = 100;

/// Throws Error(kInvalidArgument) on out-of-range fields.
void validate(const SimulationSpec& spec);

/// Segment s is viewed by workers (s * v + j) mod W for j < v, so every
/// segment gets exactly `views_per_segment` distinct viewers. Truth labels
/// put round(polyp_fraction * n) polyps at seeded random positions.
/// Throws Error(kInfeasibleAssignment) when views_per_segment exceeds the
/// worker count.
StudyDataset simulate(const SimulationSpec& spec);

/// P(majority of n independent workers with accuracy p is right):
/// sum_{k > n/2} C(n, k) p^k (1 - p)^(n - k). Throws Error(kEvenN) for even
/// n, Error(kInvalidRange) for p outside [0, 1].
double expected_majority_accuracy(double p, unsigned n);

/// JSON form used by `crowdlens simulate --spec`:
/// {"dataset_id", "created_on", "fov_degrees", "flythrough_speed",
///  "n_segments", "polyp_fraction", "views_per_segment", "seed",
///  "with_comments", "workers": [{"kind": "reliable", "accuracy": 0.8,
///  "count": 5, "time_mean_ms": 5000, "time_stddev_ms": 1500}, ...]}
/// kind is reliable | random_clicker | constant (with "answer") | biased
/// (with "p_yes").
SimulationSpec simulation_spec_from_json(const nlohmann::json& j);

}  // namespace crowdlens
