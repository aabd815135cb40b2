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

#include "crowdlens/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "crowdlens/error.hpp"

namespace crowdlens {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

const std::vector<std::string> kAgeBrackets = {"18-24", "25-34", "35-44", "45-54", "55+"};
const std::vector<std::string> kGenders = {"female", "male"};
const std::vector<std::string> kEducation = {"high_school", "bachelor", "master", "doctorate"};
const std::vector<std::string> kRewards = {"low", "medium", "high"};
const std::vector<std::string> kLocations = {"USA", "India"};
const std::vector<std::string> kPhrases = {
    "video too fast",      "difficult to see",   "fast fly through",
    "hard task",           "clear videos",       "difficult video",
    "the camera was fast", "fun",                "polyp hard to spot",
    "",
};

template <typename Rng>
const std::string& pick(const std::vector<std::string>& v, Rng& rng) {
  std::uniform_int_distribution<std::size_t> d(0, v.size() - 1);
  return v[d(rng)];
}

}  // namespace

void validate(const SimulationSpec& spec) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidArgument, msg); };
  if (spec.dataset_id.empty()) fail("dataset_id must not be empty");
  if (spec.n_segments < 1) fail("n_segments must be at least 1");
  if (spec.views_per_segment < 1) fail("views_per_segment must be at least 1");
  if (!is_probability(spec.polyp_fraction)) fail("polyp_fraction must lie in [0, 1]");
  if (spec.workers.empty()) fail("at least one worker group is required");
  if (spec.fov_degrees <= 0 || spec.flythrough_speed <= 0) {
    fail("fov_degrees and flythrough_speed must be positive");
  }
  for (const auto& g : spec.workers) {
    if (g.count < 1) fail("worker group count must be at least 1");
    if (!(g.model.time_mean_ms > 0.0)) fail("time_mean_ms must be positive");
    if (!(g.model.time_stddev_ms >= 0.0)) fail("time_stddev_ms must be non-negative");
    std::visit(
        [&](const auto& b) {
          using T = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<T, ReliableWorker>) {
            if (!is_probability(b.accuracy)) fail("accuracy must lie in [0, 1]");
          } else if constexpr (std::is_same_v<T, BiasedWorker>) {
            if (!is_probability(b.p_yes)) fail("p_yes must lie in [0, 1]");
          }
        },
        g.model.behaviour);
  }
}

StudyDataset simulate(const SimulationSpec& spec) {
  validate(spec);
  std::size_t n_workers = 0;
  for (const auto& g : spec.workers) n_workers += g.count;
  if (spec.views_per_segment > n_workers) {
    throw Error(ErrorCode::kInfeasibleAssignment,
                "views_per_segment exceeds the number of workers",
                {{"views_per_segment", spec.views_per_segment}, {"workers", n_workers}});
  }

  std::mt19937_64 rng(spec.seed);
  StudyDataset ds;
  ds.manifest.id = spec.dataset_id;
  ds.manifest.created_on = spec.created_on;
  ds.manifest.fov_degrees = spec.fov_degrees;
  ds.manifest.flythrough_speed = spec.flythrough_speed;

  const std::size_t n_polyps = static_cast<std::size_t>(
      std::llround(spec.polyp_fraction * static_cast<double>(spec.n_segments)));
  std::vector<char> is_polyp(spec.n_segments, 0);
  std::fill(is_polyp.begin(), is_polyp.begin() + static_cast<long>(n_polyps), 1);
  std::shuffle(is_polyp.begin(), is_polyp.end(), rng);

  const int width = static_cast<int>(std::to_string(spec.n_segments).size());
  for (std::size_t s = 0; s < spec.n_segments; ++s) {
    SegmentRecord seg;
    seg.id = fmt::format("S{:0{}d}", s + 1, width);
    seg.dataset_id = spec.dataset_id;
    seg.ordinal = static_cast<int>(s + 1);
    // Four fly-throughs: supine/prone x antegrade/retrograde.
    const std::size_t quarter = 4 * s / spec.n_segments;
    seg.orientation = quarter < 2 ? Orientation::kSupine : Orientation::kProne;
    seg.direction = quarter % 2 == 0 ? Direction::kAntegrade : Direction::kRetrograde;
    seg.ground_truth = is_polyp[s] ? GroundTruth::kPolyp : GroundTruth::kPolypFree;
    ds.segments.push_back(std::move(seg));
  }

  std::vector<const WorkerModel*> models;
  const int wwidth = static_cast<int>(std::to_string(n_workers).size());
  std::uniform_int_distribution<int> expertise(1, 5);
  for (const auto& g : spec.workers) {
    for (std::size_t c = 0; c < g.count; ++c) {
      WorkerProfile w;
      w.id = fmt::format("W{:0{}d}", models.size() + 1, wwidth);
      w.age_bracket = pick(kAgeBrackets, rng);
      w.gender = pick(kGenders, rng);
      w.education_level = pick(kEducation, rng);
      w.medical_expertise = std::to_string(expertise(rng));
      w.visualization_expertise = std::to_string(expertise(rng));
      w.reward_tier = pick(kRewards, rng);
      w.location = pick(kLocations, rng);
      ds.workers.push_back(std::move(w));
      models.push_back(&g.model);
    }
  }
  ds.manifest.vocabulary = {{"age_bracket", kAgeBrackets}, {"gender", kGenders},
                            {"education_level", kEducation}, {"reward_tier", kRewards},
                            {"location", kLocations}};
  for (const char* f : {"medical_expertise", "visualization_expertise"}) {
    ds.manifest.vocabulary[f] = {"1", "2", "3", "4", "5"};
  }
  for (auto& [field, cats] : ds.manifest.vocabulary) cats.emplace_back(kUnspecified);

  // Round-robin assignment.
  std::vector<std::vector<std::size_t>> assigned(n_workers);
  for (std::size_t s = 0; s < spec.n_segments; ++s) {
    for (std::size_t j = 0; j < spec.views_per_segment; ++j) {
      assigned[(s * spec.views_per_segment + j) % n_workers].push_back(s);
    }
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Timestamp start{*parse_timestamp(format_date(spec.created_on) + "T08:00:00Z")};
  for (std::size_t w = 0; w < n_workers; ++w) {
    const WorkerModel& model = *models[w];
    // Random presentation order per worker.
    std::vector<std::size_t> order = assigned[w];
    std::shuffle(order.begin(), order.end(), rng);
    std::normal_distribution<double> time(model.time_mean_ms, model.time_stddev_ms);
    std::int64_t clock = start.millis_since_epoch + static_cast<std::int64_t>(w) * 60000;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const auto& seg = ds.segments[order[k]];
      const bool truth_polyp = seg.ground_truth == GroundTruth::kPolyp;
      const double u = unit(rng);
      const bool says_polyp = std::visit(
          [&](const auto& b) -> bool {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, ReliableWorker>) {
              return u < b.accuracy ? truth_polyp : !truth_polyp;
            } else if constexpr (std::is_same_v<T, RandomClicker>) {
              return u < 0.5;
            } else if constexpr (std::is_same_v<T, ConstantWorker>) {
              return b.answer == Answer::kPolyp;
            } else {
              return u < b.p_yes;
            }
          },
          model.behaviour);
      // Truncated normal by rejection; fall back to the floor after many misses.
      double t = time(rng);
      for (int tries = 0; t < kMinSimulatedResponseMs && tries < 1000; ++tries) t = time(rng);
      const auto ms = std::max<std::int64_t>(kMinSimulatedResponseMs, std::llround(t));
      clock += ms;
      ds.responses.push_back({ds.workers[w].id, seg.id,
                              says_polyp ? Answer::kPolyp : Answer::kPolypFree, ms,
                              static_cast<int>(k + 1), Timestamp{clock}});
    }
    if (spec.with_comments) {
      const std::string& text = pick(kPhrases, rng);
      if (!text.empty()) ds.comments.push_back({ds.workers[w].id, spec.dataset_id, text});
    }
  }
  return ds;
}

double expected_majority_accuracy(double p, unsigned n) {
  if (n % 2 == 0) throw Error(ErrorCode::kEvenN, "n must be odd", {{"n", n}});
  if (!is_probability(p)) throw Error(ErrorCode::kInvalidRange, "p must lie in [0, 1]");
  double total = 0.0;
  double binom = 1.0;  // C(n, k), updated incrementally
  for (unsigned k = 0; k <= n; ++k) {
    if (k > 0) binom = binom * static_cast<double>(n - k + 1) / static_cast<double>(k);
    if (2 * k > n) total += binom * std::pow(p, k) * std::pow(1.0 - p, n - k);
  }
  return total;
}

SimulationSpec simulation_spec_from_json(const nlohmann::json& j) {
  SimulationSpec spec;
  try {
    spec.dataset_id = j.value("dataset_id", spec.dataset_id);
    if (j.contains("created_on")) {
      auto d = parse_date(j.at("created_on").get<std::string>());
      if (!d) throw Error(ErrorCode::kInvalidArgument, "created_on must be YYYY-MM-DD");
      spec.created_on = *d;
    }
    spec.fov_degrees = j.value("fov_degrees", spec.fov_degrees);
    spec.flythrough_speed = j.value("flythrough_speed", spec.flythrough_speed);
    spec.n_segments = j.value("n_segments", spec.n_segments);
    spec.polyp_fraction = j.value("polyp_fraction", spec.polyp_fraction);
    spec.views_per_segment = j.value("views_per_segment", spec.views_per_segment);
    spec.seed = j.value("seed", spec.seed);
    spec.with_comments = j.value("with_comments", spec.with_comments);
    for (const auto& g : j.at("workers")) {
      WorkerGroup group;
      group.count = g.value("count", std::size_t{1});
      group.model.time_mean_ms = g.value("time_mean_ms", group.model.time_mean_ms);
      group.model.time_stddev_ms = g.value("time_stddev_ms", group.model.time_stddev_ms);
      const auto kind = g.at("kind").get<std::string>();
      if (kind == "reliable") {
        group.model.behaviour = ReliableWorker{g.value("accuracy", 0.8)};
      } else if (kind == "random_clicker") {
        group.model.behaviour = RandomClicker{};
      } else if (kind == "constant") {
        auto a = parse_answer(g.value("answer", std::string("POLYP")));
        if (!a) throw Error(ErrorCode::kInvalidArgument, "answer must be POLYP or POLYP_FREE");
        group.model.behaviour = ConstantWorker{*a};
      } else if (kind == "biased") {
        group.model.behaviour = BiasedWorker{g.value("p_yes", 0.5)};
      } else {
        throw Error(ErrorCode::kInvalidArgument, "unknown worker kind", {{"kind", kind}});
      }
      spec.workers.push_back(group);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("simulation spec: ") + e.what());
  }
  validate(spec);
  return spec;
}

}  // namespace crowdlens
