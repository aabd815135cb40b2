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

// Small hand-built datasets for tests.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "crowdlens/model.hpp"

namespace crowdlens::testing {

// votes[w][s]: 'P' polyp, 'N' polyp-free, '.' no response.
// truth[s]: 'P', 'N' or '?' (unknown).
// time(w, s) gives the response time in ms.
inline StudyDataset make_dataset(
    const std::vector<std::string>& votes, const std::string& truth,
    const std::function<std::int64_t(std::size_t, std::size_t)>& time =
        [](std::size_t w, std::size_t s) { return static_cast<std::int64_t>(1000 + 100 * w + 10 * s); }) {
  StudyDataset ds;
  ds.manifest.id = "t";
  ds.manifest.created_on = Date{2024, 5, 1};
  ds.manifest.fov_degrees = 120;
  ds.manifest.flythrough_speed = 30;
  for (const auto& f : profile_field_names()) ds.manifest.vocabulary[f] = {std::string(kUnspecified)};
  for (std::size_t s = 0; s < truth.size(); ++s) {
    SegmentRecord seg;
    seg.id = "S" + std::to_string(s + 1);
    seg.dataset_id = "t";
    seg.ordinal = static_cast<int>(s + 1);
    seg.direction = s % 2 == 0 ? Direction::kAntegrade : Direction::kRetrograde;
    seg.ground_truth = truth[s] == 'P'   ? GroundTruth::kPolyp
                       : truth[s] == 'N' ? GroundTruth::kPolypFree
                                         : GroundTruth::kUnknown;
    ds.segments.push_back(seg);
  }
  for (std::size_t w = 0; w < votes.size(); ++w) {
    WorkerProfile p;
    p.id = "W" + std::to_string(w + 1);
    p.age_bracket = p.gender = p.education_level = p.medical_expertise =
        p.visualization_expertise = p.reward_tier = p.location = std::string(kUnspecified);
    ds.workers.push_back(p);
    int shown = 0;
    for (std::size_t s = 0; s < votes[w].size(); ++s) {
      const char c = votes[w][s];
      if (c == '.') continue;
      CrowdResponse r;
      r.worker_id = p.id;
      r.segment_id = ds.segments[s].id;
      r.answer = c == 'P' ? Answer::kPolyp : Answer::kPolypFree;
      r.response_time_ms = time(w, s);
      r.presentation_index = ++shown;
      r.submitted_at = Timestamp{1714550400000 + static_cast<std::int64_t>(1000 * (w * 100 + s))};
      ds.responses.push_back(r);
    }
  }
  return ds;
}

// Random complete vote matrix over {P, N}.
inline std::vector<std::string> random_votes(std::mt19937_64& rng, std::size_t workers,
                                              std::size_t segments, double p_polyp = 0.5) {
  std::bernoulli_distribution coin(p_polyp);
  std::vector<std::string> out(workers, std::string(segments, 'N'));
  for (auto& row : out) {
    for (auto& c : row) c = coin(rng) ? 'P' : 'N';
  }
  return out;
}

inline std::string random_truth(std::mt19937_64& rng, std::size_t segments) {
  std::bernoulli_distribution coin(0.5);
  std::string t(segments, 'N');
  for (auto& c : t) c = coin(rng) ? 'P' : 'N';
  return t;
}

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("crowdlens-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace crowdlens::testing
