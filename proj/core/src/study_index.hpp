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

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "crowdlens/model.hpp"

namespace crowdlens::detail {

// Response lookup by worker and by segment position.
struct StudyIndex {
  explicit StudyIndex(const StudyDataset& ds) : dataset(ds) {
    for (std::size_t i = 0; i < ds.segments.size(); ++i) {
      segment_pos.emplace(ds.segments[i].id, i);
    }
    for (std::size_t i = 0; i < ds.workers.size(); ++i) {
      worker_pos.emplace(ds.workers[i].id, i);
    }
    by_segment.resize(ds.segments.size());
    by_worker.resize(ds.workers.size());
    for (std::size_t i = 0; i < ds.responses.size(); ++i) {
      const auto& r = ds.responses[i];
      by_segment[segment_pos.at(r.segment_id)].push_back(i);
      by_worker[worker_pos.at(r.worker_id)].push_back(i);
    }
  }

  std::size_t segment_of(const CrowdResponse& r) const {
    return segment_pos.at(r.segment_id);
  }
  GroundTruth truth_of(const CrowdResponse& r) const {
    return dataset.segments[segment_of(r)].ground_truth;
  }

  const StudyDataset& dataset;
  std::map<std::string, std::size_t, std::less<>> segment_pos;
  std::map<std::string, std::size_t, std::less<>> worker_pos;
  std::vector<std::vector<std::size_t>> by_segment;  // response indices
  std::vector<std::vector<std::size_t>> by_worker;
};

}  // namespace crowdlens::detail
