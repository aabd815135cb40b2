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

#include "crowdlens/anomaly.hpp"

#include <algorithm>
#include <cstdlib>

#include "crowdlens/error.hpp"
#include "crowdlens/jaro_winkler.hpp"
#include "study_index.hpp"

namespace crowdlens {

std::vector<ResponseSignature> signatures(const StudyDataset& dataset) {
  detail::StudyIndex index(dataset);
  std::vector<ResponseSignature> out;
  out.reserve(dataset.workers.size());
  for (std::size_t w = 0; w < dataset.workers.size(); ++w) {
    std::string sig(dataset.segments.size(), 'U');
    for (std::size_t ri : index.by_worker[w]) {
      const auto& r = dataset.responses[ri];
      sig[index.segment_of(r)] = r.answer == Answer::kPolyp ? 'P' : 'N';
    }
    out.push_back({dataset.workers[w].id, std::move(sig)});
  }
  return out;
}

std::vector<SimilarityHit> similar_workers(const StudyDataset& dataset,
                                           std::string_view probe_worker,
                                           std::size_t k) {
  const auto sigs = signatures(dataset);
  auto probe = std::find_if(sigs.begin(), sigs.end(), [&](const ResponseSignature& s) {
    return s.worker_id == probe_worker;
  });
  if (probe == sigs.end()) {
    throw Error(ErrorCode::kUnknownWorker, "unknown probe worker",
                {{"worker_id", probe_worker}});
  }

  std::vector<SimilarityHit> exact, others;
  for (const auto& s : sigs) {
    if (&s == &*probe) continue;
    if (s.signature == probe->signature) {
      exact.push_back({s.worker_id, 1.0, true});
    } else {
      others.push_back({s.worker_id, jaro_winkler(probe->signature, s.signature), false});
    }
  }
  auto order = [](const SimilarityHit& a, const SimilarityHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.worker_id < b.worker_id;
  };
  std::sort(exact.begin(), exact.end(), order);
  std::sort(others.begin(), others.end(), order);
  if (others.size() > k) others.resize(k);
  exact.insert(exact.end(), others.begin(), others.end());
  return exact;
}

std::vector<SegmentAmbiguity> ambiguous_segments(const StudyDataset& dataset,
                                                 double min_ambiguity) {
  if (!(min_ambiguity >= 0.0 && min_ambiguity <= 1.0)) {
    throw Error(ErrorCode::kInvalidRange, "min ambiguity must be within [0, 1]");
  }
  detail::StudyIndex index(dataset);
  std::vector<SegmentAmbiguity> out;
  for (std::size_t s = 0; s < dataset.segments.size(); ++s) {
    const auto& ids = index.by_segment[s];
    if (ids.empty()) continue;
    const auto n = static_cast<long long>(ids.size());
    long long polyp = 0;
    for (std::size_t ri : ids) polyp += dataset.responses[ri].answer == Answer::kPolyp;
    // 1 - |2k/n - 1| == 1 - |2k - n| / n, integer numerator keeps it exact.
    const double amb =
        1.0 - static_cast<double>(std::llabs(2 * polyp - n)) / static_cast<double>(n);
    if (amb >= min_ambiguity) {
      out.push_back({dataset.segments[s].id, ids.size(),
                     static_cast<std::size_t>(polyp), amb});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const SegmentAmbiguity& a, const SegmentAmbiguity& b) {
                     return a.ambiguity > b.ambiguity;
                   });
  return out;
}

std::string_view to_string(SuspectReason r) {
  return r == SuspectReason::kConstantAnswer ? "CONSTANT_ANSWER" : "TOO_FAST";
}

std::vector<SuspectFlag> flag_suspect_workers(const StudyDataset& dataset,
                                              const SuspectConfig& config) {
  detail::StudyIndex index(dataset);
  std::vector<SuspectFlag> out;
  for (std::size_t w = 0; w < dataset.workers.size(); ++w) {
    const auto& ids = index.by_worker[w];
    if (ids.empty()) continue;
    SuspectFlag flag;
    flag.worker_id = dataset.workers[w].id;
    std::size_t polyp = 0;
    for (std::size_t ri : ids) {
      const auto& r = dataset.responses[ri];
      polyp += r.answer == Answer::kPolyp;
      flag.total_task_time_ms += r.response_time_ms;
    }
    if (ids.size() >= config.min_viewed_for_constant &&
        (polyp == 0 || polyp == ids.size())) {
      flag.reasons.push_back(SuspectReason::kConstantAnswer);
    }
    flag.floor_ms = config.absolute_floor_ms.value_or(
        static_cast<std::int64_t>(ids.size()) * config.per_response_floor_ms);
    if (flag.total_task_time_ms < flag.floor_ms) {
      flag.reasons.push_back(SuspectReason::kTooFast);
    }
    if (!flag.reasons.empty()) out.push_back(std::move(flag));
  }
  std::sort(out.begin(), out.end(), [](const SuspectFlag& a, const SuspectFlag& b) {
    return a.worker_id < b.worker_id;
  });
  return out;
}

}  // namespace crowdlens
