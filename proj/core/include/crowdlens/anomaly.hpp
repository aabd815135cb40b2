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

// Anomaly surfacing: response signatures, pattern matching between
// workers, ambiguous segments, and automatic suspect suggestions. None of
// this marks anything anomalous by itself; only analyst annotations feed
// back into the consensus arithmetic.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crowdlens/model.hpp"

namespace crowdlens {

/// A worker's answers as a string over {P, N, U} in canonical segment
/// order; 'U' marks segments the worker did not answer.
struct ResponseSignature {
  std::string worker_id;
  std::string signature;
};

/// One per worker, worker file order.
std::vector<ResponseSignature> signatures(const StudyDataset& dataset);

struct SimilarityHit {
  std::string worker_id;
  double score = 0.0;
  bool exact_match = false;
};

/// Every worker whose signature equals the probe's (score 1.0, flagged
/// exact), followed by the `k` best non-exact workers by Jaro-Winkler
/// score. The probe itself is never returned. Order: score descending,
/// worker id ascending. Throws Error(kUnknownWorker).
std::vector<SimilarityHit> similar_workers(const StudyDataset& dataset,
                                           std::string_view probe_worker,
                                           std::size_t k = 5);

struct SegmentAmbiguity {
  std::string segment_id;
  std::size_t n_viewers = 0;
  std::size_t n_polyp_votes = 0;
  double ambiguity = 0.0;  // 1 - |2r - 1|
};

/// Viewed segments with ambiguity >= min_ambiguity, most ambiguous first
/// (ties in canonical order). Throws Error(kInvalidRange) outside [0, 1].
std::vector<SegmentAmbiguity> ambiguous_segments(const StudyDataset& dataset,
                                                 double min_ambiguity);

enum class SuspectReason { kConstantAnswer, kTooFast };
std::string_view to_string(SuspectReason r);  // CONSTANT_ANSWER, TOO_FAST

struct SuspectConfig {
  // Constant-answer flag needs at least this many answered segments.
  std::size_t min_viewed_for_constant = 5;
  // Default floor is n_responses * per_response_floor_ms ...
  std::int64_t per_response_floor_ms = 1000;
  // ... unless an absolute floor is given.
  std::optional<std::int64_t> absolute_floor_ms;
};

struct SuspectFlag {
  std::string worker_id;
  std::vector<SuspectReason> reasons;
  std::int64_t total_task_time_ms = 0;
  std::int64_t floor_ms = 0;
};

/// Workers flagged by at least one rule, ascending id.
std::vector<SuspectFlag> flag_suspect_workers(const StudyDataset& dataset,
                                              const SuspectConfig& config = {});

}  // namespace crowdlens
