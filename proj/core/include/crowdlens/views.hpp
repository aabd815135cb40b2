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

// Payloads for the crowd view (parallel sets), the word cloud,
// the timeline and the overview / details panels.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crowdlens/consensus.hpp"
#include "crowdlens/model.hpp"
#include "crowdlens/store.hpp"

namespace crowdlens {

struct ParallelSetsNode {
  std::string category;
  std::size_t count = 0;
  std::vector<ParallelSetsNode> children;  // split by the next axis
};

struct Ribbon {
  std::string from;  // category on axis k
  std::string to;    // category on axis k + 1
  std::size_t count = 0;
};

struct ParallelSetsModel {
  std::vector<std::string> axis_order;
  std::size_t root_count = 0;
  std::vector<ParallelSetsNode> tree;              // level 0 = first axis
  std::vector<std::vector<Ribbon>> ribbons;        // between axis k and k + 1
  std::vector<std::vector<std::pair<std::string, std::size_t>>> marginals;  // per axis
};

/// Nested category counts over `workers` in `axis_order`. Categories
/// follow the vocabulary's declaration order; empty cells are omitted.
/// Throws Error(kUnknownAxis) for names that are not profile fields, and
/// Error(kInvalidArgument) for an empty or repeated axis list.
ParallelSetsModel parallel_sets(const std::vector<WorkerProfile>& workers,
                                const Vocabulary& vocabulary,
                                const std::vector<std::string>& axis_order);

struct WordCloudEntry {
  std::string token;
  std::size_t count = 0;
};

/// The bundled English stopword list (one word per entry).
const std::vector<std::string>& stopwords();
/// Version tag of the bundled list, e.g. "v1".
std::string_view stopwords_version();

/// Lower-cased alphanumeric tokens of `text`, in order.
/// Case-folded alphanumeric runs, unfiltered.
std::vector<std::string> tokenize(std::string_view text);

/// Top-k tokens by frequency (ties lexicographic), excluding stopwords
/// and tokens shorter than three characters. Throws Error(kInvalidArgument)
/// for k == 0.
std::vector<WordCloudEntry> word_cloud(const std::vector<WorkerComment>& comments,
                                       std::size_t k);

struct TimelineBar {
  std::string dataset_id;
  Date date;
  std::size_t n_workers = 0;            // distinct workers with a response
  std::optional<double> mean_accuracy;  // unweighted mean of worker accuracies
  int fov_degrees = 0;
  int flythrough_speed = 0;
};

TimelineBar timeline_bar(const StudyDataset& dataset);
/// One bar per dataset, date ascending then id.
std::vector<TimelineBar> timeline(const Store& store);

struct UserMeans {
  double n_polyp_answers = 0.0;
  double n_polyp_free_answers = 0.0;
  std::optional<double> n_correct;
  std::optional<double> n_false_positive;
  std::optional<double> n_false_negative;
  std::optional<double> accuracy;
  double total_task_time_ms = 0.0;
  double normalized_task_time = 0.0;
};

struct SegmentMeans {
  double n_polyp_votes = 0.0;
  double n_polyp_free_votes = 0.0;
  std::optional<double> n_correct;
  std::optional<double> n_false_positive;
  std::optional<double> n_false_negative;
  double mean_response_time_ms = 0.0;
  double normalized_time = 0.0;
};

struct OverviewSummary {
  std::string dataset_id;
  std::size_t n_workers = 0;
  std::size_t n_segments = 0;
  std::size_t n_responses = 0;
  UserMeans user_means;
  SegmentMeans segment_means;
  std::vector<SweepRow> sweep;  // step 5, the SE/SP distribution
  std::vector<std::pair<std::string, std::optional<double>>> worker_accuracy;
};

inline constexpr double kOverviewSweepStep = 5.0;

/// Means of the per-user and per-segment aggregates. Statistics means are
/// over items with known truth and empty when there are none.
OverviewSummary overview(const StudyDataset& dataset);

struct WorkerResponseDetail {
  std::string segment_id;
  int ordinal = 0;
  Direction direction = Direction::kAntegrade;
  int presentation_index = 0;
  Answer answer = Answer::kPolypFree;
  GroundTruth ground_truth = GroundTruth::kUnknown;
  std::optional<bool> correct;
  std::int64_t response_time_ms = 0;
  // Running accuracy over this and earlier presentations with known truth.
  std::optional<double> running_accuracy;
};

struct WorkerDetails {
  WorkerProfile profile;
  std::optional<UserAggregate> aggregate;
  std::vector<WorkerResponseDetail> responses;  // presentation order
  std::optional<std::string> comment;
};

/// Throws Error(kUnknownWorker).
WorkerDetails worker_details(const StudyDataset& dataset, std::string_view worker_id);

}  // namespace crowdlens
