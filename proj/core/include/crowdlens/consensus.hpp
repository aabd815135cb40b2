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

// Consensus over crowd votes: per-segment vote ratios, threshold
// classification, confusion counts with sensitivity/specificity, threshold
// sweeps, and the per-user / per-segment aggregates shown in the consensus
// map margins.
//
// Every function here is pure over an immutable dataset. Callers that
// honour anomaly marks pass `apply_exclusions(dataset, ...)`.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crowdlens/model.hpp"

namespace crowdlens {

struct VoteSummary {
  std::string segment_id;
  std::size_t n_viewers = 0;
  std::size_t n_polyp_votes = 0;
  double polyp_ratio = 0.0;
};

struct VoteSummaries {
  std::vector<VoteSummary> viewed;    // canonical segment order
  std::vector<std::string> unviewed;  // segments nobody answered
};

VoteSummaries vote_summaries(const StudyDataset& dataset);

/// Consensus rate in percent, inclusive [0, 100].
class ConsensusThreshold {
 public:
  /// Throws Error(kInvalidRange) outside [0, 100] or for NaN.
  explicit ConsensusThreshold(double percent);
  double percent() const { return percent_; }

 private:
  double percent_;
};

/// polyp_votes / viewers >= percent / 100, evaluated as
/// polyp_votes * 100 >= percent * viewers so integer thresholds are exact.
bool meets_threshold(std::size_t polyp_votes, std::size_t viewers,
                     ConsensusThreshold threshold);

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// TP / (TP + FN); nullopt when there are no true polyps.
std::optional<double> sensitivity(const ConfusionCounts& c);
/// TN / (FP + TN); nullopt when there are no true polyp-free segments.
std::optional<double> specificity(const ConfusionCounts& c);

enum class SegmentLabel { kPolyp, kPolypFree, kUnviewed };
std::string_view to_string(SegmentLabel label);  // polyp, polyp_free, unviewed

struct LabelledSegment {
  std::string segment_id;
  SegmentLabel label = SegmentLabel::kUnviewed;
};

struct ConsensusReport {
  ConsensusThreshold threshold{0.0};
  std::vector<LabelledSegment> labels;  // canonical segment order
  ConfusionCounts confusion;            // viewed segments with known truth
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::size_t n_polyp_labels = 0;
};

ConsensusReport classify(const StudyDataset& dataset, ConsensusThreshold threshold);

struct SweepRow {
  double threshold = 0.0;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::size_t n_polyp_labels = 0;
};

/// Thresholds k * step for k = 0, 1, ... up to 100; 100 is appended when
/// step does not divide it. Throws Error(kInvalidArgument) unless
/// 0.001 <= step.
std::vector<SweepRow> sweep(const StudyDataset& dataset, double step_percent);

struct UserAggregate {
  std::string worker_id;
  std::size_t n_responses = 0;
  std::size_t n_polyp_answers = 0;
  std::size_t n_polyp_free_answers = 0;
  // Over responses on segments with known truth.
  std::size_t n_truth_labelled = 0;
  std::size_t n_correct = 0;
  std::size_t n_false_positive = 0;
  std::size_t n_false_negative = 0;
  std::optional<double> accuracy;  // n_correct / n_truth_labelled
  std::int64_t total_task_time_ms = 0;
  double normalized_task_time = 0.0;  // total / max total, in (0, 1]
};

/// One entry per worker with at least one response, in worker file order.
std::vector<UserAggregate> user_aggregates(const StudyDataset& dataset);

struct SegmentAggregate {
  std::string segment_id;
  std::size_t n_polyp_votes = 0;
  std::size_t n_polyp_free_votes = 0;
  // Engaged only when the segment's truth is known.
  std::optional<std::size_t> n_correct;
  std::optional<std::size_t> n_false_positive;
  std::optional<std::size_t> n_false_negative;
  double mean_response_time_ms = 0.0;
  double normalized_time = 0.0;  // mean / max mean, in (0, 1]
};

/// One entry per viewed segment, canonical order.
std::vector<SegmentAggregate> segment_aggregates(const StudyDataset& dataset);

enum class MatrixMode { kResponse, kStatistics };
enum class SortKey { kTime, kPolyps, kAccuracy, kFalseNegatives };

enum class CellElement {
  kPolyp,
  kPolypFree,
  kCorrect,
  kFalsePositive,
  kFalseNegative,
  kAbsent,
};

std::string_view to_string(MatrixMode m);
std::string_view to_string(SortKey k);  // time, polyps, accuracy, fn
std::string_view to_string(CellElement e);
std::optional<MatrixMode> parse_matrix_mode(std::string_view s);
std::optional<SortKey> parse_sort_key(std::string_view s);

struct CellView {
  std::string worker_id;
  std::string segment_id;
  CellElement element = CellElement::kAbsent;
  // Response time over the slowest viewer of the same segment; 0 if absent.
  double relative_time = 0.0;
};

struct MatrixColumn {
  std::string segment_id;
  int ordinal = 0;
  Direction direction = Direction::kAntegrade;
  Orientation orientation = Orientation::kSupine;
  std::optional<SegmentAggregate> aggregate;  // empty for unviewed segments
};

struct MatrixRow {
  UserAggregate margin;
  std::vector<CellView> cells;  // aligned with ConsensusMatrix::columns
};

struct ConsensusMatrix {
  MatrixMode mode = MatrixMode::kResponse;
  SortKey sort = SortKey::kTime;
  std::vector<MatrixColumn> columns;
  std::vector<MatrixRow> rows;
};

/// Rows sorted by `sort` descending, ties by worker id ascending.
/// Statistics mode and the accuracy / fn sort keys need every segment's
/// truth; otherwise throws Error(kStatisticsUnavailable).
ConsensusMatrix consensus_matrix(const StudyDataset& dataset, MatrixMode mode,
                                 SortKey sort);

}  // namespace crowdlens
