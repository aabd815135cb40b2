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

#include "crowdlens/consensus.hpp"

#include <algorithm>
#include <cmath>

#include "crowdlens/error.hpp"
#include "study_index.hpp"

namespace crowdlens {

namespace {

struct Tally {
  std::size_t viewers = 0;
  std::size_t polyp = 0;
};

std::vector<Tally> tally_votes(const detail::StudyIndex& index) {
  std::vector<Tally> out(index.dataset.segments.size());
  for (std::size_t s = 0; s < out.size(); ++s) {
    for (std::size_t r : index.by_segment[s]) {
      ++out[s].viewers;
      if (index.dataset.responses[r].answer == Answer::kPolyp) ++out[s].polyp;
    }
  }
  return out;
}

ConsensusReport classify_tallies(const StudyDataset& ds, const std::vector<Tally>& t,
                                 ConsensusThreshold threshold) {
  ConsensusReport report;
  report.threshold = threshold;
  report.labels.reserve(ds.segments.size());
  for (std::size_t s = 0; s < ds.segments.size(); ++s) {
    const auto& seg = ds.segments[s];
    if (t[s].viewers == 0) {
      report.labels.push_back({seg.id, SegmentLabel::kUnviewed});
      continue;
    }
    const bool polyp = meets_threshold(t[s].polyp, t[s].viewers, threshold);
    report.labels.push_back({seg.id, polyp ? SegmentLabel::kPolyp : SegmentLabel::kPolypFree});
    if (polyp) ++report.n_polyp_labels;
    switch (seg.ground_truth) {
      case GroundTruth::kPolyp: ++(polyp ? report.confusion.tp : report.confusion.fn); break;
      case GroundTruth::kPolypFree: ++(polyp ? report.confusion.fp : report.confusion.tn); break;
      case GroundTruth::kUnknown: break;
    }
  }
  report.sensitivity = sensitivity(report.confusion);
  report.specificity = specificity(report.confusion);
  return report;
}

// Classification of a single answer against truth.
CellElement statistic_of(Answer a, GroundTruth truth) {
  const bool said_polyp = a == Answer::kPolyp;
  const bool is_polyp = truth == GroundTruth::kPolyp;
  if (said_polyp == is_polyp) return CellElement::kCorrect;
  return said_polyp ? CellElement::kFalsePositive : CellElement::kFalseNegative;
}

}  // namespace

VoteSummaries vote_summaries(const StudyDataset& dataset) {
  detail::StudyIndex index(dataset);
  const auto tallies = tally_votes(index);
  VoteSummaries out;
  for (std::size_t s = 0; s < tallies.size(); ++s) {
    const auto& id = dataset.segments[s].id;
    if (tallies[s].viewers == 0) {
      out.unviewed.push_back(id);
      continue;
    }
    out.viewed.push_back({id, tallies[s].viewers, tallies[s].polyp,
                          static_cast<double>(tallies[s].polyp) /
                              static_cast<double>(tallies[s].viewers)});
  }
  return out;
}

ConsensusThreshold::ConsensusThreshold(double percent) : percent_(percent) {
  if (!(percent >= 0.0 && percent <= 100.0)) {
    throw Error(ErrorCode::kInvalidRange, "threshold must be within [0, 100]",
                {{"threshold", std::isnan(percent) ? nlohmann::json(nullptr)
                                                   : nlohmann::json(percent)}});
  }
}

bool meets_threshold(std::size_t polyp_votes, std::size_t viewers,
                     ConsensusThreshold threshold) {
  return static_cast<double>(polyp_votes) * 100.0 >=
         threshold.percent() * static_cast<double>(viewers);
}

std::optional<double> sensitivity(const ConfusionCounts& c) {
  if (c.tp + c.fn == 0) return std::nullopt;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

std::optional<double> specificity(const ConfusionCounts& c) {
  if (c.fp + c.tn == 0) return std::nullopt;
  return static_cast<double>(c.tn) / static_cast<double>(c.fp + c.tn);
}

std::string_view to_string(SegmentLabel label) {
  switch (label) {
    case SegmentLabel::kPolyp: return "polyp";
    case SegmentLabel::kPolypFree: return "polyp_free";
    case SegmentLabel::kUnviewed: return "unviewed";
  }
  return "?";
}

ConsensusReport classify(const StudyDataset& dataset, ConsensusThreshold threshold) {
  detail::StudyIndex index(dataset);
  return classify_tallies(dataset, tally_votes(index), threshold);
}

std::vector<SweepRow> sweep(const StudyDataset& dataset, double step_percent) {
  if (!(step_percent >= 0.001) || !std::isfinite(step_percent)) {
    throw Error(ErrorCode::kInvalidArgument, "step must be a finite value >= 0.001",
                {{"step", std::isfinite(step_percent) ? nlohmann::json(step_percent)
                                                      : nlohmann::json(nullptr)}});
  }
  detail::StudyIndex index(dataset);
  const auto tallies = tally_votes(index);
  std::vector<double> thresholds;
  // Multiply instead of accumulating so 0.1-style steps do not drift.
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * step_percent;
    if (t > 100.0 + 1e-9) break;
    thresholds.push_back(std::min(t, 100.0));
  }
  if (thresholds.back() < 100.0) thresholds.push_back(100.0);

  std::vector<SweepRow> rows;
  rows.reserve(thresholds.size());
  for (double t : thresholds) {
    auto report = classify_tallies(dataset, tallies, ConsensusThreshold(t));
    rows.push_back({t, report.sensitivity, report.specificity, report.n_polyp_labels});
  }
  return rows;
}

std::vector<UserAggregate> user_aggregates(const StudyDataset& dataset) {
  detail::StudyIndex index(dataset);
  std::vector<UserAggregate> out;
  for (std::size_t w = 0; w < dataset.workers.size(); ++w) {
    if (index.by_worker[w].empty()) continue;
    UserAggregate agg;
    agg.worker_id = dataset.workers[w].id;
    for (std::size_t ri : index.by_worker[w]) {
      const auto& r = dataset.responses[ri];
      ++agg.n_responses;
      ++(r.answer == Answer::kPolyp ? agg.n_polyp_answers : agg.n_polyp_free_answers);
      agg.total_task_time_ms += r.response_time_ms;
      const GroundTruth truth = index.truth_of(r);
      if (truth == GroundTruth::kUnknown) continue;
      ++agg.n_truth_labelled;
      switch (statistic_of(r.answer, truth)) {
        case CellElement::kCorrect: ++agg.n_correct; break;
        case CellElement::kFalsePositive: ++agg.n_false_positive; break;
        default: ++agg.n_false_negative; break;
      }
    }
    if (agg.n_truth_labelled > 0) {
      agg.accuracy = static_cast<double>(agg.n_correct) /
                     static_cast<double>(agg.n_truth_labelled);
    }
    out.push_back(std::move(agg));
  }
  std::int64_t max_total = 0;
  for (const auto& a : out) max_total = std::max(max_total, a.total_task_time_ms);
  for (auto& a : out) {
    a.normalized_task_time =
        static_cast<double>(a.total_task_time_ms) / static_cast<double>(max_total);
  }
  return out;
}

std::vector<SegmentAggregate> segment_aggregates(const StudyDataset& dataset) {
  detail::StudyIndex index(dataset);
  std::vector<SegmentAggregate> out;
  for (std::size_t s = 0; s < dataset.segments.size(); ++s) {
    const auto& responses = index.by_segment[s];
    if (responses.empty()) continue;
    const auto& seg = dataset.segments[s];
    SegmentAggregate agg;
    agg.segment_id = seg.id;
    const bool known = seg.ground_truth != GroundTruth::kUnknown;
    if (known) agg.n_correct = agg.n_false_positive = agg.n_false_negative = 0;
    std::int64_t total_ms = 0;
    for (std::size_t ri : responses) {
      const auto& r = dataset.responses[ri];
      ++(r.answer == Answer::kPolyp ? agg.n_polyp_votes : agg.n_polyp_free_votes);
      total_ms += r.response_time_ms;
      if (!known) continue;
      switch (statistic_of(r.answer, seg.ground_truth)) {
        case CellElement::kCorrect: ++*agg.n_correct; break;
        case CellElement::kFalsePositive: ++*agg.n_false_positive; break;
        default: ++*agg.n_false_negative; break;
      }
    }
    agg.mean_response_time_ms =
        static_cast<double>(total_ms) / static_cast<double>(responses.size());
    out.push_back(std::move(agg));
  }
  double max_mean = 0.0;
  for (const auto& a : out) max_mean = std::max(max_mean, a.mean_response_time_ms);
  for (auto& a : out) a.normalized_time = a.mean_response_time_ms / max_mean;
  return out;
}

std::string_view to_string(MatrixMode m) {
  return m == MatrixMode::kResponse ? "response" : "statistics";
}

std::string_view to_string(SortKey k) {
  switch (k) {
    case SortKey::kTime: return "time";
    case SortKey::kPolyps: return "polyps";
    case SortKey::kAccuracy: return "accuracy";
    case SortKey::kFalseNegatives: return "fn";
  }
  return "?";
}

std::string_view to_string(CellElement e) {
  switch (e) {
    case CellElement::kPolyp: return "polyp";
    case CellElement::kPolypFree: return "polyp_free";
    case CellElement::kCorrect: return "correct";
    case CellElement::kFalsePositive: return "false_positive";
    case CellElement::kFalseNegative: return "false_negative";
    case CellElement::kAbsent: return "absent";
  }
  return "?";
}

std::optional<MatrixMode> parse_matrix_mode(std::string_view s) {
  if (s == "response") return MatrixMode::kResponse;
  if (s == "statistics") return MatrixMode::kStatistics;
  return std::nullopt;
}

std::optional<SortKey> parse_sort_key(std::string_view s) {
  if (s == "time") return SortKey::kTime;
  if (s == "polyps") return SortKey::kPolyps;
  if (s == "accuracy") return SortKey::kAccuracy;
  if (s == "fn") return SortKey::kFalseNegatives;
  return std::nullopt;
}

ConsensusMatrix consensus_matrix(const StudyDataset& dataset, MatrixMode mode,
                                 SortKey sort) {
  const bool needs_truth = mode == MatrixMode::kStatistics ||
                           sort == SortKey::kAccuracy ||
                           sort == SortKey::kFalseNegatives;
  if (needs_truth && !dataset.has_ground_truth()) {
    throw Error(ErrorCode::kStatisticsUnavailable,
                "statistics need ground truth for every segment",
                {{"dataset_id", dataset.id()},
                 {"mode", std::string(to_string(mode))},
                 {"sort", std::string(to_string(sort))}});
  }

  detail::StudyIndex index(dataset);
  ConsensusMatrix m;
  m.mode = mode;
  m.sort = sort;

  auto seg_aggs = segment_aggregates(dataset);
  std::size_t next_agg = 0;
  std::vector<std::int64_t> slowest(dataset.segments.size(), 0);
  for (std::size_t s = 0; s < dataset.segments.size(); ++s) {
    const auto& seg = dataset.segments[s];
    MatrixColumn col{seg.id, seg.ordinal, seg.direction, seg.orientation, std::nullopt};
    if (next_agg < seg_aggs.size() && seg_aggs[next_agg].segment_id == seg.id) {
      col.aggregate = std::move(seg_aggs[next_agg++]);
    }
    m.columns.push_back(std::move(col));
    for (std::size_t ri : index.by_segment[s]) {
      slowest[s] = std::max(slowest[s], dataset.responses[ri].response_time_ms);
    }
  }

  for (auto& agg : user_aggregates(dataset)) {
    MatrixRow row;
    const std::size_t w = index.worker_pos.at(agg.worker_id);
    row.cells.reserve(dataset.segments.size());
    for (const auto& seg : dataset.segments) {
      row.cells.push_back({agg.worker_id, seg.id, CellElement::kAbsent, 0.0});
    }
    for (std::size_t ri : index.by_worker[w]) {
      const auto& r = dataset.responses[ri];
      const std::size_t s = index.segment_of(r);
      auto& cell = row.cells[s];
      if (mode == MatrixMode::kResponse) {
        cell.element = r.answer == Answer::kPolyp ? CellElement::kPolyp
                                                  : CellElement::kPolypFree;
      } else {
        cell.element = statistic_of(r.answer, dataset.segments[s].ground_truth);
      }
      cell.relative_time =
          static_cast<double>(r.response_time_ms) / static_cast<double>(slowest[s]);
    }
    row.margin = std::move(agg);
    m.rows.push_back(std::move(row));
  }

  auto key = [sort](const UserAggregate& a) -> double {
    switch (sort) {
      case SortKey::kTime: return static_cast<double>(a.total_task_time_ms);
      case SortKey::kPolyps: return static_cast<double>(a.n_polyp_answers);
      case SortKey::kAccuracy: return a.accuracy.value_or(0.0);
      case SortKey::kFalseNegatives: return static_cast<double>(a.n_false_negative);
    }
    return 0.0;
  };
  std::sort(m.rows.begin(), m.rows.end(), [&](const MatrixRow& a, const MatrixRow& b) {
    const double ka = key(a.margin), kb = key(b.margin);
    if (ka != kb) return ka > kb;
    return a.margin.worker_id < b.margin.worker_id;
  });
  return m;
}

}  // namespace crowdlens
