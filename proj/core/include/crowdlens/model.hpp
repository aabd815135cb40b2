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

// Domain records for crowd studies. All values are plain immutable data
// once ingested; the store hands out shared snapshots of whole datasets.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace crowdlens {

enum class Answer { kPolyp, kPolypFree };
enum class Direction { kAntegrade, kRetrograde };
enum class Orientation { kSupine, kProne };
enum class GroundTruth { kPolyp, kPolypFree, kUnknown };
enum class AnnotationTarget { kWorker, kSegment };

// CSV spellings: POLYP, POLYP_FREE, ANTEGRADE, ...
std::string_view to_string(Answer v);
std::string_view to_string(Direction v);
std::string_view to_string(Orientation v);
std::string_view to_string(GroundTruth v);
std::string_view to_string(AnnotationTarget v);  // lowercase: worker, segment

std::optional<Answer> parse_answer(std::string_view s);
std::optional<Direction> parse_direction(std::string_view s);
std::optional<Orientation> parse_orientation(std::string_view s);
std::optional<GroundTruth> parse_ground_truth(std::string_view s);
std::optional<AnnotationTarget> parse_annotation_target(std::string_view s);

/// Proleptic Gregorian calendar date.
struct Date {
  int year = 1970;
  unsigned month = 1;
  unsigned day = 1;

  friend auto operator<=>(const Date&, const Date&) = default;
};

/// `YYYY-MM-DD`; rejects out-of-range months/days.
std::optional<Date> parse_date(std::string_view s);
std::string format_date(const Date& d);

/// UTC instant with millisecond resolution.
struct Timestamp {
  std::int64_t millis_since_epoch = 0;

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

/// ISO-8601 UTC, `YYYY-MM-DDTHH:MM:SS[.fff]Z`.
std::optional<Timestamp> parse_timestamp(std::string_view s);
std::string format_timestamp(const Timestamp& t);
Timestamp now_utc();

inline constexpr std::string_view kUnspecified = "unspecified";

struct SegmentRecord {
  std::string id;
  std::string dataset_id;
  int ordinal = 0;
  Direction direction = Direction::kAntegrade;
  Orientation orientation = Orientation::kSupine;
  GroundTruth ground_truth = GroundTruth::kUnknown;

  friend bool operator==(const SegmentRecord&, const SegmentRecord&) = default;
};

/// Categorical worker profile. Empty CSV cells are stored as
/// `kUnspecified`; the expertise fields hold "1".."5" or `kUnspecified`.
struct WorkerProfile {
  std::string id;
  std::string age_bracket;
  std::string gender;
  std::string education_level;
  std::string medical_expertise;
  std::string visualization_expertise;
  std::string reward_tier;
  std::string location;

  friend bool operator==(const WorkerProfile&, const WorkerProfile&) = default;
};

/// Names of the categorical profile fields, in CSV column order.
const std::vector<std::string>& profile_field_names();

/// Value of a profile field by name; nullopt for unknown names.
std::optional<std::string_view> profile_field(const WorkerProfile& w,
                                              std::string_view field);

struct CrowdResponse {
  std::string worker_id;
  std::string segment_id;
  Answer answer = Answer::kPolypFree;
  std::int64_t response_time_ms = 0;
  int presentation_index = 1;
  Timestamp submitted_at;

  friend bool operator==(const CrowdResponse&, const CrowdResponse&) = default;
};

struct WorkerComment {
  std::string worker_id;
  std::string dataset_id;
  std::string text;

  friend bool operator==(const WorkerComment&, const WorkerComment&) = default;
};

struct AnomalyAnnotation {
  AnnotationTarget target = AnnotationTarget::kWorker;
  std::string target_id;
  std::string marked_by;
  Timestamp marked_at;
  std::string note;
  // An annotation with `cleared` set retracts an earlier mark.
  bool cleared = false;

  friend bool operator==(const AnomalyAnnotation&, const AnomalyAnnotation&) = default;
};

/// Per-field category lists, in declaration order. Every list ends with
/// `kUnspecified`.
using Vocabulary = std::map<std::string, std::vector<std::string>, std::less<>>;

struct StudyManifest {
  std::string id;
  Date created_on;
  int fov_degrees = 0;
  int flythrough_speed = 0;
  // Declared categories per profile field; fields left out are inferred
  // from the workers file at ingestion.
  Vocabulary vocabulary;

  friend bool operator==(const StudyManifest&, const StudyManifest&) = default;
};

/// A fully resolved study: header, records, and the annotation log.
/// Segments are held in canonical ordinal order; responses in file order.
struct StudyDataset {
  StudyManifest manifest;
  std::vector<SegmentRecord> segments;
  std::vector<WorkerProfile> workers;
  std::vector<CrowdResponse> responses;
  std::vector<WorkerComment> comments;
  std::vector<AnomalyAnnotation> annotations;

  const std::string& id() const { return manifest.id; }
  std::vector<std::string> segment_ids() const;
  std::vector<std::string> worker_ids() const;
  bool has_ground_truth() const;  // every segment labelled
  const WorkerProfile* find_worker(std::string_view id) const;
  const SegmentRecord* find_segment(std::string_view id) const;

  friend bool operator==(const StudyDataset&, const StudyDataset&) = default;
};

/// Targets currently marked anomalous: latest annotation per target wins.
struct Exclusions {
  std::vector<std::string> workers;   // sorted
  std::vector<std::string> segments;  // sorted

  bool empty() const { return workers.empty() && segments.empty(); }
  bool excludes_worker(std::string_view id) const;
  bool excludes_segment(std::string_view id) const;
};

Exclusions active_exclusions(const std::vector<AnomalyAnnotation>& log);

/// Copy of `dataset` with excluded workers (profile, responses, comments)
/// and excluded segments (record and responses on it) removed.
StudyDataset apply_exclusions(const StudyDataset& dataset, const Exclusions& ex);

}  // namespace crowdlens
