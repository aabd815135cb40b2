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

// Ingestion and serialization of study files.
//
// A study on disk (and on the wire) is a manifest plus four CSV files and
// an append-only annotation log:
//
//   manifest.json    {"id", "created_on", "fov_degrees", "flythrough_speed",
//                     "vocabulary": {field: [category, ...]}}
//   responses.csv    worker_id,segment_id,answer,response_time_ms,
//                    presentation_index,submitted_at
//   workers.csv      worker_id,age_bracket,gender,education_level,
//                    medical_expertise,visualization_expertise,reward_tier,location
//   segments.csv     segment_id,dataset_id,ordinal,direction,orientation,ground_truth
//   comments.csv     worker_id,dataset_id,text
//   annotations.log  one JSON object per line

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "crowdlens/model.hpp"

namespace crowdlens {

inline constexpr int kProtocolSegmentsPerWorker = 20;

struct StudyFiles {
  std::string manifest_json;
  std::string responses_csv;
  std::string workers_csv;
  std::string segments_csv;
  std::string comments_csv;     // may be empty (no comments)
  std::string annotations_log;  // may be empty
};

enum class Severity { kError, kWarning };

struct Diagnostic {
  Severity severity = Severity::kError;
  std::string code;  // ErrorCode name, or a warning code such as "TaskLength"
  std::string file;  // "responses.csv", ...
  std::size_t row = 0;
  std::string message;
  nlohmann::json detail = nlohmann::json::object();

  nlohmann::json to_json() const;
};

struct IngestResult {
  StudyDataset dataset;
  std::vector<Diagnostic> warnings;
};

/// Validates and resolves a study. On any error diagnostic, throws an
/// Error whose code is that of the first error and whose detail holds
/// `{"diagnostics": [...]}` with every error found.
IngestResult ingest_study(const StudyFiles& files);

StudyManifest parse_manifest(std::string_view json_text);
std::string manifest_to_json(const StudyManifest& manifest);

nlohmann::json annotation_to_json(const AnomalyAnnotation& a);
AnomalyAnnotation annotation_from_json(const nlohmann::json& j);

/// Store-format encoding of a validated dataset.
StudyFiles serialize_study(const StudyDataset& dataset);

/// serialize_study followed by ingest_study.
StudyDataset round_trip(const StudyDataset& dataset);

}  // namespace crowdlens
