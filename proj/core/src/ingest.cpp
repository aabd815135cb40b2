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

#include "crowdlens/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "crowdlens/csv.hpp"
#include "crowdlens/error.hpp"

namespace crowdlens {

namespace {

using nlohmann::json;

const std::vector<std::string> kResponsesHeader = {
    "worker_id", "segment_id", "answer", "response_time_ms", "presentation_index",
    "submitted_at"};
const std::vector<std::string> kWorkersHeader = {
    "worker_id",         "age_bracket",
    "gender",            "education_level",
    "medical_expertise", "visualization_expertise",
    "reward_tier",       "location"};
const std::vector<std::string> kSegmentsHeader = {
    "segment_id", "dataset_id", "ordinal", "direction", "orientation", "ground_truth"};
const std::vector<std::string> kCommentsHeader = {"worker_id", "dataset_id", "text"};

const std::vector<std::string> kExpertiseLevels = {"1", "2", "3", "4", "5",
                                                   std::string(kUnspecified)};

bool is_expertise_field(std::string_view f) {
  return f == "medical_expertise" || f == "visualization_expertise";
}

template <typename Int>
bool parse_integer(std::string_view s, Int& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

class Collector {
 public:
  void error(ErrorCode code, std::string file, std::size_t row, std::string message,
             json detail = json::object()) {
    errors_.push_back(Diagnostic{Severity::kError, std::string(error_code_name(code)),
                                 std::move(file), row, std::move(message),
                                 std::move(detail)});
    if (!first_code_) first_code_ = code;
  }
  void warning(std::string code, std::string file, std::size_t row,
               std::string message, json detail = json::object()) {
    warnings_.push_back(Diagnostic{Severity::kWarning, std::move(code), std::move(file),
                                   row, std::move(message), std::move(detail)});
  }

  void throw_if_errors() const {
    if (errors_.empty()) return;
    json list = json::array();
    for (const auto& d : errors_) list.push_back(d.to_json());
    throw Error(*first_code_,
                fmt_message(errors_.front()) +
                    (errors_.size() > 1
                         ? " (+" + std::to_string(errors_.size() - 1) + " more)"
                         : ""),
                {{"diagnostics", std::move(list)}});
  }

  std::vector<Diagnostic> take_warnings() { return std::move(warnings_); }

 private:
  static std::string fmt_message(const Diagnostic& d) {
    return d.file + " row " + std::to_string(d.row) + ": " + d.message;
  }

  std::vector<Diagnostic> errors_;
  std::vector<Diagnostic> warnings_;
  std::optional<ErrorCode> first_code_;
};

// Returns nullopt (after recording a diagnostic) when the header is wrong.
std::optional<csv::Table> read_table(std::string_view text, const char* file,
                                     const std::vector<std::string>& header,
                                     Collector& diag) {
  csv::Table table;
  try {
    table = csv::parse(text);
  } catch (const Error& e) {
    diag.error(e.code(), file, e.detail().value("row", std::size_t{0}), e.what());
    return std::nullopt;
  }
  if (table.header != header) {
    std::string expected;
    for (const auto& h : header) expected += (expected.empty() ? "" : ",") + h;
    diag.error(ErrorCode::kMalformedRow, file, 0, "header must be: " + expected);
    return std::nullopt;
  }
  return table;
}

bool check_arity(const csv::Row& row, std::size_t n, const char* file,
                 Collector& diag) {
  if (row.fields.size() == n) return true;
  diag.error(ErrorCode::kMalformedRow, file, row.index,
             "expected " + std::to_string(n) + " columns, found " +
                 std::to_string(row.fields.size()));
  return false;
}

Vocabulary complete_vocabulary(const Vocabulary& declared,
                               const std::vector<WorkerProfile>& workers) {
  Vocabulary vocab;
  for (const auto& field : profile_field_names()) {
    std::vector<std::string> cats;
    if (auto it = declared.find(field); it != declared.end()) {
      cats = it->second;
    } else if (is_expertise_field(field)) {
      cats = kExpertiseLevels;
    } else {
      std::set<std::string> seen;
      for (const auto& w : workers) seen.insert(std::string(*profile_field(w, field)));
      cats.assign(seen.begin(), seen.end());
    }
    cats.erase(std::remove(cats.begin(), cats.end(), kUnspecified), cats.end());
    cats.emplace_back(kUnspecified);
    vocab[field] = std::move(cats);
  }
  return vocab;
}

}  // namespace

json Diagnostic::to_json() const {
  return {{"severity", severity == Severity::kError ? "error" : "warning"},
          {"code", code},
          {"file", file},
          {"row", row},
          {"message", message},
          {"detail", detail}};
}

StudyManifest parse_manifest(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidManifest, std::string("manifest: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kInvalidManifest, "manifest must be an object");

  StudyManifest m;
  try {
    m.id = j.at("id").get<std::string>();
    const auto date_text = j.at("created_on").get<std::string>();
    auto date = parse_date(date_text);
    if (!date) {
      throw Error(ErrorCode::kInvalidManifest, "created_on must be YYYY-MM-DD",
                  {{"created_on", date_text}});
    }
    m.created_on = *date;
    m.fov_degrees = j.at("fov_degrees").get<int>();
    m.flythrough_speed = j.at("flythrough_speed").get<int>();
    if (j.contains("vocabulary")) {
      for (const auto& [field, cats] : j.at("vocabulary").items()) {
        if (!profile_field(WorkerProfile{}, field)) {
          throw Error(ErrorCode::kInvalidManifest,
                      "vocabulary names unknown profile field", {{"field", field}});
        }
        m.vocabulary[field] = cats.get<std::vector<std::string>>();
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidManifest, std::string("manifest: ") + e.what());
  }
  if (m.id.empty() || m.id.find_first_of("/\\") != std::string::npos || m.id == "." ||
      m.id == "..") {
    throw Error(ErrorCode::kInvalidManifest, "dataset id must be a non-empty plain name",
                {{"id", m.id}});
  }
  if (m.fov_degrees <= 0) {
    throw Error(ErrorCode::kInvalidManifest, "fov_degrees must be positive");
  }
  if (m.flythrough_speed <= 0) {
    throw Error(ErrorCode::kInvalidManifest, "flythrough_speed must be positive");
  }
  return m;
}

std::string manifest_to_json(const StudyManifest& m) {
  json vocab = json::object();
  for (const auto& [field, cats] : m.vocabulary) vocab[field] = cats;
  json j = {{"id", m.id},
            {"created_on", format_date(m.created_on)},
            {"fov_degrees", m.fov_degrees},
            {"flythrough_speed", m.flythrough_speed},
            {"vocabulary", vocab}};
  return j.dump(2) + "\n";
}

json annotation_to_json(const AnomalyAnnotation& a) {
  json j = {{"target", std::string(to_string(a.target))},
            {"target_id", a.target_id},
            {"marked_by", a.marked_by},
            {"marked_at", format_timestamp(a.marked_at)},
            {"note", a.note}};
  if (a.cleared) j["cleared"] = true;
  return j;
}

AnomalyAnnotation annotation_from_json(const json& j) {
  AnomalyAnnotation a;
  auto target = parse_annotation_target(j.at("target").get<std::string>());
  if (!target) throw Error(ErrorCode::kInvalidArgument, "target must be worker or segment");
  a.target = *target;
  a.target_id = j.at("target_id").get<std::string>();
  a.marked_by = j.value("marked_by", std::string());
  if (j.contains("marked_at")) {
    auto ts = parse_timestamp(j.at("marked_at").get<std::string>());
    if (!ts) throw Error(ErrorCode::kInvalidArgument, "marked_at must be ISO-8601 UTC");
    a.marked_at = *ts;
  }
  a.note = j.value("note", std::string());
  a.cleared = j.value("cleared", false);
  return a;
}

IngestResult ingest_study(const StudyFiles& files) {
  Collector diag;
  StudyDataset ds;
  ds.manifest = parse_manifest(files.manifest_json);
  const std::string& dataset_id = ds.manifest.id;

  // segments.csv
  std::map<std::string, std::size_t, std::less<>> segment_rows;
  if (auto table = read_table(files.segments_csv, "segments.csv", kSegmentsHeader, diag)) {
    std::map<int, std::size_t> ordinal_rows;
    for (const auto& row : table->rows) {
      constexpr const char* kFile = "segments.csv";
      if (!check_arity(row, 6, kFile, diag)) continue;
      const auto& f = row.fields;
      SegmentRecord s;
      s.id = f[0];
      auto dir = parse_direction(f[3]);
      auto orient = parse_orientation(f[4]);
      auto truth = parse_ground_truth(f[5]);
      if (s.id.empty()) {
        diag.error(ErrorCode::kMalformedRow, kFile, row.index, "empty segment_id");
      } else if (f[1] != dataset_id) {
        diag.error(ErrorCode::kMalformedRow, kFile, row.index,
                   "dataset_id does not match manifest",
                   {{"dataset_id", f[1]}, {"expected", dataset_id}});
      } else if (!parse_integer(f[2], s.ordinal)) {
        diag.error(ErrorCode::kMalformedRow, kFile, row.index, "ordinal must be an integer",
                   {{"value", f[2]}});
      } else if (!dir) {
        diag.error(ErrorCode::kMalformedRow, kFile, row.index,
                   "direction must be ANTEGRADE or RETROGRADE", {{"value", f[3]}});
      } else if (!orient) {
        diag.error(ErrorCode::kMalformedRow, kFile, row.index,
                   "orientation must be SUPINE or PRONE", {{"value", f[4]}});
      } else if (!truth) {
        diag.error(ErrorCode::kMalformedRow, kFile, row.index,
                   "ground_truth must be POLYP, POLYP_FREE or UNKNOWN", {{"value", f[5]}});
      } else if (auto it = segment_rows.find(s.id); it != segment_rows.end()) {
        diag.error(ErrorCode::kDuplicateRecord, kFile, row.index, "duplicate segment_id",
                   {{"segment_id", s.id}, {"rows", {it->second, row.index}}});
      } else if (auto oit = ordinal_rows.find(s.ordinal); oit != ordinal_rows.end()) {
        diag.error(ErrorCode::kDuplicateRecord, kFile, row.index, "duplicate ordinal",
                   {{"ordinal", s.ordinal}, {"rows", {oit->second, row.index}}});
      } else {
        s.dataset_id = f[1];
        s.direction = *dir;
        s.orientation = *orient;
        s.ground_truth = *truth;
        segment_rows.emplace(s.id, row.index);
        ordinal_rows.emplace(s.ordinal, row.index);
        ds.segments.push_back(std::move(s));
      }
    }
    if (table->rows.empty()) {
      diag.error(ErrorCode::kMalformedRow, "segments.csv", 0,
                 "a dataset needs at least one segment");
    }
  }
  std::sort(ds.segments.begin(), ds.segments.end(),
            [](const SegmentRecord& a, const SegmentRecord& b) {
              return a.ordinal < b.ordinal;
            });

  // workers.csv
  std::map<std::string, std::size_t, std::less<>> worker_rows;
  if (auto table = read_table(files.workers_csv, "workers.csv", kWorkersHeader, diag)) {
    constexpr const char* kFile = "workers.csv";
    for (const auto& row : table->rows) {
      if (!check_arity(row, 8, kFile, diag)) continue;
      std::vector<std::string> f = row.fields;
      for (std::size_t i = 1; i < f.size(); ++i) {
        if (f[i].empty()) f[i] = kUnspecified;
      }
      WorkerProfile w{f[0], f[1], f[2], f[3], f[4], f[5], f[6], f[7]};
      std::optional<std::string> problem;
      json detail = json::object();
      for (const auto& field : profile_field_names()) {
        const std::string value(*profile_field(w, field));
        const auto& declared = ds.manifest.vocabulary;
        if (auto it = declared.find(field); it != declared.end()) {
          const auto& cats = it->second;
          if (value != kUnspecified &&
              std::find(cats.begin(), cats.end(), value) == cats.end()) {
            problem = field + " value not in declared vocabulary";
            detail = {{"field", field}, {"value", value}};
            break;
          }
        } else if (is_expertise_field(field) &&
                   std::find(kExpertiseLevels.begin(), kExpertiseLevels.end(), value) ==
                       kExpertiseLevels.end()) {
          problem = field + " must be an integer 1-5";
          detail = {{"field", field}, {"value", value}};
          break;
        }
      }
      if (w.id.empty()) {
        diag.error(ErrorCode::kMalformedRow, kFile, row.index, "empty worker_id");
      } else if (problem) {
        diag.error(ErrorCode::kMalformedRow, kFile, row.index, *problem, detail);
      } else if (auto it = worker_rows.find(w.id); it != worker_rows.end()) {
        diag.error(ErrorCode::kDuplicateRecord, kFile, row.index, "duplicate worker_id",
                   {{"worker_id", w.id}, {"rows", {it->second, row.index}}});
      } else {
        worker_rows.emplace(w.id, row.index);
        ds.workers.push_back(std::move(w));
      }
    }
  }

  // responses.csv
  std::map<std::string, std::size_t, std::less<>> responses_per_worker;
  if (auto table =
          read_table(files.responses_csv, "responses.csv", kResponsesHeader, diag)) {
    constexpr const char* kFile = "responses.csv";
    std::map<std::pair<std::string, std::string>, std::size_t> pair_rows;
    for (const auto& row : table->rows) {
      if (!check_arity(row, 6, kFile, diag)) continue;
      const auto& f = row.fields;
      CrowdResponse r;
      r.worker_id = f[0];
      r.segment_id = f[1];
      auto answer = parse_answer(f[2]);
      auto submitted = parse_timestamp(f[5]);
      if (!answer) {
        diag.error(ErrorCode::kMalformedRow, kFile, row.index,
                   "answer must be POLYP or POLYP_FREE", {{"value", f[2]}});
      } else if (!parse_integer(f[3], r.response_time_ms) || r.response_time_ms <= 0) {
        diag.error(ErrorCode::kMalformedRow, kFile, row.index,
                   "response_time_ms must be a positive integer", {{"value", f[3]}});
      } else if (!parse_integer(f[4], r.presentation_index) || r.presentation_index < 1) {
        diag.error(ErrorCode::kMalformedRow, kFile, row.index,
                   "presentation_index must be an integer >= 1", {{"value", f[4]}});
      } else if (!submitted) {
        diag.error(ErrorCode::kMalformedRow, kFile, row.index,
                   "submitted_at must be ISO-8601 UTC", {{"value", f[5]}});
      } else if (!worker_rows.contains(r.worker_id)) {
        diag.error(ErrorCode::kDanglingReference, kFile, row.index, "unknown worker_id",
                   {{"worker_id", r.worker_id}});
      } else if (!segment_rows.contains(r.segment_id)) {
        diag.error(ErrorCode::kDanglingReference, kFile, row.index, "unknown segment_id",
                   {{"segment_id", r.segment_id}});
      } else if (auto it = pair_rows.find({r.worker_id, r.segment_id});
                 it != pair_rows.end()) {
        diag.error(ErrorCode::kDuplicateResponse, kFile, row.index,
                   "duplicate response for worker and segment",
                   {{"worker_id", r.worker_id},
                    {"segment_id", r.segment_id},
                    {"rows", {it->second, row.index}}});
      } else {
        r.answer = *answer;
        r.submitted_at = *submitted;
        pair_rows.emplace(std::pair{r.worker_id, r.segment_id}, row.index);
        ++responses_per_worker[r.worker_id];
        ds.responses.push_back(std::move(r));
      }
    }
  }

  // comments.csv (optional)
  if (!files.comments_csv.empty()) {
    if (auto table = read_table(files.comments_csv, "comments.csv", kCommentsHeader, diag)) {
      constexpr const char* kFile = "comments.csv";
      std::map<std::string, std::size_t, std::less<>> comment_rows;
      for (const auto& row : table->rows) {
        if (!check_arity(row, 3, kFile, diag)) continue;
        const auto& f = row.fields;
        if (f[1] != dataset_id) {
          diag.error(ErrorCode::kMalformedRow, kFile, row.index,
                     "dataset_id does not match manifest", {{"dataset_id", f[1]}});
        } else if (!worker_rows.contains(f[0])) {
          diag.error(ErrorCode::kDanglingReference, kFile, row.index, "unknown worker_id",
                     {{"worker_id", f[0]}});
        } else if (auto it = comment_rows.find(f[0]); it != comment_rows.end()) {
          diag.error(ErrorCode::kDuplicateRecord, kFile, row.index,
                     "at most one comment per worker",
                     {{"worker_id", f[0]}, {"rows", {it->second, row.index}}});
        } else {
          comment_rows.emplace(f[0], row.index);
          ds.comments.push_back(WorkerComment{f[0], f[1], f[2]});
        }
      }
    }
  }

  // annotations.log
  {
    std::istringstream lines(files.annotations_log);
    std::string line;
    std::size_t n = 0;
    while (std::getline(lines, line)) {
      ++n;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        ds.annotations.push_back(annotation_from_json(json::parse(line)));
      } catch (const std::exception& e) {
        diag.error(ErrorCode::kMalformedRow, "annotations.log", n, e.what());
      }
    }
  }

  diag.throw_if_errors();

  for (const auto& w : ds.workers) {
    auto it = responses_per_worker.find(w.id);
    const std::size_t n = it == responses_per_worker.end() ? 0 : it->second;
    if (n != kProtocolSegmentsPerWorker) {
      diag.warning("TaskLength", "workers.csv", worker_rows[w.id],
                   "worker answered " + std::to_string(n) + " segments, protocol expects " +
                       std::to_string(kProtocolSegmentsPerWorker),
                   {{"worker_id", w.id}, {"responses", n}});
    }
  }

  ds.manifest.vocabulary = complete_vocabulary(ds.manifest.vocabulary, ds.workers);
  return IngestResult{std::move(ds), diag.take_warnings()};
}

StudyFiles serialize_study(const StudyDataset& ds) {
  StudyFiles files;
  files.manifest_json = manifest_to_json(ds.manifest);

  csv::Writer segments(kSegmentsHeader);
  for (const auto& s : ds.segments) {
    segments.row({s.id, s.dataset_id, std::to_string(s.ordinal),
                  std::string(to_string(s.direction)),
                  std::string(to_string(s.orientation)),
                  std::string(to_string(s.ground_truth))});
  }
  files.segments_csv = segments.str();

  csv::Writer workers(kWorkersHeader);
  for (const auto& w : ds.workers) {
    workers.row({w.id, w.age_bracket, w.gender, w.education_level, w.medical_expertise,
                 w.visualization_expertise, w.reward_tier, w.location});
  }
  files.workers_csv = workers.str();

  csv::Writer responses(kResponsesHeader);
  for (const auto& r : ds.responses) {
    responses.row({r.worker_id, r.segment_id, std::string(to_string(r.answer)),
                   std::to_string(r.response_time_ms), std::to_string(r.presentation_index),
                   format_timestamp(r.submitted_at)});
  }
  files.responses_csv = responses.str();

  csv::Writer comments(kCommentsHeader);
  for (const auto& c : ds.comments) comments.row({c.worker_id, c.dataset_id, c.text});
  files.comments_csv = comments.str();

  for (const auto& a : ds.annotations) {
    files.annotations_log += annotation_to_json(a).dump() + "\n";
  }
  return files;
}

StudyDataset round_trip(const StudyDataset& dataset) {
  return ingest_study(serialize_study(dataset)).dataset;
}

}  // namespace crowdlens
