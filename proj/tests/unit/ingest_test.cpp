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

#include <gtest/gtest.h>

#include "crowdlens/error.hpp"
#include "crowdlens/ingest.hpp"
#include "crowdlens/simulator.hpp"

namespace crowdlens {
namespace {

StudyFiles small_study() {
  StudyFiles f;
  f.manifest_json =
      R"({"id":"d1","created_on":"2015-06-01","fov_degrees":120,"flythrough_speed":30})";
  f.workers_csv =
      "worker_id,age_bracket,gender,education_level,medical_expertise,visualization_expertise,"
      "reward_tier,location\n"
      "W1,25-34,female,master,4,2,high,USA\n"
      "W2,,male,bachelor,1,5,low,India\n";
  f.segments_csv =
      "segment_id,dataset_id,ordinal,direction,orientation,ground_truth\n"
      "S1,d1,1,ANTEGRADE,SUPINE,POLYP\n"
      "S2,d1,2,RETROGRADE,PRONE,POLYP_FREE\n";
  f.responses_csv =
      "worker_id,segment_id,answer,response_time_ms,presentation_index,submitted_at\n"
      "W1,S1,POLYP,2000,1,2015-06-01T10:00:00Z\n"
      "W1,S2,POLYP_FREE,3000,2,2015-06-01T10:00:03Z\n"
      "W2,S1,POLYP,2500,1,2015-06-01T11:00:00.500Z\n";
  f.comments_csv = "worker_id,dataset_id,text\nW1,d1,\"too fast, honestly\"\n";
  return f;
}

Error ingest_error(const StudyFiles& f) {
  try {
    ingest_study(f);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "ingest succeeded";
  return Error(ErrorCode::kIoError, "none");
}

TEST(Ingest, MinimalStudy) {
  const auto result = ingest_study(small_study());
  const auto& ds = result.dataset;
  EXPECT_EQ(ds.id(), "d1");
  EXPECT_EQ(ds.responses.size(), 3u);
  EXPECT_EQ(ds.workers.size(), 2u);
  EXPECT_EQ(ds.workers[1].age_bracket, "unspecified");
  EXPECT_EQ(ds.responses[2].submitted_at.millis_since_epoch % 1000, 500);
  ASSERT_EQ(ds.comments.size(), 1u);
  EXPECT_EQ(ds.comments[0].text, "too fast, honestly");
  EXPECT_TRUE(ds.has_ground_truth());
  // Every vocabulary list ends with the explicit missing-value category.
  for (const auto& f : profile_field_names()) {
    ASSERT_TRUE(ds.manifest.vocabulary.contains(f)) << f;
    EXPECT_EQ(ds.manifest.vocabulary.at(f).back(), "unspecified");
  }
  EXPECT_EQ(ds.manifest.vocabulary.at("medical_expertise"),
            (std::vector<std::string>{"1", "2", "3", "4", "5", "unspecified"}));
  // Two workers answered fewer than twenty segments.
  ASSERT_EQ(result.warnings.size(), 2u);
  EXPECT_EQ(result.warnings[0].code, "TaskLength");
  EXPECT_EQ(result.warnings[0].severity, Severity::kWarning);
}

TEST(Ingest, EnumViolationNamesRow) {
  auto f = small_study();
  f.responses_csv += "W2,S2,MAYBE,1000,2,2015-06-01T11:00:02Z\n";
  const Error e = ingest_error(f);
  EXPECT_EQ(e.code(), ErrorCode::kMalformedRow);
  const auto& d = e.detail().at("diagnostics");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0]["file"], "responses.csv");
  EXPECT_EQ(d[0]["row"], 4);
}

TEST(Ingest, DuplicateResponseNamesBothRows) {
  auto f = small_study();
  f.responses_csv += "W1,S1,POLYP_FREE,900,3,2015-06-01T10:00:09Z\n";
  const Error e = ingest_error(f);
  EXPECT_EQ(e.code(), ErrorCode::kDuplicateResponse);
  const auto& d = e.detail().at("diagnostics");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0]["detail"]["rows"], nlohmann::json::array({1, 4}));
}

TEST(Ingest, DanglingReferences) {
  auto f = small_study();
  f.responses_csv += "W9,S1,POLYP,900,1,2015-06-01T10:00:09Z\nW2,S9,POLYP,900,2,2015-06-01T10:00:09Z\n";
  const Error e = ingest_error(f);
  EXPECT_EQ(e.code(), ErrorCode::kDanglingReference);
  EXPECT_EQ(e.detail().at("diagnostics").size(), 2u);
}

TEST(Ingest, EachBadRowYieldsExactlyOneDiagnostic) {
  auto f = small_study();
  f.responses_csv +=
      "W1,S1\n"                                        // arity
      "W2,S2,POLYP,-5,2,2015-06-01T10:00:09Z\n"        // time
      "W2,S2,POLYP,5,0,2015-06-01T10:00:09Z\n"         // presentation index
      "W2,S2,POLYP,5,2,yesterday\n";                   // timestamp
  f.segments_csv += "S3,d1,3,SIDEWAYS,SUPINE,POLYP\n";
  f.workers_csv += "W3,25-34,female,master,7,2,high,USA\n";
  const Error e = ingest_error(f);
  const auto& d = e.detail().at("diagnostics");
  EXPECT_EQ(d.size(), 6u);
  for (const auto& x : d) EXPECT_EQ(x["code"], "MalformedRow") << x.dump();
}

TEST(Ingest, DuplicateSegmentsAndOrdinals) {
  auto f = small_study();
  f.segments_csv += "S1,d1,3,ANTEGRADE,SUPINE,POLYP\nS4,d1,2,ANTEGRADE,SUPINE,POLYP\n";
  const Error e = ingest_error(f);
  EXPECT_EQ(e.code(), ErrorCode::kDuplicateRecord);
  EXPECT_EQ(e.detail().at("diagnostics").size(), 2u);
}

TEST(Ingest, ManifestValidation) {
  auto f = small_study();
  f.manifest_json = R"({"id":"d1","created_on":"2015-06-01","fov_degrees":0,"flythrough_speed":30})";
  EXPECT_EQ(ingest_error(f).code(), ErrorCode::kInvalidManifest);
  f.manifest_json = R"({"id":"../x","created_on":"2015-06-01","fov_degrees":1,"flythrough_speed":30})";
  EXPECT_EQ(ingest_error(f).code(), ErrorCode::kInvalidManifest);
  f.manifest_json = "not json";
  EXPECT_EQ(ingest_error(f).code(), ErrorCode::kInvalidManifest);
}

TEST(Ingest, DeclaredVocabularyIsEnforcedAndOrdered) {
  auto f = small_study();
  f.manifest_json =
      R"({"id":"d1","created_on":"2015-06-01","fov_degrees":120,"flythrough_speed":30,
          "vocabulary":{"location":["USA","India","UK"]}})";
  const auto ds = ingest_study(f).dataset;
  EXPECT_EQ(ds.manifest.vocabulary.at("location"),
            (std::vector<std::string>{"USA", "India", "UK", "unspecified"}));
  f.workers_csv += "W3,25-34,female,master,4,2,high,Mars\n";
  EXPECT_EQ(ingest_error(f).code(), ErrorCode::kMalformedRow);
}

TEST(Ingest, HeaderMismatchIsMalformed) {
  auto f = small_study();
  f.segments_csv = "id,dataset,ordinal,direction,orientation,ground_truth\n";
  EXPECT_EQ(ingest_error(f).code(), ErrorCode::kMalformedRow);
}

TEST(RoundTrip, EmptyResponseDataset) {
  auto f = small_study();
  f.responses_csv = "worker_id,segment_id,answer,response_time_ms,presentation_index,submitted_at\n";
  f.comments_csv.clear();
  const auto ds = ingest_study(f).dataset;
  EXPECT_TRUE(ds.responses.empty());
  EXPECT_EQ(round_trip(ds), ds);
}

TEST(RoundTrip, LargeSyntheticDataset) {
  SimulationSpec spec;
  spec.n_segments = 136;
  spec.workers = {{WorkerModel{ReliableWorker{0.8}}, 30}, {WorkerModel{RandomClicker{}}, 4}};
  spec.views_per_segment = 5;
  spec.seed = 11;
  const auto ds = simulate(spec);
  const auto back = round_trip(ds);
  EXPECT_EQ(back.manifest, ds.manifest);
  EXPECT_EQ(back.segments, ds.segments);
  EXPECT_EQ(back.workers, ds.workers);
  EXPECT_EQ(back.responses, ds.responses);
  EXPECT_EQ(back.comments, ds.comments);
  EXPECT_EQ(back, ds);
}

TEST(RoundTrip, AnnotationOrderPreserved) {
  auto ds = ingest_study(small_study()).dataset;
  for (int i = 0; i < 5; ++i) {
    AnomalyAnnotation a;
    a.target = i % 2 ? AnnotationTarget::kSegment : AnnotationTarget::kWorker;
    a.target_id = i % 2 ? "S1" : "W2";
    a.marked_by = "tech";
    a.marked_at = Timestamp{1433152800000 + i};
    a.note = "note " + std::to_string(i);
    a.cleared = i == 4;
    ds.annotations.push_back(a);
  }
  EXPECT_EQ(round_trip(ds).annotations, ds.annotations);
}

TEST(RoundTrip, RandomValidStores) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    SimulationSpec spec;
    spec.dataset_id = "fuzz" + std::to_string(seed);
    spec.n_segments = 5 + seed % 17;
    spec.polyp_fraction = static_cast<double>(seed % 5) / 4.0;
    spec.workers = {{WorkerModel{ReliableWorker{0.7}}, 2 + seed % 5},
                    {WorkerModel{BiasedWorker{0.3}}, 1 + seed % 3}};
    spec.views_per_segment = 1 + seed % 3;
    spec.seed = seed;
    spec.with_comments = seed % 2 == 0;
    const auto ds = simulate(spec);
    EXPECT_EQ(round_trip(ds), ds) << "seed " << seed;
  }
}

TEST(Annotations, JsonRoundTrip) {
  AnomalyAnnotation a;
  a.target = AnnotationTarget::kSegment;
  a.target_id = "S7";
  a.marked_by = "tech";
  a.marked_at = *parse_timestamp("2015-06-02T09:30:00Z");
  a.note = "blurry";
  EXPECT_EQ(annotation_from_json(annotation_to_json(a)), a);
  EXPECT_THROW(annotation_from_json(nlohmann::json{{"target", "video"}}), Error);
}

}  // namespace
}  // namespace crowdlens
