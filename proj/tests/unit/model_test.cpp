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

#include "crowdlens/model.hpp"
#include "fixtures.hpp"

namespace crowdlens {
namespace {

TEST(Enums, CsvSpellingsRoundTrip) {
  for (auto a : {Answer::kPolyp, Answer::kPolypFree}) EXPECT_EQ(parse_answer(to_string(a)), a);
  for (auto d : {Direction::kAntegrade, Direction::kRetrograde}) {
    EXPECT_EQ(parse_direction(to_string(d)), d);
  }
  for (auto o : {Orientation::kSupine, Orientation::kProne}) {
    EXPECT_EQ(parse_orientation(to_string(o)), o);
  }
  for (auto g : {GroundTruth::kPolyp, GroundTruth::kPolypFree, GroundTruth::kUnknown}) {
    EXPECT_EQ(parse_ground_truth(to_string(g)), g);
  }
  EXPECT_EQ(to_string(Answer::kPolypFree), "POLYP_FREE");
  EXPECT_EQ(to_string(AnnotationTarget::kSegment), "segment");
  EXPECT_FALSE(parse_answer("MAYBE"));
  EXPECT_FALSE(parse_answer("polyp"));
}

TEST(Dates, ParseAndFormat) {
  EXPECT_EQ(parse_date("2024-02-29"), (Date{2024, 2, 29}));
  EXPECT_FALSE(parse_date("2023-02-29"));
  EXPECT_FALSE(parse_date("2024-13-01"));
  EXPECT_FALSE(parse_date("2024-1-01"));
  EXPECT_EQ(format_date(Date{2015, 3, 7}), "2015-03-07");
  EXPECT_LT((Date{2015, 3, 7}), (Date{2015, 4, 1}));
}

TEST(Timestamps, ParseAndFormat) {
  const auto t = parse_timestamp("1970-01-02T00:00:01.250Z");
  ASSERT_TRUE(t);
  EXPECT_EQ(t->millis_since_epoch, 86401250);
  EXPECT_EQ(format_timestamp(*t), "1970-01-02T00:00:01.250Z");
  EXPECT_EQ(format_timestamp(Timestamp{0}), "1970-01-01T00:00:00Z");
  EXPECT_EQ(parse_timestamp("2026-01-01T08:00:00Z")->millis_since_epoch, 1767254400000);
  EXPECT_FALSE(parse_timestamp("2026-01-01 08:00:00"));
  EXPECT_FALSE(parse_timestamp("2026-01-01T25:00:00Z"));
}

TEST(Profiles, FieldAccess) {
  WorkerProfile w{"W1", "25-34", "female", "master", "4", "2", "high", "USA"};
  ASSERT_EQ(profile_field_names().size(), 7u);
  EXPECT_EQ(profile_field(w, "location"), "USA");
  EXPECT_EQ(profile_field(w, "medical_expertise"), "4");
  EXPECT_FALSE(profile_field(w, "age"));
}

AnomalyAnnotation mark(AnnotationTarget t, std::string id, bool cleared = false) {
  AnomalyAnnotation a;
  a.target = t;
  a.target_id = std::move(id);
  a.marked_by = "analyst";
  a.cleared = cleared;
  return a;
}

TEST(Exclusions, LatestAnnotationWins) {
  const std::vector<AnomalyAnnotation> log = {
      mark(AnnotationTarget::kWorker, "W2"), mark(AnnotationTarget::kSegment, "S1"),
      mark(AnnotationTarget::kWorker, "W1"), mark(AnnotationTarget::kWorker, "W2", true),
      mark(AnnotationTarget::kWorker, "W1")};
  const auto ex = active_exclusions(log);
  EXPECT_EQ(ex.workers, std::vector<std::string>{"W1"});
  EXPECT_EQ(ex.segments, std::vector<std::string>{"S1"});
  EXPECT_TRUE(ex.excludes_worker("W1"));
  EXPECT_FALSE(ex.excludes_worker("W2"));
}

TEST(Exclusions, ApplyRemovesRecordsAndResponses) {
  auto ds = testing::make_dataset({"PPN", "NNP"}, "PNN");
  ds.comments.push_back({"W1", "t", "x"});
  ds.comments.push_back({"W2", "t", "y"});
  Exclusions ex{{"W1"}, {"S3"}};
  const auto view = apply_exclusions(ds, ex);
  EXPECT_EQ(view.worker_ids(), std::vector<std::string>{"W2"});
  EXPECT_EQ(view.segment_ids(), (std::vector<std::string>{"S1", "S2"}));
  ASSERT_EQ(view.responses.size(), 2u);
  for (const auto& r : view.responses) {
    EXPECT_EQ(r.worker_id, "W2");
    EXPECT_NE(r.segment_id, "S3");
  }
  ASSERT_EQ(view.comments.size(), 1u);
  EXPECT_EQ(apply_exclusions(ds, Exclusions{}), ds);
}

TEST(Dataset, Lookups) {
  const auto ds = testing::make_dataset({"P.", "NN"}, "P?");
  EXPECT_FALSE(ds.has_ground_truth());
  EXPECT_NE(ds.find_worker("W2"), nullptr);
  EXPECT_EQ(ds.find_worker("W9"), nullptr);
  EXPECT_EQ(ds.find_segment("S2")->ordinal, 2);
}

}  // namespace
}  // namespace crowdlens
