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

// JSON and CSV encodings of engine results. The CLI and the HTTP service
// both build their bodies here, so the same query yields the same bytes
// from either front end.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "crowdlens/anomaly.hpp"
#include "crowdlens/consensus.hpp"
#include "crowdlens/embedding.hpp"
#include "crowdlens/ingest.hpp"
#include "crowdlens/store.hpp"
#include "crowdlens/views.hpp"

namespace crowdlens {

using nlohmann::json;

json to_json(const ConsensusReport& r);
json to_json(const ConsensusMatrix& m);
json to_json(const UserAggregate& a);
json to_json(const SegmentAggregate& a);
json to_json(const std::vector<SweepRow>& rows);
json to_json(const std::vector<SimilarityHit>& hits);
json to_json(const std::vector<SegmentAmbiguity>& segments);
json to_json(const std::vector<SuspectFlag>& flags);
json to_json(const EmbeddingLayout& layout);
json to_json(const ParallelSetsModel& model);
json to_json(const std::vector<WordCloudEntry>& entries);
json to_json(const std::vector<TimelineBar>& bars);
json to_json(const OverviewSummary& s);
json to_json(const WorkerDetails& d);
json to_json(const std::vector<Diagnostic>& diagnostics);

/// `threshold,sensitivity,specificity,n_polyp_labels`, "NA" when undefined.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
/// `item_id,x,y,lightness,arc_fraction`
std::string layout_to_csv(const EmbeddingLayout& layout);
/// `segment_id,label` followed by nothing else; labels per SegmentLabel.
std::string labels_to_csv(const ConsensusReport& r);

/// Shortest round-trip decimal form (e.g. "0.5", "1", "0.1").
std::string format_number(double v);

/// Response body form of a JSON payload: two-space indentation, trailing
/// newline.
std::string render(const json& j);

/// Strict text-to-number conversions for query parameters and flags.
/// Throw Error(kInvalidArgument) naming `what` on malformed input.
double parse_real(std::string_view text, std::string_view what);
std::uint64_t parse_count(std::string_view text, std::string_view what);
bool parse_switch(std::string_view text, std::string_view what);  // on|off|true|false|1|0

// Endpoint-level payloads shared by the CLI and the service.
namespace payload {

struct ConsensusQuery {
  double threshold = 50.0;
  MatrixMode mode = MatrixMode::kResponse;
  SortKey sort = SortKey::kTime;
  bool exclude = true;
  bool include_matrix = true;
};

json consensus(const StudyDataset& dataset, const ConsensusQuery& q);
json sweep(const StudyDataset& dataset, double step, bool exclude);
json aggregates(const StudyDataset& dataset, bool exclude);
json similar_workers(const StudyDataset& dataset, const std::string& probe, std::size_t k,
                     bool exclude);
json ambiguous_segments(const StudyDataset& dataset, double min_ambiguity, bool exclude);
json anomalies(const StudyDataset& dataset, const SuspectConfig& config, double min_ambiguity,
               bool exclude);
json embedding(const StudyDataset& dataset, const EmbeddingConfig& config, bool exclude);
json parallel_sets(const StudyDataset& dataset, const std::vector<std::string>& axes,
                   bool exclude);
json word_cloud(const StudyDataset& dataset, std::size_t k, bool exclude);
json report(const Store& store, const StudyDataset& dataset, std::size_t k, bool exclude);

/// The dataset with its active anomaly marks applied when `exclude` holds.
StudyDataset view_of(const StudyDataset& dataset, bool exclude);

}  // namespace payload

}  // namespace crowdlens
