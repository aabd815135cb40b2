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

#include "crowdlens/codec.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "crowdlens/csv.hpp"
#include "crowdlens/error.hpp"

namespace crowdlens {

namespace {

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string opt_csv(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string("NA");
}

}  // namespace

std::string format_number(double v) { return fmt::format("{}", v); }

std::string render(const json& j) { return j.dump(2) + "\n"; }

double parse_real(std::string_view text, std::string_view what) {
  const std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("{} must be a number, got '{}'", what, s),
                {{"parameter", std::string(what)}, {"value", s}});
  }
  return v;
}

std::uint64_t parse_count(std::string_view text, std::string_view what) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("{} must be a non-negative integer, got '{}'", what, text),
                {{"parameter", std::string(what)}, {"value", std::string(text)}});
  }
  return v;
}

bool parse_switch(std::string_view text, std::string_view what) {
  if (text == "on" || text == "true" || text == "1") return true;
  if (text == "off" || text == "false" || text == "0") return false;
  throw Error(ErrorCode::kInvalidArgument, fmt::format("{} must be on or off, got '{}'", what, text),
              {{"parameter", std::string(what)}, {"value", std::string(text)}});
}

json to_json(const ConsensusReport& r) {
  json labels = json::array();
  for (const auto& l : r.labels) {
    labels.push_back({{"segment_id", l.segment_id}, {"label", std::string(to_string(l.label))}});
  }
  return {{"threshold", r.threshold.percent()},
          {"sensitivity", opt(r.sensitivity)},
          {"specificity", opt(r.specificity)},
          {"confusion",
           {{"tp", r.confusion.tp}, {"fp", r.confusion.fp}, {"tn", r.confusion.tn},
            {"fn", r.confusion.fn}}},
          {"n_polyp_labels", r.n_polyp_labels},
          {"labels", std::move(labels)}};
}

json to_json(const UserAggregate& a) {
  return {{"worker_id", a.worker_id},
          {"n_responses", a.n_responses},
          {"n_polyp_answers", a.n_polyp_answers},
          {"n_polyp_free_answers", a.n_polyp_free_answers},
          {"n_truth_labelled", a.n_truth_labelled},
          {"n_correct", a.n_correct},
          {"n_false_positive", a.n_false_positive},
          {"n_false_negative", a.n_false_negative},
          {"accuracy", opt(a.accuracy)},
          {"total_task_time_ms", a.total_task_time_ms},
          {"normalized_task_time", a.normalized_task_time}};
}

json to_json(const SegmentAggregate& a) {
  return {{"segment_id", a.segment_id},
          {"n_polyp_votes", a.n_polyp_votes},
          {"n_polyp_free_votes", a.n_polyp_free_votes},
          {"n_correct", opt(a.n_correct)},
          {"n_false_positive", opt(a.n_false_positive)},
          {"n_false_negative", opt(a.n_false_negative)},
          {"mean_response_time_ms", a.mean_response_time_ms},
          {"normalized_time", a.normalized_time}};
}

json to_json(const ConsensusMatrix& m) {
  json columns = json::array();
  for (const auto& c : m.columns) {
    columns.push_back({{"segment_id", c.segment_id},
                       {"ordinal", c.ordinal},
                       {"direction", std::string(to_string(c.direction))},
                       {"orientation", std::string(to_string(c.orientation))},
                       {"aggregate", c.aggregate ? to_json(*c.aggregate) : json(nullptr)}});
  }
  json rows = json::array();
  for (const auto& r : m.rows) {
    json cells = json::array();
    for (const auto& c : r.cells) {
      cells.push_back({{"element", std::string(to_string(c.element))},
                       {"relative_time", c.relative_time}});
    }
    rows.push_back({{"worker_id", r.margin.worker_id},
                    {"margin", to_json(r.margin)},
                    {"cells", std::move(cells)}});
  }
  return {{"mode", std::string(to_string(m.mode))},
          {"sort", std::string(to_string(m.sort))},
          {"columns", std::move(columns)},
          {"rows", std::move(rows)}};
}

json to_json(const std::vector<SweepRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"threshold", r.threshold},
                   {"sensitivity", opt(r.sensitivity)},
                   {"specificity", opt(r.specificity)},
                   {"n_polyp_labels", r.n_polyp_labels}});
  }
  return out;
}

json to_json(const std::vector<SimilarityHit>& hits) {
  json out = json::array();
  for (const auto& h : hits) {
    out.push_back({{"worker_id", h.worker_id}, {"score", h.score}, {"exact_match", h.exact_match}});
  }
  return out;
}

json to_json(const std::vector<SegmentAmbiguity>& segments) {
  json out = json::array();
  for (const auto& s : segments) {
    out.push_back({{"segment_id", s.segment_id},
                   {"n_viewers", s.n_viewers},
                   {"n_polyp_votes", s.n_polyp_votes},
                   {"ambiguity", s.ambiguity}});
  }
  return out;
}

json to_json(const std::vector<SuspectFlag>& flags) {
  json out = json::array();
  for (const auto& f : flags) {
    json reasons = json::array();
    for (auto r : f.reasons) reasons.push_back(std::string(to_string(r)));
    out.push_back({{"worker_id", f.worker_id},
                   {"reasons", std::move(reasons)},
                   {"total_task_time_ms", f.total_task_time_ms},
                   {"floor_ms", f.floor_ms}});
  }
  return out;
}

json to_json(const EmbeddingLayout& layout) {
  json items = json::array();
  for (const auto& it : layout.items) {
    items.push_back({{"item_id", it.id},
                     {"x", it.position.x},
                     {"y", it.position.y},
                     {"lightness", it.lightness},
                     {"arc_fraction", it.arc_fraction}});
  }
  json weights = json::object();
  for (std::size_t i = 0; i < layout.feature_names.size(); ++i) {
    weights[layout.feature_names[i]] = layout.weights[i];
  }
  return {{"method", std::string(to_string(layout.method))},
          {"items_kind", std::string(to_string(layout.items_kind))},
          {"features", layout.feature_names},
          {"weights", std::move(weights)},
          {"radius", layout.radius},
          {"residual_overlaps", layout.residual_overlaps},
          {"overlap_converged", layout.overlap_converged},
          {"perplexity", opt(layout.perplexity)},
          {"entropy_unreached", layout.entropy_unreached},
          {"items", std::move(items)}};
}

namespace {

json node_json(const ParallelSetsNode& n) {
  json children = json::array();
  for (const auto& c : n.children) children.push_back(node_json(c));
  return {{"category", n.category}, {"count", n.count}, {"children", std::move(children)}};
}

}  // namespace

json to_json(const ParallelSetsModel& model) {
  json tree = json::array();
  for (const auto& n : model.tree) tree.push_back(node_json(n));
  json ribbons = json::array();
  for (std::size_t k = 0; k < model.ribbons.size(); ++k) {
    json level = json::array();
    for (const auto& r : model.ribbons[k]) {
      level.push_back({{"from", r.from}, {"to", r.to}, {"count", r.count}});
    }
    ribbons.push_back({{"from_axis", model.axis_order[k]},
                       {"to_axis", model.axis_order[k + 1]},
                       {"ribbons", std::move(level)}});
  }
  json marginals = json::array();
  for (std::size_t k = 0; k < model.marginals.size(); ++k) {
    json hist = json::array();
    for (const auto& [cat, n] : model.marginals[k]) hist.push_back({{"category", cat}, {"count", n}});
    marginals.push_back({{"axis", model.axis_order[k]}, {"categories", std::move(hist)}});
  }
  return {{"axis_order", model.axis_order},
          {"root_count", model.root_count},
          {"tree", std::move(tree)},
          {"ribbons", std::move(ribbons)},
          {"marginals", std::move(marginals)}};
}

json to_json(const std::vector<WordCloudEntry>& entries) {
  json out = json::array();
  for (const auto& e : entries) out.push_back({{"token", e.token}, {"count", e.count}});
  return out;
}

json to_json(const std::vector<TimelineBar>& bars) {
  json out = json::array();
  for (const auto& b : bars) {
    out.push_back({{"dataset_id", b.dataset_id},
                   {"date", format_date(b.date)},
                   {"n_workers", b.n_workers},
                   {"mean_accuracy", opt(b.mean_accuracy)},
                   {"fov_degrees", b.fov_degrees},
                   {"flythrough_speed", b.flythrough_speed}});
  }
  return out;
}

json to_json(const OverviewSummary& s) {
  const auto& u = s.user_means;
  const auto& g = s.segment_means;
  json accuracy = json::array();
  for (const auto& [id, acc] : s.worker_accuracy) {
    accuracy.push_back({{"worker_id", id}, {"accuracy", opt(acc)}});
  }
  return {{"dataset_id", s.dataset_id},
          {"n_workers", s.n_workers},
          {"n_segments", s.n_segments},
          {"n_responses", s.n_responses},
          {"user_means",
           {{"n_polyp_answers", u.n_polyp_answers},
            {"n_polyp_free_answers", u.n_polyp_free_answers},
            {"n_correct", opt(u.n_correct)},
            {"n_false_positive", opt(u.n_false_positive)},
            {"n_false_negative", opt(u.n_false_negative)},
            {"accuracy", opt(u.accuracy)},
            {"total_task_time_ms", u.total_task_time_ms},
            {"normalized_task_time", u.normalized_task_time}}},
          {"segment_means",
           {{"n_polyp_votes", g.n_polyp_votes},
            {"n_polyp_free_votes", g.n_polyp_free_votes},
            {"n_correct", opt(g.n_correct)},
            {"n_false_positive", opt(g.n_false_positive)},
            {"n_false_negative", opt(g.n_false_negative)},
            {"mean_response_time_ms", g.mean_response_time_ms},
            {"normalized_time", g.normalized_time}}},
          {"sweep", to_json(s.sweep)},
          {"worker_accuracy", std::move(accuracy)}};
}

json to_json(const WorkerDetails& d) {
  json profile = {{"worker_id", d.profile.id}};
  for (const auto& f : profile_field_names()) {
    profile[f] = std::string(*profile_field(d.profile, f));
  }
  json responses = json::array();
  for (const auto& r : d.responses) {
    responses.push_back({{"segment_id", r.segment_id},
                         {"ordinal", r.ordinal},
                         {"direction", std::string(to_string(r.direction))},
                         {"presentation_index", r.presentation_index},
                         {"answer", std::string(to_string(r.answer))},
                         {"ground_truth", std::string(to_string(r.ground_truth))},
                         {"correct", opt(r.correct)},
                         {"response_time_ms", r.response_time_ms},
                         {"running_accuracy", opt(r.running_accuracy)}});
  }
  return {{"profile", std::move(profile)},
          {"aggregate", d.aggregate ? to_json(*d.aggregate) : json(nullptr)},
          {"responses", std::move(responses)},
          {"comment", opt(d.comment)}};
}

json to_json(const std::vector<Diagnostic>& diagnostics) {
  json out = json::array();
  for (const auto& d : diagnostics) out.push_back(d.to_json());
  return out;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  csv::Writer w({"threshold", "sensitivity", "specificity", "n_polyp_labels"});
  for (const auto& r : rows) {
    w.row({format_number(r.threshold), opt_csv(r.sensitivity), opt_csv(r.specificity),
           std::to_string(r.n_polyp_labels)});
  }
  return w.str();
}

std::string layout_to_csv(const EmbeddingLayout& layout) {
  csv::Writer w({"item_id", "x", "y", "lightness", "arc_fraction"});
  for (const auto& it : layout.items) {
    w.row({it.id, format_number(it.position.x), format_number(it.position.y),
           format_number(it.lightness), format_number(it.arc_fraction)});
  }
  return w.str();
}

std::string labels_to_csv(const ConsensusReport& r) {
  csv::Writer w({"segment_id", "label"});
  for (const auto& l : r.labels) w.row({l.segment_id, std::string(to_string(l.label))});
  return w.str();
}

namespace payload {

StudyDataset view_of(const StudyDataset& dataset, bool exclude) {
  if (!exclude) return dataset;
  return apply_exclusions(dataset, active_exclusions(dataset.annotations));
}

namespace {

json exclusions_json(const StudyDataset& dataset, bool exclude) {
  if (!exclude) return {{"applied", false}, {"workers", json::array()}, {"segments", json::array()}};
  const auto ex = active_exclusions(dataset.annotations);
  return {{"applied", true}, {"workers", ex.workers}, {"segments", ex.segments}};
}

json base(const StudyDataset& dataset, bool exclude) {
  return {{"dataset_id", dataset.id()},
          {"annotation_position", dataset.annotations.size()},
          {"exclusions", exclusions_json(dataset, exclude)}};
}

}  // namespace

json consensus(const StudyDataset& dataset, const ConsensusQuery& q) {
  const ConsensusThreshold threshold(q.threshold);
  const StudyDataset view = view_of(dataset, q.exclude);
  json out = base(dataset, q.exclude);
  const auto summaries = vote_summaries(view);
  json votes = json::array();
  for (const auto& v : summaries.viewed) {
    votes.push_back({{"segment_id", v.segment_id},
                     {"n_viewers", v.n_viewers},
                     {"n_polyp_votes", v.n_polyp_votes},
                     {"polyp_ratio", v.polyp_ratio}});
  }
  out["votes"] = std::move(votes);
  out["unviewed"] = summaries.unviewed;
  out["report"] = to_json(classify(view, threshold));
  if (q.include_matrix) out["matrix"] = to_json(consensus_matrix(view, q.mode, q.sort));
  return out;
}

json sweep(const StudyDataset& dataset, double step, bool exclude) {
  json out = base(dataset, exclude);
  out["step"] = step;
  out["rows"] = to_json(crowdlens::sweep(view_of(dataset, exclude), step));
  return out;
}

json aggregates(const StudyDataset& dataset, bool exclude) {
  const StudyDataset view = view_of(dataset, exclude);
  json out = base(dataset, exclude);
  json users = json::array();
  for (const auto& a : user_aggregates(view)) users.push_back(to_json(a));
  json segs = json::array();
  for (const auto& a : segment_aggregates(view)) segs.push_back(to_json(a));
  out["users"] = std::move(users);
  out["segments"] = std::move(segs);
  return out;
}

json similar_workers(const StudyDataset& dataset, const std::string& probe, std::size_t k,
                     bool exclude) {
  const StudyDataset view = view_of(dataset, exclude);
  json out = base(dataset, exclude);
  out["probe"] = probe;
  out["k"] = k;
  for (const auto& s : signatures(view)) {
    if (s.worker_id == probe) out["signature"] = s.signature;
  }
  out["hits"] = to_json(crowdlens::similar_workers(view, probe, k));
  return out;
}

json ambiguous_segments(const StudyDataset& dataset, double min_ambiguity, bool exclude) {
  json out = base(dataset, exclude);
  out["min"] = min_ambiguity;
  out["segments"] = to_json(crowdlens::ambiguous_segments(view_of(dataset, exclude), min_ambiguity));
  return out;
}

json anomalies(const StudyDataset& dataset, const SuspectConfig& config, double min_ambiguity,
               bool exclude) {
  const StudyDataset view = view_of(dataset, exclude);
  json out = base(dataset, exclude);
  out["suspects"] = to_json(flag_suspect_workers(view, config));
  out["ambiguous_segments"] = to_json(crowdlens::ambiguous_segments(view, min_ambiguity));
  json sigs = json::array();
  for (const auto& s : signatures(view)) {
    sigs.push_back({{"worker_id", s.worker_id}, {"signature", s.signature}});
  }
  out["signatures"] = std::move(sigs);
  return out;
}

json embedding(const StudyDataset& dataset, const EmbeddingConfig& config, bool exclude) {
  json out = base(dataset, exclude);
  out["seed"] = config.tsne.seed;
  out["layout"] = to_json(embed(view_of(dataset, exclude), config));
  return out;
}

json parallel_sets(const StudyDataset& dataset, const std::vector<std::string>& axes,
                   bool exclude) {
  const StudyDataset view = view_of(dataset, exclude);
  json out = base(dataset, exclude);
  out["model"] = to_json(crowdlens::parallel_sets(view.workers, view.manifest.vocabulary, axes));
  return out;
}

json word_cloud(const StudyDataset& dataset, std::size_t k, bool exclude) {
  json out = base(dataset, exclude);
  out["k"] = k;
  out["stopwords_version"] = std::string(stopwords_version());
  out["entries"] = to_json(crowdlens::word_cloud(view_of(dataset, exclude).comments, k));
  return out;
}

json report(const Store& store, const StudyDataset& dataset, std::size_t k, bool exclude) {
  const StudyDataset view = view_of(dataset, exclude);
  json out = base(dataset, exclude);
  out["overview"] = to_json(overview(view));
  out["timeline"] = to_json(timeline(store));
  out["word_cloud"] = to_json(crowdlens::word_cloud(view.comments, k));
  return out;
}

}  // namespace payload

}  // namespace crowdlens
