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

#include "crowdlens/service.hpp"

#include <algorithm>
#include <fmt/format.h>

#include "crowdlens/codec.hpp"
#include "crowdlens/error.hpp"
#include "crowdlens/ingest.hpp"

namespace crowdlens {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownDataset:
    case ErrorCode::kUnknownWorker:
    case ErrorCode::kUnknownSegment:
      return 404;
    case ErrorCode::kDuplicateDataset:
      return 409;
    case ErrorCode::kIoError:
      return 500;
    default:
      return 422;
  }
}

namespace {

using nlohmann::json;

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t slash = path.find('/', start);
    const std::size_t end = slash == std::string::npos ? path.size() : slash;
    if (end > start) out.push_back(path.substr(start, end - start));
    if (slash == std::string::npos) break;
    start = slash + 1;
  }
  return out;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    if (end > start) out.emplace_back(text.substr(start, end - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Response json_response(int status, const json& body) {
  return {status, "application/json", render(body)};
}

Response csv_response(std::string body) { return {200, "text/csv", std::move(body)}; }

Response not_found(const Request& r) {
  return json_response(404, {{"code", "NotFound"},
                             {"message", fmt::format("no route for {} {}", r.method, r.path)},
                             {"detail", json::object()}});
}

Response method_not_allowed(const Request& r) {
  return json_response(405, {{"code", "MethodNotAllowed"},
                             {"message", fmt::format("{} not allowed on {}", r.method, r.path)},
                             {"detail", json::object()}});
}

class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& q) : q_(q) {}

  std::optional<std::string> get(const std::string& key) const {
    const auto it = q_.find(key);
    if (it == q_.end()) return std::nullopt;
    return it->second;
  }
  std::string str(const std::string& key, std::string fallback) const {
    return get(key).value_or(std::move(fallback));
  }
  double real(const std::string& key, double fallback) const {
    const auto v = get(key);
    return v ? parse_real(*v, key) : fallback;
  }
  std::uint64_t count(const std::string& key, std::uint64_t fallback) const {
    const auto v = get(key);
    return v ? parse_count(*v, key) : fallback;
  }
  bool exclude() const {
    const auto v = get("exclude");
    return v ? parse_switch(*v, "exclude") : true;
  }
  bool csv() const {
    const std::string f = str("format", "json");
    if (f == "csv") return true;
    if (f == "json") return false;
    throw Error(ErrorCode::kInvalidArgument, fmt::format("format must be json or csv, got '{}'", f),
                {{"parameter", "format"}, {"value", f}});
  }

 private:
  const std::map<std::string, std::string>& q_;
};

template <typename T>
T parse_enum(const Params& p, const std::string& key, T fallback,
             std::optional<T> (*parse)(std::string_view)) {
  const auto v = p.get(key);
  if (!v) return fallback;
  const auto parsed = parse(*v);
  if (!parsed) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("unsupported {} '{}'", key, *v),
                {{"parameter", key}, {"value", *v}});
  }
  return *parsed;
}

payload::ConsensusQuery consensus_query(const Params& p) {
  payload::ConsensusQuery q;
  q.threshold = p.real("threshold", q.threshold);
  q.mode = parse_enum(p, "mode", q.mode, &parse_matrix_mode);
  q.sort = parse_enum(p, "sort", q.sort, &parse_sort_key);
  q.exclude = p.exclude();
  if (const auto m = p.get("matrix")) q.include_matrix = parse_switch(*m, "matrix");
  return q;
}

EmbeddingConfig embedding_config(const Params& p) {
  EmbeddingConfig c;
  c.items = parse_enum(p, "items", c.items, &parse_embedding_items);
  c.method = parse_enum(p, "method", c.method, &parse_embedding_method);
  if (const auto w = p.get("weights")) c.weights = parse_weight_selection(*w);
  c.tsne.seed = p.count("seed", c.tsne.seed);
  c.tsne.perplexity = p.real("perplexity", c.tsne.perplexity);
  c.tsne.iterations = static_cast<int>(p.count("iterations", c.tsne.iterations));
  return c;
}

SuspectConfig suspect_config(const Params& p) {
  SuspectConfig c;
  c.min_viewed_for_constant = p.count("min_viewed", c.min_viewed_for_constant);
  c.per_response_floor_ms =
      static_cast<std::int64_t>(p.count("per_response_ms", c.per_response_floor_ms));
  if (const auto f = p.get("floor_ms")) {
    c.absolute_floor_ms = static_cast<std::int64_t>(parse_count(*f, "floor_ms"));
  }
  return c;
}

std::vector<std::string> axes_of(const Params& p) {
  const auto v = p.get("axes");
  if (!v) return profile_field_names();
  return split_list(*v);
}

json timeline_payload(const Store& store, const Params& p) {
  const auto from = p.get("from");
  const auto to = p.get("to");
  std::vector<TimelineBar> bars;
  if (from || to) {
    auto date = [](const std::optional<std::string>& s, Date fallback) {
      if (!s) return fallback;
      const auto d = parse_date(*s);
      if (!d) {
        throw Error(ErrorCode::kInvalidArgument, fmt::format("invalid date '{}'", *s),
                    {{"value", *s}});
      }
      return *d;
    };
    for (const auto& ds : filter_by_date(store, date(from, Date{0, 1, 1}),
                                         date(to, Date{9999, 12, 31}))) {
      bars.push_back(timeline_bar(*ds));
    }
  } else {
    bars = timeline(store);
  }
  return {{"datasets", to_json(bars)}};
}

json details_payload(const Store& store, const StudyDataset& ds, const std::string& wid,
                     bool exclude) {
  const StudyDataset view = payload::view_of(ds, exclude);
  json out = {{"dataset_id", ds.id()}, {"annotation_position", ds.annotations.size()}};
  out["details"] = to_json(worker_details(view, wid));
  json others = json::array();
  for (const auto& id : store.datasets_with_worker(wid)) {
    if (id != ds.id()) others.push_back(id);
  }
  out["other_datasets"] = std::move(others);
  return out;
}

AnomalyAnnotation annotation_from_body(const std::string& body, const std::string& analyst) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("annotation body is not JSON: {}", e.what()));
  }
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "annotation body must be an object");
  if (!j.contains("marked_by")) j["marked_by"] = analyst;
  if (!j.contains("marked_at")) j["marked_at"] = format_timestamp(now_utc());
  if (!j.contains("note")) j["note"] = "";
  return annotation_from_json(j);
}

StudyFiles files_from_parts(const std::map<std::string, std::string>& parts) {
  StudyFiles f;
  std::vector<std::string> missing;
  auto take = [&](const char* name, std::string& dst, bool required) {
    const auto it = parts.find(name);
    if (it != parts.end()) {
      dst = it->second;
    } else if (required) {
      missing.emplace_back(name);
    }
  };
  take("manifest", f.manifest_json, true);
  take("responses", f.responses_csv, true);
  take("workers", f.workers_csv, true);
  take("segments", f.segments_csv, true);
  take("comments", f.comments_csv, false);
  take("annotations", f.annotations_log, false);
  if (!missing.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "multipart upload is missing required parts",
                {{"missing", missing}});
  }
  return f;
}

}  // namespace

SessionState& Service::touch(const std::string& analyst) {
  auto [it, inserted] = sessions_.try_emplace(analyst);
  if (inserted) it->second.session_id = analyst;
  return it->second;
}

SessionState Service::session(const std::string& id) const {
  std::lock_guard lock(session_mu_);
  const auto it = sessions_.find(id);
  if (it != sessions_.end()) return it->second;
  SessionState s;
  s.session_id = id;
  return s;
}

json Service::session_json(const SessionState& s) const {
  json out = {{"session_id", s.session_id},
              {"active_dataset", s.active_dataset ? json(*s.active_dataset) : json(nullptr)},
              {"threshold", s.threshold},
              {"exclude", s.exclude},
              {"embedding_method", std::string(to_string(s.embedding_method))},
              {"weight_selection", s.weight_selection}};
  json excluded_workers = json::array();
  json excluded_segments = json::array();
  if (s.active_dataset) {
    if (const auto ds = store_.find(*s.active_dataset)) {
      const auto ex = active_exclusions(ds->annotations);
      excluded_workers = ex.workers;
      excluded_segments = ex.segments;
    }
  }
  out["excluded_workers"] = std::move(excluded_workers);
  out["excluded_segments"] = std::move(excluded_segments);
  return out;
}

Response Service::handle(const Request& request) {
  std::string analyst = "anonymous";
  if (const auto it = request.headers.find("x-analyst-id");
      it != request.headers.end() && !it->second.empty()) {
    analyst = it->second;
  }
  try {
    return route(request, analyst);
  } catch (const Error& e) {
    return json_response(http_status(e.code()), e.to_json());
  } catch (const std::exception& e) {
    return json_response(500, {{"code", "Internal"}, {"message", e.what()}, {"detail", json::object()}});
  }
}

Response Service::route(const Request& request, const std::string& analyst) {
  const auto seg = split_path(request.path);
  const Params p(request.query);
  const bool get = request.method == "GET";
  const bool post = request.method == "POST";

  if (seg.size() == 1 && seg[0] == "session") {
    if (!get) return method_not_allowed(request);
    std::lock_guard lock(session_mu_);
    return json_response(200, session_json(touch(analyst)));
  }
  if (seg.size() == 1 && seg[0] == "ingest") {
    if (!post) return method_not_allowed(request);
    const auto result = store_.add(files_from_parts(request.parts));
    return json_response(201, {{"dataset_id", result.dataset.id()},
                               {"n_segments", result.dataset.segments.size()},
                               {"n_workers", result.dataset.workers.size()},
                               {"n_responses", result.dataset.responses.size()},
                               {"warnings", to_json(result.warnings)}});
  }
  if (seg.empty() || seg[0] != "datasets") return not_found(request);
  if (seg.size() == 1) {
    if (!get) return method_not_allowed(request);
    return json_response(200, timeline_payload(store_, p));
  }

  const std::string& id = seg[1];
  const DatasetPtr ds = store_.get(id);
  {
    std::lock_guard lock(session_mu_);
    touch(analyst).active_dataset = id;
  }
  if (seg.size() == 2) {
    if (!get) return method_not_allowed(request);
    const auto& m = ds->manifest;
    return json_response(200, {{"dataset_id", m.id},
                               {"created_on", format_date(m.created_on)},
                               {"fov_degrees", m.fov_degrees},
                               {"flythrough_speed", m.flythrough_speed},
                               {"vocabulary", m.vocabulary},
                               {"n_segments", ds->segments.size()},
                               {"n_workers", ds->workers.size()},
                               {"n_responses", ds->responses.size()},
                               {"annotation_position", ds->annotations.size()}});
  }

  const std::string& what = seg[2];
  if (seg.size() == 3 && what == "annotations") {
    if (!post) return method_not_allowed(request);
    const AnomalyAnnotation a = annotation_from_body(request.body, analyst);
    const DatasetPtr next = store_.append_annotation(id, a);
    const auto ex = active_exclusions(next->annotations);
    return json_response(201, {{"dataset_id", id},
                               {"annotation", annotation_to_json(a)},
                               {"annotation_position", next->annotations.size()},
                               {"excluded_workers", ex.workers},
                               {"excluded_segments", ex.segments}});
  }
  if (seg.size() == 5 && what == "workers" && seg[4] == "details") {
    if (!get) return method_not_allowed(request);
    return json_response(200, details_payload(store_, *ds, seg[3], p.exclude()));
  }
  if (seg.size() != 3) return not_found(request);
  if (!get) {
    static const char* kReadOnly[] = {"consensus", "sweep", "aggregates", "similar-workers",
                                      "ambiguous-segments", "anomalies", "embedding",
                                      "parallel-sets", "wordcloud", "report"};
    if (std::find(std::begin(kReadOnly), std::end(kReadOnly), what) != std::end(kReadOnly)) {
      return method_not_allowed(request);
    }
    return not_found(request);
  }

  if (what == "consensus") {
    const auto q = consensus_query(p);
    const bool csv = p.csv();
    {
      std::lock_guard lock(session_mu_);
      auto& s = touch(analyst);
      s.threshold = q.threshold;
      s.exclude = q.exclude;
    }
    if (csv) {
      return csv_response(
          labels_to_csv(classify(payload::view_of(*ds, q.exclude), ConsensusThreshold(q.threshold))));
    }
    return json_response(200, payload::consensus(*ds, q));
  }
  if (what == "sweep") {
    const double step = p.real("step", 5.0);
    const bool exclude = p.exclude();
    if (p.csv()) return csv_response(sweep_to_csv(sweep(payload::view_of(*ds, exclude), step)));
    return json_response(200, payload::sweep(*ds, step, exclude));
  }
  if (what == "aggregates") return json_response(200, payload::aggregates(*ds, p.exclude()));
  if (what == "similar-workers") {
    const auto probe = p.get("probe");
    if (!probe) {
      throw Error(ErrorCode::kInvalidArgument, "probe is required", {{"parameter", "probe"}});
    }
    return json_response(200, payload::similar_workers(*ds, *probe, p.count("k", 5), p.exclude()));
  }
  if (what == "ambiguous-segments") {
    return json_response(200, payload::ambiguous_segments(*ds, p.real("min", 0.0), p.exclude()));
  }
  if (what == "anomalies") {
    return json_response(
        200, payload::anomalies(*ds, suspect_config(p), p.real("min", 0.0), p.exclude()));
  }
  if (what == "embedding") {
    const EmbeddingConfig config = embedding_config(p);
    const bool exclude = p.exclude();
    const bool csv = p.csv();
    {
      std::lock_guard lock(session_mu_);
      auto& s = touch(analyst);
      s.embedding_method = config.method;
      s.weight_selection = p.str("weights", "");
      s.exclude = exclude;
    }
    if (csv) return csv_response(layout_to_csv(embed(payload::view_of(*ds, exclude), config)));
    return json_response(200, payload::embedding(*ds, config, exclude));
  }
  if (what == "parallel-sets") {
    return json_response(200, payload::parallel_sets(*ds, axes_of(p), p.exclude()));
  }
  if (what == "wordcloud") {
    return json_response(200, payload::word_cloud(*ds, p.count("k", 20), p.exclude()));
  }
  if (what == "report") {
    return json_response(200, payload::report(store_, *ds, p.count("k", 20), p.exclude()));
  }
  return not_found(request);
}

}  // namespace crowdlens
