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

#include "crowdlens/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "crowdlens/codec.hpp"
#include "crowdlens/error.hpp"
#include "crowdlens/ingest.hpp"
#include "crowdlens/service.hpp"
#include "crowdlens/simulator.hpp"
#include "crowdlens/store.hpp"

namespace crowdlens::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidArgument, fmt::format("cannot read {}", path), {{"path", path}});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void report_error(const Error& e, std::ostream& err) {
  const auto& detail = e.detail();
  if (detail.is_object() && detail.contains("diagnostics") && detail["diagnostics"].is_array()) {
    for (const auto& d : detail["diagnostics"]) err << d.dump() << '\n';
    return;
  }
  err << e.to_json().dump() << '\n';
}

struct Options {
  std::string store = "store";
  std::string format;  // empty: per-command default
  std::string dataset;

  // ingest
  std::string from;
  std::string manifest, responses, workers, segments, comments;
  // simulate
  std::string spec, out_dir;
  // consensus
  std::string threshold = "50", mode = "response", sort = "time", exclude = "on";
  // sweep
  std::string step = "5";
  // anomalies
  std::string min_ambiguity = "0", floor_ms, per_response_ms = "1000", min_viewed = "5";
  // embed
  std::string method = "mds", items = "workers", weights, seed = "0", perplexity, iterations;
  // report
  std::string k = "20";
  // serve
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t threads = 8;
};

bool want_csv(const Options& o, bool csv_default) {
  if (o.format.empty()) return csv_default;
  if (o.format == "csv") return true;
  if (o.format == "json") return false;
  throw Error(ErrorCode::kInvalidArgument, fmt::format("format must be csv or json, got '{}'", o.format),
              {{"parameter", "format"}, {"value", o.format}});
}

std::unique_ptr<Store> open_store(const Options& o) {
  if (!fs::is_directory(o.store)) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("store directory {} does not exist", o.store),
                {{"path", o.store}});
  }
  return std::make_unique<Store>(fs::path(o.store));
}

DatasetPtr pick_dataset(const Store& store, const Options& o) {
  if (!o.dataset.empty()) return store.get(o.dataset);
  const auto all = store.datasets();
  if (all.size() == 1) return all.front();
  throw Error(ErrorCode::kInvalidArgument,
              fmt::format("--dataset is required when the store holds {} datasets", all.size()),
              {{"n_datasets", all.size()}});
}

bool exclude_of(const Options& o) { return parse_switch(o.exclude, "exclude"); }

template <typename T>
T parse_choice(const std::string& v, const char* what, std::optional<T> (*parse)(std::string_view)) {
  const auto parsed = parse(v);
  if (!parsed) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("unsupported {} '{}'", what, v),
                {{"parameter", what}, {"value", v}});
  }
  return *parsed;
}

int cmd_ingest(const Options& o, std::ostream& out, std::ostream& err) {
  StudyFiles files;
  if (!o.from.empty()) {
    files = read_study_dir(o.from);
  } else {
    if (o.manifest.empty() || o.responses.empty() || o.workers.empty() || o.segments.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "ingest needs --from DIR or --manifest, --responses, --workers and --segments");
    }
    files.manifest_json = read_file(o.manifest);
    files.responses_csv = read_file(o.responses);
    files.workers_csv = read_file(o.workers);
    files.segments_csv = read_file(o.segments);
    if (!o.comments.empty()) files.comments_csv = read_file(o.comments);
  }
  fs::create_directories(o.store);
  Store store{fs::path(o.store)};
  const auto result = store.add(files);
  for (const auto& w : result.warnings) err << w.to_json().dump() << '\n';
  out << render({{"dataset_id", result.dataset.id()},
                 {"n_segments", result.dataset.segments.size()},
                 {"n_workers", result.dataset.workers.size()},
                 {"n_responses", result.dataset.responses.size()},
                 {"warnings", to_json(result.warnings)}});
  return kOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  json spec_json;
  try {
    spec_json = json::parse(read_file(o.spec));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("spec is not JSON: {}", e.what()));
  }
  const StudyDataset ds = simulate(simulation_spec_from_json(spec_json));
  write_study_dir(o.out_dir, serialize_study(ds));
  out << render({{"dataset_id", ds.id()},
                 {"directory", o.out_dir},
                 {"n_segments", ds.segments.size()},
                 {"n_workers", ds.workers.size()},
                 {"n_responses", ds.responses.size()}});
  return kOk;
}

int cmd_consensus(const Options& o, std::ostream& out) {
  payload::ConsensusQuery q;
  q.threshold = parse_real(o.threshold, "threshold");
  q.mode = parse_choice(o.mode, "mode", &parse_matrix_mode);
  q.sort = parse_choice(o.sort, "sort", &parse_sort_key);
  q.exclude = exclude_of(o);
  const bool csv = want_csv(o, false);
  const ConsensusThreshold threshold(q.threshold);
  const auto store = open_store(o);
  const auto ds = pick_dataset(*store, o);
  if (csv) {
    out << labels_to_csv(classify(payload::view_of(*ds, q.exclude), threshold));
  } else {
    out << render(payload::consensus(*ds, q));
  }
  return kOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const double step = parse_real(o.step, "step");
  const bool exclude = exclude_of(o);
  const bool csv = want_csv(o, true);
  const auto store = open_store(o);
  const auto ds = pick_dataset(*store, o);
  if (csv) {
    out << sweep_to_csv(sweep(payload::view_of(*ds, exclude), step));
  } else {
    out << render(payload::sweep(*ds, step, exclude));
  }
  return kOk;
}

int cmd_anomalies(const Options& o, std::ostream& out) {
  SuspectConfig config;
  config.min_viewed_for_constant = parse_count(o.min_viewed, "min-viewed");
  config.per_response_floor_ms = static_cast<std::int64_t>(parse_count(o.per_response_ms, "per-response-ms"));
  if (!o.floor_ms.empty()) {
    config.absolute_floor_ms = static_cast<std::int64_t>(parse_count(o.floor_ms, "floor-ms"));
  }
  const double min_ambiguity = parse_real(o.min_ambiguity, "min");
  const bool exclude = exclude_of(o);
  const auto store = open_store(o);
  const auto ds = pick_dataset(*store, o);
  out << render(payload::anomalies(*ds, config, min_ambiguity, exclude));
  return kOk;
}

int cmd_embed(const Options& o, std::ostream& out) {
  EmbeddingConfig config;
  config.method = parse_choice(o.method, "method", &parse_embedding_method);
  config.items = parse_choice(o.items, "items", &parse_embedding_items);
  if (!o.weights.empty()) config.weights = parse_weight_selection(o.weights);
  config.tsne.seed = parse_count(o.seed, "seed");
  if (!o.perplexity.empty()) config.tsne.perplexity = parse_real(o.perplexity, "perplexity");
  if (!o.iterations.empty()) {
    config.tsne.iterations = static_cast<int>(parse_count(o.iterations, "iterations"));
  }
  const bool exclude = exclude_of(o);
  const bool csv = want_csv(o, true);
  const auto store = open_store(o);
  const auto ds = pick_dataset(*store, o);
  if (csv) {
    out << layout_to_csv(embed(payload::view_of(*ds, exclude), config));
  } else {
    out << render(payload::embedding(*ds, config, exclude));
  }
  return kOk;
}

int cmd_report(const Options& o, std::ostream& out) {
  const std::size_t k = parse_count(o.k, "k");
  const bool exclude = exclude_of(o);
  const auto store = open_store(o);
  const auto ds = pick_dataset(*store, o);
  out << render(payload::report(*store, *ds, k, exclude));
  return kOk;
}

int cmd_serve(const Options& o, std::ostream& out) {
  ServeConfig config;
  config.store_path = o.store;
  config.host = o.host;
  config.port = o.port;
  config.threads = o.threads;
  fs::create_directories(o.store);
  serve(config, [&](int port) {
    out << render({{"listening", fmt::format("http://{}:{}", o.host, port)}}) << std::flush;
  });
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"crowd-consensus analytics for polyp / polyp-free judgments", "crowdlens"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--store", o.store, "store directory (one subdirectory per dataset)")
      ->capture_default_str();
  app.add_option("--format", o.format, "output format: csv or json");

  auto add_dataset = [&](CLI::App* sub) {
    sub->add_option("--dataset", o.dataset, "dataset id (optional when the store holds one)");
    sub->add_option("--exclude", o.exclude, "apply analyst anomaly marks: on or off")
        ->capture_default_str();
  };

  auto* ingest = app.add_subcommand("ingest", "validate a study and add it to the store");
  ingest->add_option("--from", o.from, "study directory with manifest.json and the CSVs");
  ingest->add_option("--manifest", o.manifest, "manifest.json");
  ingest->add_option("--responses", o.responses, "responses.csv");
  ingest->add_option("--workers", o.workers, "workers.csv");
  ingest->add_option("--segments", o.segments, "segments.csv");
  ingest->add_option("--comments", o.comments, "comments.csv");

  auto* simulate_cmd = app.add_subcommand("simulate", "generate a synthetic study directory");
  simulate_cmd->add_option("--spec", o.spec, "simulation spec (JSON)")->required();
  simulate_cmd->add_option("--out", o.out_dir, "output study directory")->required();

  auto* consensus = app.add_subcommand("consensus", "classify segments at a threshold");
  add_dataset(consensus);
  consensus->add_option("--threshold", o.threshold, "percent in [0,100]")->capture_default_str();
  consensus->add_option("--mode", o.mode, "response or statistics")->capture_default_str();
  consensus->add_option("--sort", o.sort, "time, polyps, accuracy or fn")->capture_default_str();

  auto* sweep_cmd = app.add_subcommand("sweep", "SE/SP at every threshold step");
  add_dataset(sweep_cmd);
  sweep_cmd->add_option("--step", o.step, "percent step")->capture_default_str();

  auto* anomalies = app.add_subcommand("anomalies", "suspect workers and ambiguous segments");
  add_dataset(anomalies);
  anomalies->add_option("--min", o.min_ambiguity, "minimum ambiguity in [0,1]")->capture_default_str();
  anomalies->add_option("--floor-ms", o.floor_ms, "absolute task-time floor (ms)");
  anomalies->add_option("--per-response-ms", o.per_response_ms, "per-response floor (ms)")
      ->capture_default_str();
  anomalies->add_option("--min-viewed", o.min_viewed, "segments needed for a constant flag")
      ->capture_default_str();

  auto* embed_cmd = app.add_subcommand("embed", "2D similarity layout");
  add_dataset(embed_cmd);
  embed_cmd->add_option("--method", o.method, "mds or tsne")->capture_default_str();
  embed_cmd->add_option("--items", o.items, "workers or segments")->capture_default_str();
  embed_cmd->add_option("--weights", o.weights, "selected parameters: name[:weight],...");
  embed_cmd->add_option("--seed", o.seed, "t-SNE seed")->capture_default_str();
  embed_cmd->add_option("--perplexity", o.perplexity, "t-SNE perplexity");
  embed_cmd->add_option("--iterations", o.iterations, "t-SNE iterations");

  auto* report_cmd = app.add_subcommand("report", "overview, timeline and word cloud");
  add_dataset(report_cmd);
  report_cmd->add_option("--k", o.k, "word-cloud size")->capture_default_str();

  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP service");
  serve_cmd->add_option("--host", o.host)->capture_default_str();
  serve_cmd->add_option("--port", o.port, "0 picks a free port")->capture_default_str();
  serve_cmd->add_option("--threads", o.threads)->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << json{{"code", "Usage"}, {"message", e.what()}, {"detail", json::object()}}.dump() << '\n';
    err << app.help();
    return kValidationError;
  }

  try {
    if (*ingest) return cmd_ingest(o, out, err);
    if (*simulate_cmd) return cmd_simulate(o, out);
    if (*consensus) return cmd_consensus(o, out);
    if (*sweep_cmd) return cmd_sweep(o, out);
    if (*anomalies) return cmd_anomalies(o, out);
    if (*embed_cmd) return cmd_embed(o, out);
    if (*report_cmd) return cmd_report(o, out);
    if (*serve_cmd) return cmd_serve(o, out);
  } catch (const Error& e) {
    report_error(e, err);
    return is_validation_error(e.code()) ? kValidationError : kInternalError;
  } catch (const std::exception& e) {
    err << json{{"code", "Internal"}, {"message", e.what()}, {"detail", json::object()}}.dump() << '\n';
    return kInternalError;
  }
  return kInternalError;
}

}  // namespace crowdlens::cli
