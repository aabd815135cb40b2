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

#include "crowdlens/views.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "crowdlens/error.hpp"
#include "study_index.hpp"

namespace crowdlens {

namespace {

std::vector<std::string> categories_for(const Vocabulary& vocab, const std::string& axis,
                                        const std::vector<WorkerProfile>& workers) {
  std::vector<std::string> cats;
  if (auto it = vocab.find(axis); it != vocab.end()) cats = it->second;
  // Values outside the vocabulary (hand-built inputs) go last, sorted.
  std::set<std::string> extra;
  for (const auto& w : workers) {
    std::string v(*profile_field(w, axis));
    if (std::find(cats.begin(), cats.end(), v) == cats.end()) extra.insert(std::move(v));
  }
  cats.insert(cats.end(), extra.begin(), extra.end());
  return cats;
}

std::vector<ParallelSetsNode> split(const std::vector<const WorkerProfile*>& group,
                                    const std::vector<std::string>& axes,
                                    const std::vector<std::vector<std::string>>& cats,
                                    std::size_t level) {
  std::vector<ParallelSetsNode> nodes;
  if (level == axes.size()) return nodes;
  for (const auto& cat : cats[level]) {
    std::vector<const WorkerProfile*> members;
    for (const WorkerProfile* w : group) {
      if (*profile_field(*w, axes[level]) == cat) members.push_back(w);
    }
    if (members.empty()) continue;
    nodes.push_back({cat, members.size(), split(members, axes, cats, level + 1)});
  }
  return nodes;
}

bool is_stopword(const std::string& token) {
  static const std::set<std::string> kSet(stopwords().begin(), stopwords().end());
  return kSet.contains(token);
}

template <typename Get>
std::optional<double> mean_of(const std::vector<UserAggregate>& aggs, Get get) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& a : aggs) {
    if (auto v = get(a)) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

template <typename Get>
std::optional<double> mean_of(const std::vector<SegmentAggregate>& aggs, Get get) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& a : aggs) {
    if (auto v = get(a)) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

}  // namespace

ParallelSetsModel parallel_sets(const std::vector<WorkerProfile>& workers,
                                const Vocabulary& vocabulary,
                                const std::vector<std::string>& axis_order) {
  if (axis_order.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "parallel sets need at least one axis");
  }
  for (std::size_t i = 0; i < axis_order.size(); ++i) {
    if (!profile_field(WorkerProfile{}, axis_order[i])) {
      throw Error(ErrorCode::kUnknownAxis, "unknown parallel-sets axis",
                  {{"axis", axis_order[i]}, {"available", profile_field_names()}});
    }
    if (std::find(axis_order.begin(), axis_order.begin() + static_cast<long>(i),
                  axis_order[i]) != axis_order.begin() + static_cast<long>(i)) {
      throw Error(ErrorCode::kInvalidArgument, "axis listed twice", {{"axis", axis_order[i]}});
    }
  }

  ParallelSetsModel model;
  model.axis_order = axis_order;
  model.root_count = workers.size();
  std::vector<std::vector<std::string>> cats;
  for (const auto& axis : axis_order) cats.push_back(categories_for(vocabulary, axis, workers));

  std::vector<const WorkerProfile*> all;
  for (const auto& w : workers) all.push_back(&w);
  model.tree = split(all, axis_order, cats, 0);

  for (std::size_t k = 0; k < axis_order.size(); ++k) {
    std::vector<std::pair<std::string, std::size_t>> hist;
    for (const auto& cat : cats[k]) {
      const auto n = static_cast<std::size_t>(
          std::count_if(workers.begin(), workers.end(), [&](const WorkerProfile& w) {
            return *profile_field(w, axis_order[k]) == cat;
          }));
      if (n > 0) hist.emplace_back(cat, n);
    }
    model.marginals.push_back(std::move(hist));
  }
  for (std::size_t k = 0; k + 1 < axis_order.size(); ++k) {
    std::vector<Ribbon> ribbons;
    for (const auto& from : cats[k]) {
      for (const auto& to : cats[k + 1]) {
        const auto n = static_cast<std::size_t>(
            std::count_if(workers.begin(), workers.end(), [&](const WorkerProfile& w) {
              return *profile_field(w, axis_order[k]) == from &&
                     *profile_field(w, axis_order[k + 1]) == to;
            }));
        if (n > 0) ribbons.push_back({from, to, n});
      }
    }
    model.ribbons.push_back(std::move(ribbons));
  }
  return model;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    // Bytes >= 0x80 belong to UTF-8 sequences and stay inside words.
    const bool word = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
                      (c >= 'A' && c <= 'Z') || c >= 0x80;
    if (word) {
      current.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : ch);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<WordCloudEntry> word_cloud(const std::vector<WorkerComment>& comments,
                                       std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  std::map<std::string, std::size_t> counts;
  for (const auto& c : comments) {
    for (auto& token : tokenize(c.text)) {
      if (token.size() < 3 || is_stopword(token)) continue;
      ++counts[std::move(token)];
    }
  }
  std::vector<WordCloudEntry> out;
  out.reserve(counts.size());
  for (auto& [token, n] : counts) out.push_back({token, n});
  // counts is keyed by token, so a stable sort on count keeps ties sorted.
  std::stable_sort(out.begin(), out.end(), [](const WordCloudEntry& a,
                                              const WordCloudEntry& b) {
    return a.count > b.count;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

TimelineBar timeline_bar(const StudyDataset& dataset) {
  TimelineBar bar;
  bar.dataset_id = dataset.id();
  bar.date = dataset.manifest.created_on;
  bar.fov_degrees = dataset.manifest.fov_degrees;
  bar.flythrough_speed = dataset.manifest.flythrough_speed;
  const auto aggs = user_aggregates(dataset);
  bar.n_workers = aggs.size();
  bar.mean_accuracy = mean_of(aggs, [](const UserAggregate& a) { return a.accuracy; });
  return bar;
}

std::vector<TimelineBar> timeline(const Store& store) {
  std::vector<TimelineBar> bars;
  for (const auto& ds : store.datasets()) bars.push_back(timeline_bar(*ds));
  return bars;
}

OverviewSummary overview(const StudyDataset& dataset) {
  OverviewSummary s;
  s.dataset_id = dataset.id();
  s.n_segments = dataset.segments.size();
  s.n_responses = dataset.responses.size();
  const auto users = user_aggregates(dataset);
  const auto segs = segment_aggregates(dataset);
  s.n_workers = users.size();

  auto d = [](std::size_t v) { return std::optional<double>(static_cast<double>(v)); };
  auto labelled = [&](const UserAggregate& a, std::size_t v) {
    return a.n_truth_labelled > 0 ? d(v) : std::nullopt;
  };
  auto& um = s.user_means;
  um.n_polyp_answers =
      mean_of(users, [&](const UserAggregate& a) { return d(a.n_polyp_answers); }).value_or(0);
  um.n_polyp_free_answers =
      mean_of(users, [&](const UserAggregate& a) { return d(a.n_polyp_free_answers); })
          .value_or(0);
  um.n_correct = mean_of(users, [&](const UserAggregate& a) { return labelled(a, a.n_correct); });
  um.n_false_positive =
      mean_of(users, [&](const UserAggregate& a) { return labelled(a, a.n_false_positive); });
  um.n_false_negative =
      mean_of(users, [&](const UserAggregate& a) { return labelled(a, a.n_false_negative); });
  um.accuracy = mean_of(users, [](const UserAggregate& a) { return a.accuracy; });
  um.total_task_time_ms =
      mean_of(users, [&](const UserAggregate& a) { return d(static_cast<std::size_t>(a.total_task_time_ms)); })
          .value_or(0);
  um.normalized_task_time =
      mean_of(users, [](const UserAggregate& a) {
        return std::optional<double>(a.normalized_task_time);
      }).value_or(0);

  auto opt = [&](const std::optional<std::size_t>& v) {
    return v ? d(*v) : std::nullopt;
  };
  auto& sm = s.segment_means;
  sm.n_polyp_votes =
      mean_of(segs, [&](const SegmentAggregate& a) { return d(a.n_polyp_votes); }).value_or(0);
  sm.n_polyp_free_votes =
      mean_of(segs, [&](const SegmentAggregate& a) { return d(a.n_polyp_free_votes); })
          .value_or(0);
  sm.n_correct = mean_of(segs, [&](const SegmentAggregate& a) { return opt(a.n_correct); });
  sm.n_false_positive =
      mean_of(segs, [&](const SegmentAggregate& a) { return opt(a.n_false_positive); });
  sm.n_false_negative =
      mean_of(segs, [&](const SegmentAggregate& a) { return opt(a.n_false_negative); });
  sm.mean_response_time_ms =
      mean_of(segs, [](const SegmentAggregate& a) {
        return std::optional<double>(a.mean_response_time_ms);
      }).value_or(0);
  sm.normalized_time =
      mean_of(segs, [](const SegmentAggregate& a) {
        return std::optional<double>(a.normalized_time);
      }).value_or(0);

  s.sweep = sweep(dataset, kOverviewSweepStep);
  for (const auto& a : users) s.worker_accuracy.emplace_back(a.worker_id, a.accuracy);
  return s;
}

WorkerDetails worker_details(const StudyDataset& dataset, std::string_view worker_id) {
  const WorkerProfile* profile = dataset.find_worker(worker_id);
  if (!profile) {
    throw Error(ErrorCode::kUnknownWorker, "unknown worker", {{"worker_id", worker_id}});
  }
  WorkerDetails out;
  out.profile = *profile;
  for (auto& a : user_aggregates(dataset)) {
    if (a.worker_id == worker_id) out.aggregate = std::move(a);
  }
  detail::StudyIndex index(dataset);
  for (std::size_t ri : index.by_worker[index.worker_pos.at(profile->id)]) {
    const auto& r = dataset.responses[ri];
    const auto& seg = dataset.segments[index.segment_of(r)];
    WorkerResponseDetail d;
    d.segment_id = seg.id;
    d.ordinal = seg.ordinal;
    d.direction = seg.direction;
    d.presentation_index = r.presentation_index;
    d.answer = r.answer;
    d.ground_truth = seg.ground_truth;
    if (seg.ground_truth != GroundTruth::kUnknown) {
      d.correct = (r.answer == Answer::kPolyp) == (seg.ground_truth == GroundTruth::kPolyp);
    }
    d.response_time_ms = r.response_time_ms;
    out.responses.push_back(std::move(d));
  }
  std::stable_sort(out.responses.begin(), out.responses.end(),
                   [](const WorkerResponseDetail& a, const WorkerResponseDetail& b) {
                     return a.presentation_index < b.presentation_index;
                   });
  std::size_t seen = 0, correct = 0;
  for (auto& d : out.responses) {
    if (d.correct) {
      ++seen;
      correct += *d.correct;
    }
    if (seen > 0) d.running_accuracy = static_cast<double>(correct) / static_cast<double>(seen);
  }
  for (const auto& c : dataset.comments) {
    if (c.worker_id == worker_id) out.comment = c.text;
  }
  return out;
}

}  // namespace crowdlens
