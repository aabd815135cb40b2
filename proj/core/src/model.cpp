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

#include "crowdlens/model.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <set>

#include <fmt/format.h>

namespace crowdlens {

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(std::string_view s,
                        const std::pair<std::string_view, E> (&table)[N]) {
  for (const auto& [name, value] : table) {
    if (name == s) return value;
  }
  return std::nullopt;
}

constexpr std::pair<std::string_view, Answer> kAnswers[] = {
    {"POLYP", Answer::kPolyp}, {"POLYP_FREE", Answer::kPolypFree}};
constexpr std::pair<std::string_view, Direction> kDirections[] = {
    {"ANTEGRADE", Direction::kAntegrade}, {"RETROGRADE", Direction::kRetrograde}};
constexpr std::pair<std::string_view, Orientation> kOrientations[] = {
    {"SUPINE", Orientation::kSupine}, {"PRONE", Orientation::kProne}};
constexpr std::pair<std::string_view, GroundTruth> kTruths[] = {
    {"POLYP", GroundTruth::kPolyp},
    {"POLYP_FREE", GroundTruth::kPolypFree},
    {"UNKNOWN", GroundTruth::kUnknown}};
constexpr std::pair<std::string_view, AnnotationTarget> kTargets[] = {
    {"worker", AnnotationTarget::kWorker}, {"segment", AnnotationTarget::kSegment}};

template <typename E, std::size_t N>
std::string_view name_of(E v, const std::pair<std::string_view, E> (&table)[N]) {
  for (const auto& [name, value] : table) {
    if (value == v) return name;
  }
  return "?";
}

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

unsigned days_in_month(int y, unsigned m) {
  static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

// Days since 1970-01-01 (H. Hinnant's days_from_civil).
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return Date{static_cast<int>(y + (m <= 2)), m, d};
}

}  // namespace

std::string_view to_string(Answer v) { return name_of(v, kAnswers); }
std::string_view to_string(Direction v) { return name_of(v, kDirections); }
std::string_view to_string(Orientation v) { return name_of(v, kOrientations); }
std::string_view to_string(GroundTruth v) { return name_of(v, kTruths); }
std::string_view to_string(AnnotationTarget v) { return name_of(v, kTargets); }

std::optional<Answer> parse_answer(std::string_view s) { return lookup(s, kAnswers); }
std::optional<Direction> parse_direction(std::string_view s) {
  return lookup(s, kDirections);
}
std::optional<Orientation> parse_orientation(std::string_view s) {
  return lookup(s, kOrientations);
}
std::optional<GroundTruth> parse_ground_truth(std::string_view s) {
  return lookup(s, kTruths);
}
std::optional<AnnotationTarget> parse_annotation_target(std::string_view s) {
  return lookup(s, kTargets);
}

std::optional<Date> parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  int y = 0, m = 0, d = 0;
  if (!parse_int(s.substr(0, 4), y) || !parse_int(s.substr(5, 2), m) ||
      !parse_int(s.substr(8, 2), d)) {
    return std::nullopt;
  }
  if (m < 1 || m > 12 || d < 1) return std::nullopt;
  if (static_cast<unsigned>(d) > days_in_month(y, static_cast<unsigned>(m))) {
    return std::nullopt;
  }
  return Date{y, static_cast<unsigned>(m), static_cast<unsigned>(d)};
}

std::string format_date(const Date& d) {
  return fmt::format("{:04d}-{:02d}-{:02d}", d.year, d.month, d.day);
}

std::optional<Timestamp> parse_timestamp(std::string_view s) {
  // YYYY-MM-DDTHH:MM:SS[.fff]Z
  if (s.size() < 20 || s.back() != 'Z' || s[10] != 'T' || s[13] != ':' ||
      s[16] != ':') {
    return std::nullopt;
  }
  auto date = parse_date(s.substr(0, 10));
  if (!date) return std::nullopt;
  int hh = 0, mm = 0, ss = 0, ms = 0;
  if (!parse_int(s.substr(11, 2), hh) || !parse_int(s.substr(14, 2), mm) ||
      !parse_int(s.substr(17, 2), ss)) {
    return std::nullopt;
  }
  const std::string_view rest = s.substr(19, s.size() - 20);
  if (!rest.empty()) {
    if (rest.size() != 4 || rest[0] != '.' || !parse_int(rest.substr(1), ms)) {
      return std::nullopt;
    }
  }
  if (hh > 23 || mm > 59 || ss > 59 || hh < 0 || mm < 0 || ss < 0) return std::nullopt;
  const std::int64_t days = days_from_civil(date->year, date->month, date->day);
  return Timestamp{((days * 24 + hh) * 60 + mm) * 60000 + ss * 1000 + ms};
}

std::string format_timestamp(const Timestamp& t) {
  std::int64_t ms = t.millis_since_epoch;
  std::int64_t days = ms >= 0 ? ms / 86400000 : -((-ms + 86399999) / 86400000);
  std::int64_t rem = ms - days * 86400000;
  const Date d = civil_from_days(days);
  const int hh = static_cast<int>(rem / 3600000);
  const int mm = static_cast<int>(rem / 60000 % 60);
  const int ss = static_cast<int>(rem / 1000 % 60);
  const int frac = static_cast<int>(rem % 1000);
  if (frac == 0) {
    return fmt::format("{}T{:02d}:{:02d}:{:02d}Z", format_date(d), hh, mm, ss);
  }
  return fmt::format("{}T{:02d}:{:02d}:{:02d}.{:03d}Z", format_date(d), hh, mm, ss,
                     frac);
}

Timestamp now_utc() {
  using namespace std::chrono;
  return Timestamp{
      duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count()};
}

const std::vector<std::string>& profile_field_names() {
  static const std::vector<std::string> kNames = {
      "age_bracket",       "gender",          "education_level", "medical_expertise",
      "visualization_expertise", "reward_tier", "location"};
  return kNames;
}

std::optional<std::string_view> profile_field(const WorkerProfile& w,
                                              std::string_view field) {
  if (field == "age_bracket") return w.age_bracket;
  if (field == "gender") return w.gender;
  if (field == "education_level") return w.education_level;
  if (field == "medical_expertise") return w.medical_expertise;
  if (field == "visualization_expertise") return w.visualization_expertise;
  if (field == "reward_tier") return w.reward_tier;
  if (field == "location") return w.location;
  return std::nullopt;
}

std::vector<std::string> StudyDataset::segment_ids() const {
  std::vector<std::string> ids;
  ids.reserve(segments.size());
  for (const auto& s : segments) ids.push_back(s.id);
  return ids;
}

std::vector<std::string> StudyDataset::worker_ids() const {
  std::vector<std::string> ids;
  ids.reserve(workers.size());
  for (const auto& w : workers) ids.push_back(w.id);
  return ids;
}

bool StudyDataset::has_ground_truth() const {
  return !segments.empty() &&
         std::all_of(segments.begin(), segments.end(), [](const SegmentRecord& s) {
           return s.ground_truth != GroundTruth::kUnknown;
         });
}

const WorkerProfile* StudyDataset::find_worker(std::string_view id) const {
  auto it = std::find_if(workers.begin(), workers.end(),
                         [&](const WorkerProfile& w) { return w.id == id; });
  return it == workers.end() ? nullptr : &*it;
}

const SegmentRecord* StudyDataset::find_segment(std::string_view id) const {
  auto it = std::find_if(segments.begin(), segments.end(),
                         [&](const SegmentRecord& s) { return s.id == id; });
  return it == segments.end() ? nullptr : &*it;
}

bool Exclusions::excludes_worker(std::string_view id) const {
  return std::binary_search(workers.begin(), workers.end(), id);
}

bool Exclusions::excludes_segment(std::string_view id) const {
  return std::binary_search(segments.begin(), segments.end(), id);
}

Exclusions active_exclusions(const std::vector<AnomalyAnnotation>& log) {
  std::map<std::pair<AnnotationTarget, std::string>, bool> latest;
  for (const auto& a : log) latest[{a.target, a.target_id}] = !a.cleared;
  Exclusions ex;
  for (const auto& [key, marked] : latest) {
    if (!marked) continue;
    (key.first == AnnotationTarget::kWorker ? ex.workers : ex.segments)
        .push_back(key.second);
  }
  // std::map iteration already yields ids in ascending order per target.
  return ex;
}

StudyDataset apply_exclusions(const StudyDataset& dataset, const Exclusions& ex) {
  if (ex.empty()) return dataset;
  StudyDataset out;
  out.manifest = dataset.manifest;
  out.annotations = dataset.annotations;
  for (const auto& s : dataset.segments) {
    if (!ex.excludes_segment(s.id)) out.segments.push_back(s);
  }
  for (const auto& w : dataset.workers) {
    if (!ex.excludes_worker(w.id)) out.workers.push_back(w);
  }
  for (const auto& r : dataset.responses) {
    if (!ex.excludes_worker(r.worker_id) && !ex.excludes_segment(r.segment_id)) {
      out.responses.push_back(r);
    }
  }
  for (const auto& c : dataset.comments) {
    if (!ex.excludes_worker(c.worker_id)) out.comments.push_back(c);
  }
  return out;
}

}  // namespace crowdlens
