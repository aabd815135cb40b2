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

#include "crowdlens/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "crowdlens/error.hpp"

namespace crowdlens {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p, bool required) {
  std::ifstream in(p, std::ios::binary);
  if (!in) {
    if (!required) return {};
    throw Error(ErrorCode::kIoError, "cannot read " + p.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_all(int fd, std::string_view data, const fs::path& p) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kIoError, "write failed on " + p.string() + ": " +
                                           std::strerror(errno));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

void write_file_durable(const fs::path& p, std::string_view data, bool append) {
  const int flags = O_WRONLY | O_CREAT | O_CLOEXEC | (append ? O_APPEND : O_TRUNC);
  const int fd = ::open(p.c_str(), flags, 0644);
  if (fd < 0) {
    throw Error(ErrorCode::kIoError, "cannot open " + p.string() + ": " +
                                         std::strerror(errno));
  }
  try {
    write_all(fd, data, p);
  } catch (...) {
    ::close(fd);
    throw;
  }
  const int rc = ::fsync(fd);
  ::close(fd);
  if (rc != 0) throw Error(ErrorCode::kIoError, "fsync failed on " + p.string());
}

bool date_then_id(const DatasetPtr& a, const DatasetPtr& b) {
  if (a->manifest.created_on != b->manifest.created_on) {
    return a->manifest.created_on < b->manifest.created_on;
  }
  return a->id() < b->id();
}

}  // namespace

StudyFiles read_study_dir(const fs::path& dir) {
  StudyFiles f;
  f.manifest_json = read_file(dir / "manifest.json", true);
  f.responses_csv = read_file(dir / "responses.csv", true);
  f.workers_csv = read_file(dir / "workers.csv", true);
  f.segments_csv = read_file(dir / "segments.csv", true);
  f.comments_csv = read_file(dir / "comments.csv", false);
  f.annotations_log = read_file(dir / "annotations.log", false);
  return f;
}

void write_study_dir(const fs::path& dir, const StudyFiles& files) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string());
  write_file_durable(dir / "manifest.json", files.manifest_json, false);
  write_file_durable(dir / "responses.csv", files.responses_csv, false);
  write_file_durable(dir / "workers.csv", files.workers_csv, false);
  write_file_durable(dir / "segments.csv", files.segments_csv, false);
  write_file_durable(dir / "comments.csv", files.comments_csv, false);
  write_file_durable(dir / "annotations.log", files.annotations_log, false);
}

Store::Store(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(*root_, ec);
  if (!fs::is_directory(*root_, ec)) {
    throw Error(ErrorCode::kIoError, "store root is not a readable directory",
                {{"path", root_->string()}});
  }
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(*root_, ec)) {
    if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) {
      dirs.push_back(entry.path());
    }
  }
  if (ec) throw Error(ErrorCode::kIoError, "cannot list " + root_->string());
  std::sort(dirs.begin(), dirs.end());
  for (const auto& dir : dirs) {
    auto result = ingest_study(read_study_dir(dir));
    auto id = result.dataset.id();
    datasets_.emplace(std::move(id),
                      std::make_shared<const StudyDataset>(std::move(result.dataset)));
  }
}

std::vector<DatasetPtr> Store::datasets() const {
  std::shared_lock lock(mu_);
  std::vector<DatasetPtr> out;
  out.reserve(datasets_.size());
  for (const auto& [id, ds] : datasets_) out.push_back(ds);
  std::stable_sort(out.begin(), out.end(), date_then_id);
  return out;
}

std::size_t Store::size() const {
  std::shared_lock lock(mu_);
  return datasets_.size();
}

DatasetPtr Store::find(std::string_view id) const {
  std::shared_lock lock(mu_);
  auto it = datasets_.find(id);
  return it == datasets_.end() ? nullptr : it->second;
}

DatasetPtr Store::get(std::string_view id) const {
  if (auto ds = find(id)) return ds;
  throw Error(ErrorCode::kUnknownDataset, "unknown dataset", {{"dataset_id", id}});
}

void Store::persist_new(const StudyDataset& dataset, const StudyFiles& files) {
  if (datasets_.contains(dataset.id())) {
    throw Error(ErrorCode::kDuplicateDataset, "dataset already exists",
                {{"dataset_id", dataset.id()}});
  }
  if (root_) {
    const fs::path dir = *root_ / dataset.id();
    if (fs::exists(dir)) {
      throw Error(ErrorCode::kDuplicateDataset, "dataset directory already exists",
                  {{"dataset_id", dataset.id()}});
    }
    write_study_dir(dir, files);
  }
  auto snapshot = std::make_shared<const StudyDataset>(dataset);
  std::unique_lock lock(mu_);
  datasets_.emplace(dataset.id(), std::move(snapshot));
}

IngestResult Store::add(const StudyFiles& files) {
  auto result = ingest_study(files);
  std::lock_guard write(write_mu_);
  // Persist the normalized form so the directory re-ingests identically.
  persist_new(result.dataset, serialize_study(result.dataset));
  return result;
}

void Store::add(const StudyDataset& dataset) {
  std::lock_guard write(write_mu_);
  persist_new(dataset, serialize_study(dataset));
}

DatasetPtr Store::append_annotation(std::string_view dataset_id, AnomalyAnnotation a) {
  std::lock_guard write(write_mu_);
  DatasetPtr current = get(dataset_id);
  const bool known = a.target == AnnotationTarget::kWorker
                         ? current->find_worker(a.target_id) != nullptr
                         : current->find_segment(a.target_id) != nullptr;
  if (!known) {
    throw Error(a.target == AnnotationTarget::kWorker ? ErrorCode::kUnknownWorker
                                                      : ErrorCode::kUnknownSegment,
                "annotation target not in dataset", {{"target_id", a.target_id}});
  }
  if (root_) {
    write_file_durable(*root_ / current->id() / "annotations.log",
                       annotation_to_json(a).dump() + "\n", true);
  }
  auto next = std::make_shared<StudyDataset>(*current);
  next->annotations.push_back(std::move(a));
  DatasetPtr snapshot = std::move(next);
  std::unique_lock lock(mu_);
  datasets_.insert_or_assign(std::string(dataset_id), snapshot);
  return snapshot;
}

std::vector<std::string> Store::datasets_with_worker(std::string_view worker_id) const {
  std::shared_lock lock(mu_);
  std::vector<std::string> ids;
  for (const auto& [id, ds] : datasets_) {
    if (ds->find_worker(worker_id)) ids.push_back(id);
  }
  return ids;
}

std::vector<DatasetPtr> filter_by_date(const Store& store, const Date& from,
                                       const Date& to) {
  if (to < from) {
    throw Error(ErrorCode::kInvalidRange, "from must not be after to",
                {{"from", format_date(from)}, {"to", format_date(to)}});
  }
  std::vector<DatasetPtr> out;
  for (auto& ds : store.datasets()) {
    if (ds->manifest.created_on >= from && ds->manifest.created_on <= to) {
      out.push_back(std::move(ds));
    }
  }
  return out;
}

}  // namespace crowdlens
