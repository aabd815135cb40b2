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

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "crowdlens/ingest.hpp"
#include "crowdlens/model.hpp"

namespace crowdlens {

using DatasetPtr = std::shared_ptr<const StudyDataset>;

/// Directory-backed collection of studies, one subdirectory per dataset
/// id. Readers get immutable snapshots; writes (ingest, annotations) are
/// serialized and reach disk before the call returns.
///
/// A default-constructed Store lives in memory only.
class Store {
 public:
  Store() = default;

  /// Opens (creating if absent) `root` and loads every dataset in it.
  /// Throws Error(kIoError) if the directory cannot be read, or the
  /// ingestion error of the first invalid dataset directory.
  explicit Store(std::filesystem::path root);

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  const std::optional<std::filesystem::path>& root() const { return root_; }

  /// All datasets ordered by creation date, then id.
  std::vector<DatasetPtr> datasets() const;
  std::size_t size() const;

  DatasetPtr find(std::string_view id) const;
  /// Throws Error(kUnknownDataset).
  DatasetPtr get(std::string_view id) const;

  /// Ingests and persists a new study. Throws Error(kDuplicateDataset) if
  /// the id is taken.
  IngestResult add(const StudyFiles& files);
  void add(const StudyDataset& dataset);

  /// Appends to the dataset's annotation log and returns the new snapshot.
  DatasetPtr append_annotation(std::string_view dataset_id, AnomalyAnnotation a);

  /// Ids of datasets in which `worker_id` has a profile, ascending.
  std::vector<std::string> datasets_with_worker(std::string_view worker_id) const;

 private:
  void persist_new(const StudyDataset& dataset, const StudyFiles& files);

  std::optional<std::filesystem::path> root_;
  mutable std::shared_mutex mu_;
  std::mutex write_mu_;
  std::map<std::string, DatasetPtr, std::less<>> datasets_;
};

/// Datasets with created_on in [from, to], ordered by date then id.
/// Throws Error(kInvalidRange) when from > to.
std::vector<DatasetPtr> filter_by_date(const Store& store, const Date& from,
                                       const Date& to);

/// Reads a dataset directory (manifest.json + CSVs + annotations.log).
StudyFiles read_study_dir(const std::filesystem::path& dir);

/// Writes `files` into `dir` (created if needed), one file per entry.
void write_study_dir(const std::filesystem::path& dir, const StudyFiles& files);

}  // namespace crowdlens
