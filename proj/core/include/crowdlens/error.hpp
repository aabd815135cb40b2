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

#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace crowdlens {

enum class ErrorCode {
  kMalformedRow,
  kDanglingReference,
  kDuplicateResponse,
  kDuplicateRecord,
  kInvalidManifest,
  kInvalidRange,
  kInvalidArgument,
  kUnknownDataset,
  kUnknownWorker,
  kUnknownSegment,
  kUnknownAxis,
  kStatisticsUnavailable,
  kSchemaMismatch,
  kDegenerateInput,
  kBadPerplexity,
  kInfeasibleAssignment,
  kEvenN,
  kDuplicateDataset,
  kIoError,
};

/// Stable identifier used in JSON error bodies and CLI diagnostics,
/// e.g. "MalformedRow".
std::string_view error_code_name(ErrorCode code);

/// Library-wide exception. `detail` carries a machine-readable payload
/// (row numbers, offending ids) and is emitted verbatim by the CLI and
/// the HTTP service.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        nlohmann::json detail = nlohmann::json::object())
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }
  const nlohmann::json& detail() const noexcept { return detail_; }

  /// `{code, message, detail}`
  nlohmann::json to_json() const;

 private:
  ErrorCode code_;
  nlohmann::json detail_;
};

/// True for errors caused by bad input rather than internal failure.
bool is_validation_error(ErrorCode code);

}  // namespace crowdlens
