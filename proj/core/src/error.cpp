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

#include "crowdlens/error.hpp"

namespace crowdlens {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kDanglingReference: return "DanglingReference";
    case ErrorCode::kDuplicateResponse: return "DuplicateResponse";
    case ErrorCode::kDuplicateRecord: return "DuplicateRecord";
    case ErrorCode::kInvalidManifest: return "InvalidManifest";
    case ErrorCode::kInvalidRange: return "InvalidRange";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kUnknownDataset: return "UnknownDataset";
    case ErrorCode::kUnknownWorker: return "UnknownWorker";
    case ErrorCode::kUnknownSegment: return "UnknownSegment";
    case ErrorCode::kUnknownAxis: return "UnknownAxis";
    case ErrorCode::kStatisticsUnavailable: return "StatisticsUnavailable";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kBadPerplexity: return "BadPerplexity";
    case ErrorCode::kInfeasibleAssignment: return "InfeasibleAssignment";
    case ErrorCode::kEvenN: return "EvenN";
    case ErrorCode::kDuplicateDataset: return "DuplicateDataset";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

nlohmann::json Error::to_json() const {
  return {{"code", std::string(error_code_name(code_))},
          {"message", what()},
          {"detail", detail_}};
}

bool is_validation_error(ErrorCode code) { return code != ErrorCode::kIoError; }

}  // namespace crowdlens
