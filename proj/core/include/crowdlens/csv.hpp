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

// Minimal RFC-4180 reader/writer: comma separator, double-quote quoting,
// embedded newlines inside quotes, CRLF or LF line endings, header row.

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace crowdlens::csv {

struct Row {
  // 1-based data-row index; the header is not counted.
  std::size_t index = 0;
  std::vector<std::string> fields;
};

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;
};

/// Parses `text` into a header and data rows. Blank lines are skipped.
/// Throws Error(kMalformedRow) on an unterminated quoted field or when the
/// header is missing.
Table parse(std::string_view text);

/// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape_field(std::string_view field);

class Writer {
 public:
  explicit Writer(const std::vector<std::string>& header) { row(header); }

  void row(const std::vector<std::string>& fields);
  const std::string& str() const { return out_; }

 private:
  std::string out_;
};

}  // namespace crowdlens::csv
