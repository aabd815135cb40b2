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

#include "crowdlens/csv.hpp"

#include "crowdlens/error.hpp"

namespace crowdlens::csv {

Table parse(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool field_quoted = false;
  bool record_has_content = false;

  auto end_field = [&] {
    fields.push_back(std::move(field));
    field.clear();
    field_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    if (record_has_content) records.push_back(std::move(fields));
    fields.clear();
    record_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_quoted) {
          throw Error(ErrorCode::kMalformedRow, "stray quote inside unquoted field",
                      {{"row", records.empty() ? 0 : records.size()}});
        }
        in_quotes = true;
        field_quoted = true;
        record_has_content = true;
        break;
      case ',':
        end_field();
        record_has_content = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        break;
      default:
        if (field_quoted) {
          throw Error(ErrorCode::kMalformedRow, "text after a closing quote",
                      {{"row", records.size()}});
        }
        field.push_back(c);
        record_has_content = true;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::kMalformedRow, "unterminated quoted field",
                {{"row", records.size()}});
  }
  end_record();

  if (records.empty()) {
    throw Error(ErrorCode::kMalformedRow, "missing header row", {{"row", 0}});
  }
  Table table;
  table.header = std::move(records.front());
  for (std::size_t i = 1; i < records.size(); ++i) {
    table.rows.push_back(Row{i, std::move(records[i])});
  }
  return table;
}

std::string escape_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void Writer::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_.push_back(',');
    out_ += escape_field(fields[i]);
  }
  // A lone empty field would otherwise serialize as a blank line.
  if (fields.size() == 1 && fields[0].empty()) out_ += "\"\"";
  out_.push_back('\n');
}

}  // namespace crowdlens::csv
