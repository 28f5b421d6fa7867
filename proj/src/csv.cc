// Copyright 2026 The mdistinct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mdistinct/csv.h"

#include <fstream>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"

namespace mdistinct {

int CsvFile::Column(absl::string_view name) const {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

absl::StatusOr<std::string> ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open ", path.string()));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteTextFile(const std::filesystem::path& path,
                           absl::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot write ", path.string()));
  }
  out << contents;
  if (!out) {
    return absl::DataLossError(absl::StrCat("short write to ", path.string()));
  }
  return absl::OkStatus();
}

absl::StatusOr<CsvFile> ReadCsv(const std::filesystem::path& path) {
  absl::StatusOr<std::string> text = ReadTextFile(path);
  if (!text.ok()) return text.status();
  CsvFile csv;
  csv.path = path.string();
  int line_no = 0;
  bool have_header = false;
  for (absl::string_view line : absl::StrSplit(*text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    std::vector<std::string> fields;
    for (absl::string_view f : absl::StrSplit(line, ',')) {
      fields.emplace_back(absl::StripAsciiWhitespace(f));
    }
    if (!have_header) {
      csv.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != csv.header.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          path.string(), ":", line_no, ": expected ", csv.header.size(),
          " fields, found ", fields.size()));
    }
    csv.rows.push_back(std::move(fields));
    csv.line_numbers.push_back(line_no);
  }
  if (!have_header) {
    return absl::InvalidArgumentError(
        absl::StrCat(path.string(), ": missing header row"));
  }
  return csv;
}

std::string FormatCsv(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::string out = absl::StrJoin(header, ",");
  out += '\n';
  for (const auto& row : rows) {
    absl::StrAppend(&out, absl::StrJoin(row, ","), "\n");
  }
  return out;
}

absl::StatusOr<std::vector<std::pair<std::string, std::string>>> ReadKeyValues(
    const std::filesystem::path& path) {
  absl::StatusOr<CsvFile> csv = ReadCsv(path);
  if (!csv.ok()) return csv.status();
  if (csv->header.size() != 2 || csv->header[0] != "key" ||
      csv->header[1] != "value") {
    return absl::InvalidArgumentError(
        absl::StrCat(path.string(), ": header must be key,value"));
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& row : csv->rows) out.push_back({row[0], row[1]});
  return out;
}

}  // namespace mdistinct
