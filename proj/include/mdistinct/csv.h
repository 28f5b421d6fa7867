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

#ifndef MDISTINCT_CSV_H_
#define MDISTINCT_CSV_H_

#include <filesystem>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace mdistinct {

// Plain comma-separated text: no quoting, fields never contain commas.
struct CsvFile {
  std::string path;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;  // 1-based source line of each row

  // Index of a header column, or -1.
  int Column(absl::string_view name) const;
};

absl::StatusOr<CsvFile> ReadCsv(const std::filesystem::path& path);

// Rows must match the header width.
std::string FormatCsv(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

absl::Status WriteTextFile(const std::filesystem::path& path,
                           absl::string_view contents);
absl::StatusOr<std::string> ReadTextFile(const std::filesystem::path& path);

// key,value files (meta.csv, scenario configs).
absl::StatusOr<std::vector<std::pair<std::string, std::string>>> ReadKeyValues(
    const std::filesystem::path& path);

}  // namespace mdistinct

#endif  // MDISTINCT_CSV_H_
