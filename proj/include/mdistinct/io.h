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

#ifndef MDISTINCT_IO_H_
#define MDISTINCT_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mdistinct/model.h"
#include "mdistinct/updates.h"

namespace mdistinct {

// Schema file, header attribute,kind,node,parent:
//   age,numeric,0..100,
//   marital,categorical,Any,          (root: empty parent)
//   marital,categorical,Married,Any
//   disease,sensitive,Flu,            (one row per value, in domain order)
// Attributes keep their order of first appearance; exactly one is sensitive.
absl::StatusOr<Schema> LoadSchema(const std::filesystem::path& path);
std::string FormatSchema(const Schema& schema);

// Header id,<qi names...>,<sensitive name>.
absl::StatusOr<Table> LoadMicrodata(const std::filesystem::path& path,
                                    const Schema& schema);
std::string FormatMicrodata(const Table& table, const Schema& schema);

// Header value,successor,probability. Probabilities are p/q or exact
// decimals; when some rows of a value leave it blank they share the
// remaining mass equally.
absl::StatusOr<UpdateModel> LoadUpdateModel(const std::filesystem::path& path,
                                            const Schema& schema);
std::string FormatUpdateModel(const UpdateModel& model, const Schema& schema);

// External knowledge: header id,<qi names...>.
absl::StatusOr<ExternalKnowledgeTable> LoadExternalKnowledge(
    const std::filesystem::path& path, const Schema& schema, int release_index);
std::string FormatExternalKnowledge(const ExternalKnowledgeTable& et,
                                    const Schema& schema);
// Reads et_1.csv .. et_n.csv from a directory.
absl::StatusOr<std::vector<ExternalKnowledgeTable>> LoadExternalKnowledgeDir(
    const std::filesystem::path& dir, const Schema& schema, int releases);

// release_<i>.csv: gid,id,<qi regions...>,<sensitive>,is_counterfeit
// counterfeits_<i>.csv: gid,count (groups with counterfeits only)
std::string FormatRelease(const PublishedRelease& release, const Schema& schema);
std::string FormatCounterfeitStats(const PublishedRelease& release);
absl::StatusOr<PublishedRelease> LoadRelease(const std::filesystem::path& dir,
                                             int release_index,
                                             const Schema& schema);

struct HistoryMeta {
  uint64_t seed = 0;
  int m = 2;
  std::string mode;  // m_distinct, m_distinct_star, l_diversity, m_invariance
};

// A history directory holds schema.csv, meta.csv and the per-release files.
class HistoryStore {
 public:
  explicit HistoryStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& dir() const { return dir_; }
  // Number of consecutive release_<i>.csv files starting at 1.
  int ReleaseCount() const;
  bool HasSchema() const;

  absl::StatusOr<Schema> ReadSchema() const;
  absl::Status WriteSchema(const Schema& schema) const;
  absl::StatusOr<HistoryMeta> ReadMeta() const;
  absl::Status WriteMeta(const HistoryMeta& meta) const;

  absl::Status Append(const PublishedRelease& release, const Schema& schema) const;
  absl::StatusOr<std::vector<PublishedRelease>> LoadAll(const Schema& schema) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace mdistinct

#endif  // MDISTINCT_IO_H_
