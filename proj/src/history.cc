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

#include <map>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "mdistinct/csv.h"
#include "mdistinct/io.h"

namespace mdistinct {
namespace {

std::string ReleaseFile(int i) { return absl::StrCat("release_", i, ".csv"); }
std::string StatsFile(int i) { return absl::StrCat("counterfeits_", i, ".csv"); }

std::vector<std::string> ReleaseHeader(const Schema& schema) {
  std::vector<std::string> header = {"gid", "id"};
  for (const AttributeSchema& a : schema.qi) header.push_back(a.name);
  header.push_back(schema.sensitive_name);
  header.push_back("is_counterfeit");
  return header;
}

}  // namespace

std::string FormatRelease(const PublishedRelease& release, const Schema& schema) {
  std::vector<std::vector<std::string>> rows;
  for (const QIGroup& g : release.groups) {
    std::vector<std::string> region;
    for (int j = 0; j < schema.num_qi(); ++j) {
      region.push_back(FormatRegionDim(g.region.dims[j], schema.qi[j]));
    }
    for (const Member& m : g.members) {
      std::vector<std::string> row = {absl::StrCat(g.gid), m.id};
      row.insert(row.end(), region.begin(), region.end());
      row.push_back(schema.sensitive.name(m.sensitive));
      row.push_back(m.counterfeit ? "1" : "0");
      rows.push_back(std::move(row));
    }
  }
  return FormatCsv(ReleaseHeader(schema), rows);
}

std::string FormatCounterfeitStats(const PublishedRelease& release) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [gid, count] : release.counterfeit_stats) {
    if (count > 0) rows.push_back({absl::StrCat(gid), absl::StrCat(count)});
  }
  return FormatCsv({"gid", "count"}, rows);
}

absl::StatusOr<PublishedRelease> LoadRelease(const std::filesystem::path& dir,
                                             int release_index,
                                             const Schema& schema) {
  absl::StatusOr<CsvFile> csv = ReadCsv(dir / ReleaseFile(release_index));
  if (!csv.ok()) return csv.status();
  if (csv->header != ReleaseHeader(schema)) {
    return absl::InvalidArgumentError(
        absl::StrCat(csv->path, ": header does not match the schema"));
  }
  PublishedRelease release;
  release.release_index = release_index;
  std::map<int, size_t> group_of_gid;
  const int q = schema.num_qi();
  for (size_t r = 0; r < csv->rows.size(); ++r) {
    const auto& row = csv->rows[r];
    auto fail = [&](absl::string_view what) {
      return absl::InvalidArgumentError(
          absl::StrCat(csv->path, ":", csv->line_numbers[r], ": ", what));
    };
    int gid = 0;
    if (!absl::SimpleAtoi(row[0], &gid) || gid <= 0) return fail("bad gid");
    Region region;
    for (int j = 0; j < q; ++j) {
      absl::StatusOr<Interval> dim = ParseRegionDim(row[2 + j], schema.qi[j]);
      if (!dim.ok()) return fail(dim.status().message());
      region.dims.push_back(*dim);
    }
    std::optional<int> value = schema.sensitive.Find(row[2 + q]);
    if (!value) return fail(absl::StrCat("unknown sensitive value '", row[2 + q], "'"));
    const std::string& flag = row[3 + q];
    if (flag != "0" && flag != "1") return fail("is_counterfeit must be 0 or 1");

    auto [it, inserted] = group_of_gid.emplace(gid, release.groups.size());
    if (inserted) {
      release.groups.push_back({gid, region, {}});
    } else if (!(release.groups[it->second].region == region)) {
      return fail(absl::StrCat("group ", gid, " has two regions"));
    }
    release.groups[it->second].members.push_back({row[1], *value, flag == "1"});
  }

  absl::StatusOr<CsvFile> stats = ReadCsv(dir / StatsFile(release_index));
  if (!stats.ok()) return stats.status();
  if (stats->header != std::vector<std::string>{"gid", "count"}) {
    return absl::InvalidArgumentError(
        absl::StrCat(stats->path, ": header must be gid,count"));
  }
  for (size_t r = 0; r < stats->rows.size(); ++r) {
    int gid = 0, count = 0;
    if (!absl::SimpleAtoi(stats->rows[r][0], &gid) ||
        !absl::SimpleAtoi(stats->rows[r][1], &count) || count < 0) {
      return absl::InvalidArgumentError(absl::StrCat(
          stats->path, ":", stats->line_numbers[r], ": bad row"));
    }
    if (count > 0) release.counterfeit_stats[gid] = count;
  }
  return release;
}

int HistoryStore::ReleaseCount() const {
  int n = 0;
  while (std::filesystem::exists(dir_ / ReleaseFile(n + 1))) ++n;
  return n;
}

bool HistoryStore::HasSchema() const {
  return std::filesystem::exists(dir_ / "schema.csv");
}

absl::StatusOr<Schema> HistoryStore::ReadSchema() const {
  return LoadSchema(dir_ / "schema.csv");
}

absl::Status HistoryStore::WriteSchema(const Schema& schema) const {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot create ", dir_.string(), ": ", ec.message()));
  }
  return WriteTextFile(dir_ / "schema.csv", FormatSchema(schema));
}

absl::StatusOr<HistoryMeta> HistoryStore::ReadMeta() const {
  auto kv = ReadKeyValues(dir_ / "meta.csv");
  if (!kv.ok()) return kv.status();
  HistoryMeta meta;
  for (const auto& [key, value] : *kv) {
    bool ok = true;
    if (key == "seed") {
      ok = absl::SimpleAtoi(value, &meta.seed);
    } else if (key == "m") {
      ok = absl::SimpleAtoi(value, &meta.m);
    } else if (key == "mode") {
      meta.mode = value;
    }
    if (!ok) {
      return absl::InvalidArgumentError(
          absl::StrCat(dir_.string(), "/meta.csv: bad value for ", key));
    }
  }
  return meta;
}

absl::Status HistoryStore::WriteMeta(const HistoryMeta& meta) const {
  return WriteTextFile(
      dir_ / "meta.csv",
      FormatCsv({"key", "value"}, {{"seed", absl::StrCat(meta.seed)},
                                   {"m", absl::StrCat(meta.m)},
                                   {"mode", meta.mode}}));
}

absl::Status HistoryStore::Append(const PublishedRelease& release,
                                  const Schema& schema) const {
  if (release.release_index != ReleaseCount() + 1) {
    return absl::FailedPreconditionError(absl::StrCat(
        "history at ", dir_.string(), " expects release ", ReleaseCount() + 1,
        ", got ", release.release_index));
  }
  if (absl::Status s = WriteTextFile(dir_ / StatsFile(release.release_index),
                                     FormatCounterfeitStats(release));
      !s.ok()) {
    return s;
  }
  // The release file goes last: its presence marks the release complete.
  return WriteTextFile(dir_ / ReleaseFile(release.release_index),
                       FormatRelease(release, schema));
}

absl::StatusOr<std::vector<PublishedRelease>> HistoryStore::LoadAll(
    const Schema& schema) const {
  std::vector<PublishedRelease> out;
  const int n = ReleaseCount();
  for (int i = 1; i <= n; ++i) {
    absl::StatusOr<PublishedRelease> r = LoadRelease(dir_, i, schema);
    if (!r.ok()) return r.status();
    out.push_back(*std::move(r));
  }
  return out;
}

}  // namespace mdistinct
