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

#include "mdistinct/baselines.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "mdistinct/static_partition.h"

namespace mdistinct {
namespace {

Table SortedById(const Table& input) {
  Table table = input;
  std::sort(table.begin(), table.end(),
            [](const Record& a, const Record& b) { return a.id < b.id; });
  return table;
}

}  // namespace

absl::StatusOr<PublishedRelease> PublishLDiversity(const Table& input,
                                                   const Schema& schema,
                                                   int release_index, int l,
                                                   uint64_t seed) {
  if (l < 2) return absl::InvalidArgumentError("l must be at least 2");
  Table table = SortedById(input);
  std::vector<int> rows(table.size());
  for (size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int>(i);
  UpdateModel identity = UpdateModel::Identity(schema.sensitive.size());
  StaticPartitionOptions options;
  options.m = l;
  options.allow_counterfeits = false;
  Rng rng(DeriveSeed(seed, static_cast<uint64_t>(release_index)));
  absl::StatusOr<std::vector<GroupDraft>> drafts =
      StaticPartition(rows, table, schema, identity, options, rng);
  if (!drafts.ok()) return drafts.status();
  return Generalize(release_index, *drafts, table, schema);
}

MInvarianceState MInvarianceState::FromRelease(const PublishedRelease& latest,
                                               int m, uint64_t seed) {
  MInvarianceState state;
  state.m = m;
  state.seed = seed;
  state.release_count = latest.release_index;
  for (const QIGroup& g : latest.groups) {
    std::vector<int> values = g.SensitiveValues();
    std::sort(values.begin(), values.end());
    for (const Member& member : g.members) {
      if (!member.counterfeit) state.signature[member.id] = values;
    }
  }
  return state;
}

absl::StatusOr<MInvarianceOutput> PublishMInvariance(const Table& input,
                                                     const Schema& schema,
                                                     MInvarianceState& state) {
  if (state.m < 2) return absl::InvalidArgumentError("m must be at least 2");
  Table table = SortedById(input);
  const int release_index = state.release_count + 1;
  Rng rng(DeriveSeed(state.seed, static_cast<uint64_t>(release_index)));

  MInvarianceOutput out;
  // signature -> value -> rows, kept in id order.
  std::map<std::vector<int>, std::map<int, std::vector<int>>> buckets;
  std::vector<int> fresh;
  for (size_t row = 0; row < table.size(); ++row) {
    const Record& r = table[row];
    auto it = state.signature.find(r.id);
    if (it == state.signature.end()) {
      fresh.push_back(static_cast<int>(row));
      continue;
    }
    const std::vector<int>& sig = it->second;
    if (!std::binary_search(sig.begin(), sig.end(), r.sensitive)) {
      out.invalidated.push_back(r.id);
      fresh.push_back(static_cast<int>(row));
      continue;
    }
    buckets[sig][r.sensitive].push_back(static_cast<int>(row));
  }

  std::vector<GroupDraft> drafts;
  for (auto& [sig, by_value] : buckets) {
    size_t groups = 0;
    for (auto& [value, rows] : by_value) {
      std::stable_sort(rows.begin(), rows.end(), [&](int a, int b) {
        return table[a].qi[0] < table[b].qi[0];
      });
      groups = std::max(groups, rows.size());
    }
    for (size_t g = 0; g < groups; ++g) {
      GroupDraft draft;
      for (int value : sig) {
        const std::vector<int>& rows = by_value[value];
        if (g < rows.size()) {
          draft.records.push_back(rows[g]);
        } else {
          draft.counterfeit_values.push_back(value);
        }
      }
      drafts.push_back(std::move(draft));
    }
  }

  UpdateModel identity = UpdateModel::Identity(schema.sensitive.size());
  StaticPartitionOptions options;
  options.m = state.m;
  options.allow_counterfeits = true;
  absl::StatusOr<std::vector<GroupDraft>> extra =
      StaticPartition(fresh, table, schema, identity, options, rng);
  if (!extra.ok()) return extra.status();
  for (GroupDraft& g : *extra) drafts.push_back(std::move(g));

  absl::StatusOr<PublishedRelease> release =
      Generalize(release_index, drafts, table, schema);
  if (!release.ok()) return release.status();
  int cumulative = state.cumulative_invalidated +
                   static_cast<int>(out.invalidated.size());
  state = MInvarianceState::FromRelease(*release, state.m, state.seed);
  state.cumulative_invalidated = cumulative;
  out.release = *std::move(release);
  return out;
}

}  // namespace mdistinct
