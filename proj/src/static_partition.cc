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

#include "mdistinct/static_partition.h"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "absl/strings/str_cat.h"

namespace mdistinct {
namespace {

struct Context {
  const Table& table;
  const Schema& schema;
  const std::vector<int>& key;  // per sensitive code
  int m;
};

int KeyOf(const Context& ctx, int row) {
  return ctx.key[ctx.table[row].sensitive];
}

bool Eligible(const Context& ctx, const std::vector<int>& rows) {
  if (static_cast<int>(rows.size()) < ctx.m) return false;
  std::map<int, int> freq;
  int fmax = 0;
  for (int r : rows) fmax = std::max(fmax, ++freq[KeyOf(ctx, r)]);
  return int64_t{fmax} * ctx.m <= static_cast<int64_t>(rows.size());
}

// Deals rows into `groups` groups so equal keys land in different groups:
// rarest keys first, equal keys contiguous, then round-robin.
std::vector<std::vector<int>> RoundRobin(const Context& ctx,
                                         std::vector<int> rows, int groups) {
  std::map<int, int> freq;
  for (int r : rows) ++freq[KeyOf(ctx, r)];
  std::sort(rows.begin(), rows.end(), [&](int a, int b) {
    int ka = KeyOf(ctx, a), kb = KeyOf(ctx, b);
    if (freq[ka] != freq[kb]) return freq[ka] < freq[kb];
    if (ka != kb) return ka < kb;
    return ctx.table[a].id < ctx.table[b].id;
  });
  std::vector<std::vector<int>> out(groups);
  for (size_t i = 0; i < rows.size(); ++i) out[i % groups].push_back(rows[i]);
  return out;
}

double NormalizedWidth(const Context& ctx, const std::vector<int>& rows, int j) {
  int lo = ctx.table[rows[0]].qi[j], hi = lo;
  for (int r : rows) {
    lo = std::min(lo, ctx.table[r].qi[j]);
    hi = std::max(hi, ctx.table[r].qi[j]);
  }
  return static_cast<double>(hi - lo) /
         static_cast<double>(ctx.schema.qi[j].DomainSize());
}

void Split(const Context& ctx, std::vector<int> rows,
           std::vector<std::vector<int>>& leaves) {
  const int dims = ctx.schema.num_qi();
  std::vector<std::pair<double, int>> order;
  for (int j = 0; j < dims; ++j) order.push_back({-NormalizedWidth(ctx, rows, j), j});
  std::sort(order.begin(), order.end());
  for (const auto& [neg_width, j] : order) {
    if (neg_width == 0) break;
    std::vector<int> sorted = rows;
    std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
      const Record& ra = ctx.table[a];
      const Record& rb = ctx.table[b];
      if (ra.qi[j] != rb.qi[j]) return ra.qi[j] < rb.qi[j];
      return ra.id < rb.id;
    });
    size_t half = sorted.size() / 2;
    std::vector<int> left(sorted.begin(), sorted.begin() + half);
    std::vector<int> right(sorted.begin() + half, sorted.end());
    if (Eligible(ctx, left) && Eligible(ctx, right)) {
      Split(ctx, std::move(left), leaves);
      Split(ctx, std::move(right), leaves);
      return;
    }
  }
  leaves.push_back(std::move(rows));
}

}  // namespace

std::vector<int> PartitionKeys(const UpdateModel& model, bool star) {
  const int n = model.domain_size();
  std::vector<int> key(n);
  std::iota(key.begin(), key.end(), 0);
  if (!star) return key;
  // Union-find over overlapping CUS; component named by its smallest value.
  std::function<int(int)> find = [&](int x) {
    return key[x] == x ? x : key[x] = find(key[x]);
  };
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (model.cus(a).Intersects(model.cus(b))) {
        int ra = find(a), rb = find(b);
        if (ra != rb) key[std::max(ra, rb)] = std::min(ra, rb);
      }
    }
  }
  for (int a = 0; a < n; ++a) key[a] = find(a);
  return key;
}

absl::StatusOr<std::vector<GroupDraft>> StaticPartition(
    const std::vector<int>& rows, const Table& table, const Schema& schema,
    const UpdateModel& model, const StaticPartitionOptions& options, Rng& rng) {
  std::vector<GroupDraft> drafts;
  if (rows.empty()) return drafts;
  std::vector<int> key = PartitionKeys(model, options.star);
  std::map<int, std::vector<int>> values_of_key;
  for (int v = 0; v < model.domain_size(); ++v) values_of_key[key[v]].push_back(v);
  if (static_cast<int>(values_of_key.size()) < options.m) {
    return absl::FailedPreconditionError(absl::StrCat(
        "sensitive domain has ", values_of_key.size(),
        options.star ? " disjoint update classes" : " values", ", fewer than m=",
        options.m));
  }
  Context ctx{table, schema, key, options.m};

  if (!Eligible(ctx, rows)) {
    if (!options.allow_counterfeits) {
      return absl::FailedPreconditionError(absl::StrCat(
          "records are not ", options.m, "-eligible"));
    }
    std::map<int, int> freq;
    int fmax = 0;
    for (int r : rows) fmax = std::max(fmax, ++freq[KeyOf(ctx, r)]);
    for (std::vector<int>& group : RoundRobin(ctx, rows, fmax)) {
      GroupDraft draft;
      std::set<int> present;
      for (int r : group) present.insert(KeyOf(ctx, r));
      std::vector<int> spare;
      for (const auto& [k, values] : values_of_key) {
        if (!present.contains(k)) spare.push_back(k);
      }
      rng.Shuffle(spare);
      int missing = options.m - static_cast<int>(group.size());
      for (int i = 0; i < missing; ++i) {
        const std::vector<int>& values = values_of_key[spare[i]];
        draft.counterfeit_values.push_back(values[rng.Uniform(values.size())]);
      }
      draft.records = std::move(group);
      drafts.push_back(std::move(draft));
    }
    return drafts;
  }

  std::vector<std::vector<int>> leaves;
  Split(ctx, rows, leaves);
  for (std::vector<int>& leaf : leaves) {
    int groups = static_cast<int>(leaf.size()) / options.m;
    for (std::vector<int>& group : RoundRobin(ctx, std::move(leaf), groups)) {
      drafts.push_back({std::move(group), {}});
    }
  }
  return drafts;
}

}  // namespace mdistinct
