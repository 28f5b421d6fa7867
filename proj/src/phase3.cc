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

#include <algorithm>
#include <map>

#include "absl/strings/str_cat.h"
#include "mdistinct/engine.h"

namespace mdistinct {
namespace {

// Extent of codes lo..hi on attribute j, categorical ranges widened to the
// covering hierarchy node.
int64_t SnappedExtent(const AttributeSchema& attr, int lo, int hi) {
  if (attr.kind == AttributeKind::kCategorical) {
    return attr.hierarchy->LeafCount(attr.hierarchy->CoveringNode(lo, hi));
  }
  return int64_t{hi} - lo + 1;
}

// Slots are table rows (>= 0) or counterfeit placeholders (< 0).
using Entries = std::vector<std::vector<int>>;

class Splitter {
 public:
  Splitter(const Bucket& bucket, const Table& table, const Schema& schema,
           Phase3Stats* stats)
      : bucket_(bucket), table_(table), schema_(schema), stats_(stats),
        domain_(bucket.signature().empty() ? 0
                                           : bucket.signature()[0].universe()) {}

  absl::Status Run(Entries entries, std::vector<std::vector<int>>& groups);

 private:
  struct Candidate {
    __int128 score = 0;
    int attribute = -1;
    int delta_a = 0;
    std::vector<std::vector<int>> transversals;  // slot per entry
  };

  int Value(int slot) const { return slot >= 0 ? table_[slot].sensitive : -1; }
  int Qi(int slot, int j) const { return table_[slot].qi[j]; }

  std::vector<std::vector<int>> PickTransversals(const Entries& entries, int j,
                                                 int want);
  void Evaluate(const Entries& entries, int j,
                const std::vector<std::vector<int>>& picks,
                const std::vector<int64_t>& parent_extent, Candidate& best);
  absl::Status Fallback(const Entries& entries,
                        std::vector<std::vector<int>>& groups);

  const Bucket& bucket_;
  const Table& table_;
  const Schema& schema_;
  Phase3Stats* stats_;
  int domain_;
};

std::vector<std::vector<int>> Splitter::PickTransversals(const Entries& entries,
                                                         int j, int want) {
  const int k = static_cast<int>(entries.size());
  // One queue over all members: real ones sorted on attribute j, then
  // counterfeits, which carry no QI values.
  std::vector<std::pair<int, int>> queue;  // (slot, entry)
  for (int e = 0; e < k; ++e) {
    for (int s : entries[e]) queue.push_back({s, e});
  }
  std::stable_sort(queue.begin(), queue.end(), [&](const auto& a, const auto& b) {
    bool ra = a.first >= 0, rb = b.first >= 0;
    if (ra != rb) return ra;
    if (!ra) return a.first > b.first;
    if (Qi(a.first, j) != Qi(b.first, j)) return Qi(a.first, j) < Qi(b.first, j);
    return table_[a.first].id < table_[b.first].id;
  });
  const int n = static_cast<int>(queue.size());
  std::vector<int> next(n + 1), prev(n + 1);
  // Position n is the list head sentinel.
  for (int i = 0; i < n; ++i) {
    next[i] = i + 1 < n ? i + 1 : n;
    prev[i] = i > 0 ? i - 1 : n;
  }
  next[n] = n > 0 ? 0 : n;
  prev[n] = n > 0 ? n - 1 : n;

  std::vector<char> filled(k, 0), used(domain_, 0);
  std::vector<int> chosen(k, -1);
  int64_t steps = 0;
  auto dfs = [&](auto&& self, int pos, int depth) -> bool {
    if (depth == k) return true;
    for (; pos != n; pos = next[pos]) {
      if (++steps > kPickOutCap) return false;
      auto [slot, e] = queue[pos];
      if (filled[e]) continue;
      int v = Value(slot);
      if (v >= 0 && used[v]) continue;
      filled[e] = 1;
      if (v >= 0) used[v] = 1;
      chosen[e] = pos;
      if (self(self, next[pos], depth + 1)) return true;
      filled[e] = 0;
      if (v >= 0) used[v] = 0;
      if (steps > kPickOutCap) return false;
    }
    return false;
  };

  std::vector<std::vector<int>> out;
  while (static_cast<int>(out.size()) < want) {
    steps = 0;
    std::fill(filled.begin(), filled.end(), 0);
    std::fill(used.begin(), used.end(), 0);
    if (!dfs(dfs, next[n], 0)) break;
    std::vector<int> transversal(k);
    for (int e = 0; e < k; ++e) {
      int pos = chosen[e];
      transversal[e] = queue[pos].first;
      next[prev[pos]] = next[pos];
      prev[next[pos]] = prev[pos];
    }
    out.push_back(std::move(transversal));
  }
  return out;
}

void Splitter::Evaluate(const Entries& entries, int j,
                        const std::vector<std::vector<int>>& picks,
                        const std::vector<int64_t>& parent_extent,
                        Candidate& best) {
  const int k = static_cast<int>(entries.size());
  const int q = schema_.num_qi();
  const int delta = static_cast<int>(entries[0].size());
  __int128 denom = 1;
  for (int64_t ext : parent_extent) denom *= ext;

  // Child B starts as the whole node; transversals move into A one by one.
  std::vector<std::map<int, int>> b_values(q);
  std::vector<int> b_freq(domain_, 0), a_freq(domain_, 0);
  std::vector<int> b_entry_real(k, 0), a_entry_real(k, 0);
  int b_real = 0, a_real = 0, a_fmax = 0;
  for (int e = 0; e < k; ++e) {
    for (int s : entries[e]) {
      if (s < 0) continue;
      ++b_real;
      ++b_entry_real[e];
      ++b_freq[Value(s)];
      for (int d = 0; d < q; ++d) ++b_values[d][Qi(s, d)];
    }
  }
  std::vector<int> b_count_of_freq(delta + 2, 0);
  int b_fmax = 0;
  for (int v = 0; v < domain_; ++v) {
    ++b_count_of_freq[b_freq[v]];
    b_fmax = std::max(b_fmax, b_freq[v]);
  }
  std::vector<Interval> a_box(q);

  for (size_t t = 0; t < picks.size(); ++t) {
    for (int e = 0; e < k; ++e) {
      int s = picks[t][e];
      if (s < 0) continue;
      int v = Value(s);
      --b_count_of_freq[b_freq[v]];
      --b_freq[v];
      ++b_count_of_freq[b_freq[v]];
      while (b_fmax > 0 && b_count_of_freq[b_fmax] == 0) --b_fmax;
      a_fmax = std::max(a_fmax, ++a_freq[v]);
      --b_real;
      --b_entry_real[e];
      ++a_entry_real[e];
      for (int d = 0; d < q; ++d) {
        int x = Qi(s, d);
        auto it = b_values[d].find(x);
        if (--it->second == 0) b_values[d].erase(it);
        if (a_real == 0) {
          a_box[d] = {x, x};
        } else {
          a_box[d].lo = std::min(a_box[d].lo, x);
          a_box[d].hi = std::max(a_box[d].hi, x);
        }
      }
      ++a_real;
    }
    const int delta_a = static_cast<int>(t) + 1;
    const int delta_b = delta - delta_a;
    if (delta_b < 1 || a_real == 0 || b_real == 0) continue;
    // Every group cut from a child must hold a real record: some value or
    // some entry of real records has to fill all delta_child groups.
    auto covered = [&](int fmax, const std::vector<int>& entry_real, int dc) {
      if (fmax == dc) return true;
      return std::any_of(entry_real.begin(), entry_real.end(),
                         [dc](int r) { return r == dc; });
    };
    if (b_fmax > delta_b) continue;
    if (!covered(a_fmax, a_entry_real, delta_a)) continue;
    if (!covered(b_fmax, b_entry_real, delta_b)) continue;

    __int128 score = 0;
    for (int d = 0; d < q; ++d) {
      const AttributeSchema& attr = schema_.qi[d];
      __int128 weight = denom / parent_extent[d];
      int64_t la = SnappedExtent(attr, a_box[d].lo, a_box[d].hi);
      int64_t lb = SnappedExtent(attr, b_values[d].begin()->first,
                                 b_values[d].rbegin()->first);
      score += weight * (__int128{a_real} * la + __int128{b_real} * lb);
    }
    if (best.attribute < 0 || score < best.score) {
      best.score = score;
      best.attribute = j;
      best.delta_a = delta_a;
      best.transversals.assign(picks.begin(), picks.begin() + delta_a);
    }
  }
}

absl::Status Splitter::Run(Entries entries,
                           std::vector<std::vector<int>>& groups) {
  const int k = static_cast<int>(entries.size());
  const int delta = static_cast<int>(entries[0].size());
  if (delta == 1) {
    std::vector<int> group(k);
    for (int e = 0; e < k; ++e) group[e] = entries[e][0];
    groups.push_back(std::move(group));
    return absl::OkStatus();
  }
  const int q = schema_.num_qi();
  std::vector<int64_t> parent_extent(q);
  {
    std::vector<Interval> box(q);
    bool first = true;
    for (const auto& entry : entries) {
      for (int s : entry) {
        if (s < 0) continue;
        for (int d = 0; d < q; ++d) {
          int x = Qi(s, d);
          if (first) {
            box[d] = {x, x};
          } else {
            box[d].lo = std::min(box[d].lo, x);
            box[d].hi = std::max(box[d].hi, x);
          }
        }
        first = false;
      }
    }
    for (int d = 0; d < q; ++d) {
      parent_extent[d] = SnappedExtent(schema_.qi[d], box[d].lo, box[d].hi);
    }
  }

  Candidate best;
  for (int j = 0; j < q; ++j) {
    std::vector<std::vector<int>> picks = PickTransversals(entries, j, delta - 1);
    Evaluate(entries, j, picks, parent_extent, best);
  }
  if (best.attribute < 0) {
    if (stats_ != nullptr) ++stats_->fallbacks;
    return Fallback(entries, groups);
  }
  if (stats_ != nullptr) ++stats_->splits;

  Entries a(k), b(k);
  for (const auto& t : best.transversals) {
    for (int e = 0; e < k; ++e) a[e].push_back(t[e]);
  }
  for (int e = 0; e < k; ++e) {
    std::vector<int> mine = a[e];
    std::sort(mine.begin(), mine.end());
    for (int s : entries[e]) {
      if (!std::binary_search(mine.begin(), mine.end(), s)) b[e].push_back(s);
    }
  }
  if (absl::Status s = Run(std::move(a), groups); !s.ok()) return s;
  return Run(std::move(b), groups);
}

// Peels perfect matchings off a regular bipartite multigraph: entries plus
// dummy nodes on the left, distinct values plus one node per counterfeit on
// the right. Dummies soak up the degree each right node lacks, so the graph
// is delta-regular and decomposes into delta perfect matchings; each one
// restricted to the entries is a group with distinct values.
absl::Status Splitter::Fallback(const Entries& entries,
                                std::vector<std::vector<int>>& groups) {
  const int k = static_cast<int>(entries.size());
  const int delta = static_cast<int>(entries[0].size());
  std::map<int, int> right_of_value;
  int num_right = 0;
  struct Edge {
    int left, right, slot;
    bool alive;
  };
  std::vector<Edge> edges;
  for (int e = 0; e < k; ++e) {
    std::vector<int> order = entries[e];
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
      bool rx = x >= 0, ry = y >= 0;
      if (rx != ry) return rx;
      if (!rx) return x > y;
      if (Qi(x, 0) != Qi(y, 0)) return Qi(x, 0) < Qi(y, 0);
      return table_[x].id < table_[y].id;
    });
    for (int s : order) {
      int r;
      if (s >= 0) {
        auto [it, inserted] = right_of_value.emplace(Value(s), num_right);
        if (inserted) ++num_right;
        r = it->second;
      } else {
        r = num_right++;
      }
      edges.push_back({e, r, s, true});
    }
  }
  std::vector<int> degree(num_right, 0);
  for (const Edge& edge : edges) ++degree[edge.right];
  int left = k;
  int dummy_fill = 0;
  for (int r = 0; r < num_right; ++r) {
    for (int missing = delta - degree[r]; missing > 0; --missing) {
      if (dummy_fill == 0) {
        ++left;
        dummy_fill = delta;
      }
      edges.push_back({left - 1, r, -1, true});
      --dummy_fill;
    }
  }
  if (left != num_right || dummy_fill != 0) {
    return absl::InternalError("phase 3 fallback: degree bookkeeping failed");
  }
  std::vector<std::vector<int>> adj(left);
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    adj[edges[i].left].push_back(i);
  }

  for (int round = 0; round < delta; ++round) {
    std::vector<int> match_right(num_right, -1);  // edge index
    std::vector<char> seen(num_right);
    auto augment = [&](auto&& self, int l) -> bool {
      for (int id : adj[l]) {
        const Edge& edge = edges[id];
        if (!edge.alive || seen[edge.right]) continue;
        seen[edge.right] = 1;
        int holder = match_right[edge.right];
        if (holder < 0 || self(self, edges[holder].left)) {
          match_right[edge.right] = id;
          return true;
        }
      }
      return false;
    };
    for (int l = 0; l < left; ++l) {
      std::fill(seen.begin(), seen.end(), 0);
      if (!augment(augment, l)) {
        return absl::InternalError("phase 3 fallback: no perfect matching");
      }
    }
    std::vector<int> group(k, 0);
    for (int r = 0; r < num_right; ++r) {
      Edge& edge = edges[match_right[r]];
      edge.alive = false;
      if (edge.left < k) group[edge.left] = edge.slot;
    }
    groups.push_back(std::move(group));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<Rational> SplitScore(const std::vector<int>& parent,
                                    const std::vector<int>& child_a,
                                    const std::vector<int>& child_b,
                                    const Table& table, const Schema& schema) {
  if (child_a.empty() || child_b.empty()) {
    return absl::InvalidArgumentError("split with an empty child");
  }
  auto extents = [&](const std::vector<int>& rows) {
    std::vector<int64_t> out;
    for (int d = 0; d < schema.num_qi(); ++d) {
      int lo = table[rows[0]].qi[d], hi = lo;
      for (int r : rows) {
        lo = std::min(lo, table[r].qi[d]);
        hi = std::max(hi, table[r].qi[d]);
      }
      out.push_back(SnappedExtent(schema.qi[d], lo, hi));
    }
    return out;
  };
  std::vector<int64_t> whole = extents(parent);
  Rational score = 0;
  for (const auto* child : {&child_a, &child_b}) {
    std::vector<int64_t> ext = extents(*child);
    Rational sum = 0;
    for (int d = 0; d < schema.num_qi(); ++d) {
      Rational share(static_cast<long>(ext[d]), static_cast<long>(whole[d]));
      share.canonicalize();
      sum += share;
    }
    score += static_cast<long>(child->size()) * sum;
  }
  score.canonicalize();
  return score;
}

absl::StatusOr<std::vector<GroupDraft>> Phase3Split(const Bucket& bucket,
                                                    const Table& table,
                                                    const Schema& schema,
                                                    Rng& rng,
                                                    Phase3Stats* stats) {
  const int k = bucket.num_entries();
  if (bucket.real_count() == 0) {
    return absl::InvalidArgumentError("bucket without real records");
  }
  const int delta = bucket.Delta();
  Entries entries(k);
  int next_counterfeit = -1;
  for (int e = 0; e < k; ++e) {
    if (bucket.EntrySize(e) != delta) {
      return absl::InvalidArgumentError("bucket is not balanced");
    }
    entries[e] = bucket.entries()[e];
    for (int c = 0; c < bucket.counterfeits()[e]; ++c) {
      entries[e].push_back(next_counterfeit--);
    }
  }
  std::vector<std::vector<int>> groups;
  Splitter splitter(bucket, table, schema, stats);
  if (absl::Status s = splitter.Run(std::move(entries), groups); !s.ok()) {
    return s;
  }

  std::vector<GroupDraft> drafts;
  const int domain = bucket.signature()[0].universe();
  for (const auto& group : groups) {
    GroupDraft draft;
    std::vector<char> used(domain, 0);
    for (int s : group) {
      if (s < 0) continue;
      int v = table[s].sensitive;
      if (used[v]) return absl::InternalError("phase 3 produced a duplicate value");
      used[v] = 1;
      draft.records.push_back(s);
    }
    if (draft.records.empty()) {
      return absl::InternalError("phase 3 produced a group without real records");
    }
    for (int e = 0; e < k; ++e) {
      if (group[e] >= 0) continue;
      std::vector<int> options;
      for (int v : bucket.signature()[e].Elements()) {
        if (!used[v]) options.push_back(v);
      }
      if (options.empty()) {
        return absl::FailedPreconditionError("counterfeit value exhaustion");
      }
      int v = options[rng.Uniform(options.size())];
      used[v] = 1;
      draft.counterfeit_values.push_back(v);
    }
    drafts.push_back(std::move(draft));
  }
  return drafts;
}

}  // namespace mdistinct
