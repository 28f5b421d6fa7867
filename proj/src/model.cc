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

#include "mdistinct/model.h"

#include <algorithm>
#include <charconv>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"

namespace mdistinct {

absl::StatusOr<Hierarchy> Hierarchy::Create(std::vector<std::string> names,
                                            std::vector<int> parents) {
  if (names.size() != parents.size() || names.empty()) {
    return absl::InvalidArgumentError("hierarchy needs one parent per node");
  }
  Hierarchy h;
  const int n = static_cast<int>(names.size());
  h.children_.resize(n);
  for (int i = 0; i < n; ++i) {
    if (!h.index_.emplace(names[i], i).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate hierarchy node '", names[i], "'"));
    }
    if (parents[i] < 0) {
      if (h.root_ >= 0) {
        return absl::InvalidArgumentError(
            absl::StrCat("hierarchy has two roots: '", names[h.root_],
                         "' and '", names[i], "'"));
      }
      h.root_ = i;
    } else if (parents[i] >= n || parents[i] == i) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad parent for node '", names[i], "'"));
    } else {
      h.children_[parents[i]].push_back(i);
    }
  }
  if (h.root_ < 0) return absl::InvalidArgumentError("hierarchy has no root");
  h.names_ = std::move(names);
  h.parents_ = std::move(parents);
  h.first_leaf_.assign(n, -1);
  h.last_leaf_.assign(n, -1);

  // Iterative DFS; a node reached twice or never reached means a cycle.
  std::vector<int> visited(n, 0);
  std::vector<std::pair<int, size_t>> stack = {{h.root_, 0}};
  visited[h.root_] = 1;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (h.children_[node].empty()) {
      int leaf = static_cast<int>(h.leaf_nodes_.size());
      h.leaf_nodes_.push_back(node);
      h.first_leaf_[node] = h.last_leaf_[node] = leaf;
      stack.pop_back();
      continue;
    }
    if (next < h.children_[node].size()) {
      int child = h.children_[node][next++];
      if (visited[child]++) {
        return absl::InvalidArgumentError("hierarchy is not a tree");
      }
      stack.push_back({child, 0});
      continue;
    }
    h.first_leaf_[node] = h.first_leaf_[h.children_[node].front()];
    h.last_leaf_[node] = h.last_leaf_[h.children_[node].back()];
    stack.pop_back();
  }
  for (int i = 0; i < n; ++i) {
    if (!visited[i]) {
      return absl::InvalidArgumentError(
          absl::StrCat("node '", h.names_[i], "' is not connected to the root"));
    }
  }
  return h;
}

std::optional<int> Hierarchy::FindNode(absl::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Hierarchy::CoveringNode(int lo_leaf, int hi_leaf) const {
  int node = leaf_nodes_[lo_leaf];
  while (last_leaf_[node] < hi_leaf || first_leaf_[node] > lo_leaf) {
    node = parents_[node];
  }
  return node;
}

AttributeSchema AttributeSchema::Numeric(std::string name, int lo, int hi) {
  AttributeSchema a;
  a.name = std::move(name);
  a.kind = AttributeKind::kNumeric;
  a.lo = lo;
  a.hi = hi;
  return a;
}

AttributeSchema AttributeSchema::Categorical(
    std::string name, std::shared_ptr<const Hierarchy> tree) {
  AttributeSchema a;
  a.name = std::move(name);
  a.kind = AttributeKind::kCategorical;
  a.hierarchy = std::move(tree);
  return a;
}

absl::StatusOr<int> AttributeSchema::Encode(absl::string_view text) const {
  if (kind == AttributeKind::kNumeric) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat(name, ": '", text, "' is not an integer"));
    }
    if (v < lo || v > hi) {
      return absl::InvalidArgumentError(absl::StrCat(
          name, ": ", v, " outside domain [", lo, ", ", hi, "]"));
    }
    return v;
  }
  auto node = hierarchy->FindNode(text);
  if (!node || !hierarchy->IsLeaf(*node)) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, ": '", text, "' is not a leaf value"));
  }
  return hierarchy->first_leaf(*node);
}

std::string AttributeSchema::Decode(int code) const {
  if (kind == AttributeKind::kNumeric) return absl::StrCat(code);
  return hierarchy->name(hierarchy->leaf_node(code));
}

SensitiveDomain::SensitiveDomain(std::vector<std::string> values)
    : values_(std::move(values)) {
  for (size_t i = 0; i < values_.size(); ++i) {
    index_.emplace(values_[i], static_cast<int>(i));
  }
}

std::optional<int> SensitiveDomain::Find(absl::string_view value) const {
  auto it = index_.find(value);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool Region::Contains(std::span<const int> point) const {
  if (point.size() != dims.size()) return false;
  for (size_t j = 0; j < dims.size(); ++j) {
    if (point[j] < dims[j].lo || point[j] > dims[j].hi) return false;
  }
  return true;
}

bool Region::Covers(const Region& other) const {
  if (other.dims.size() != dims.size()) return false;
  for (size_t j = 0; j < dims.size(); ++j) {
    if (other.dims[j].lo < dims[j].lo || other.dims[j].hi > dims[j].hi) {
      return false;
    }
  }
  return true;
}

RegionBuilder::RegionBuilder(int dims) : box_(dims) {}

void RegionBuilder::Add(std::span<const int> point) {
  for (size_t j = 0; j < box_.size(); ++j) {
    if (count_ == 0) {
      box_[j] = {point[j], point[j]};
    } else {
      box_[j].lo = std::min(box_[j].lo, point[j]);
      box_[j].hi = std::max(box_[j].hi, point[j]);
    }
  }
  ++count_;
}

Region RegionBuilder::Build(const Schema& schema) const {
  Region r{box_};
  for (size_t j = 0; j < box_.size(); ++j) {
    const AttributeSchema& attr = schema.qi[j];
    if (attr.kind == AttributeKind::kCategorical) {
      int node = attr.hierarchy->CoveringNode(box_[j].lo, box_[j].hi);
      r.dims[j] = {attr.hierarchy->first_leaf(node),
                   attr.hierarchy->last_leaf(node)};
    }
  }
  return r;
}

absl::StatusOr<Region> BoundingRegion(std::span<const std::vector<int>> points,
                                      const Schema& schema) {
  if (points.empty()) return absl::InvalidArgumentError("empty group");
  RegionBuilder builder(schema.num_qi());
  for (const auto& p : points) {
    if (static_cast<int>(p.size()) != schema.num_qi()) {
      return absl::InvalidArgumentError("point arity does not match schema");
    }
    builder.Add(p);
  }
  return builder.Build(schema);
}

int64_t DimensionExtent(const Interval& dim) {
  return int64_t{dim.hi} - dim.lo + 1;
}

Rational RegionMeasure(const Region& region, const Schema& schema) {
  Rational out = 1;
  for (size_t j = 0; j < region.dims.size(); ++j) {
    Rational share(mpz_class(static_cast<long>(DimensionExtent(region.dims[j]))),
                   mpz_class(static_cast<long>(schema.qi[j].DomainSize())));
    share.canonicalize();
    out *= share;
  }
  out.canonicalize();
  return out;
}

std::string FormatRegionDim(const Interval& dim, const AttributeSchema& attr) {
  if (attr.kind == AttributeKind::kNumeric) {
    return absl::StrCat(dim.lo, "..", dim.hi);
  }
  return attr.hierarchy->name(attr.hierarchy->CoveringNode(dim.lo, dim.hi));
}

absl::StatusOr<Interval> ParseRegionDim(absl::string_view text,
                                        const AttributeSchema& attr) {
  if (attr.kind == AttributeKind::kNumeric) {
    std::vector<absl::string_view> parts = absl::StrSplit(text, "..");
    if (parts.size() != 2) {
      return absl::InvalidArgumentError(
          absl::StrCat(attr.name, ": expected lo..hi, got '", text, "'"));
    }
    Interval out;
    for (int k = 0; k < 2; ++k) {
      int& v = k == 0 ? out.lo : out.hi;
      auto [ptr, ec] =
          std::from_chars(parts[k].data(), parts[k].data() + parts[k].size(), v);
      if (ec != std::errc() || ptr != parts[k].data() + parts[k].size()) {
        return absl::InvalidArgumentError(
            absl::StrCat(attr.name, ": bad interval '", text, "'"));
      }
    }
    if (out.lo > out.hi || out.lo < attr.lo || out.hi > attr.hi) {
      return absl::InvalidArgumentError(
          absl::StrCat(attr.name, ": interval '", text, "' outside domain"));
    }
    return out;
  }
  auto node = attr.hierarchy->FindNode(text);
  if (!node) {
    return absl::InvalidArgumentError(
        absl::StrCat(attr.name, ": unknown hierarchy node '", text, "'"));
  }
  return Interval{attr.hierarchy->first_leaf(*node),
                  attr.hierarchy->last_leaf(*node)};
}

int QIGroup::CounterfeitCount() const {
  return static_cast<int>(std::count_if(members.begin(), members.end(),
                                        [](const Member& m) { return m.counterfeit; }));
}

std::vector<int> QIGroup::SensitiveValues() const {
  std::vector<int> out;
  out.reserve(members.size());
  for (const Member& m : members) out.push_back(m.sensitive);
  return out;
}

std::optional<int> PublishedRelease::FindGroupOf(absl::string_view id) const {
  for (size_t g = 0; g < groups.size(); ++g) {
    for (const Member& m : groups[g].members) {
      if (!m.counterfeit && m.id == id) return static_cast<int>(g);
    }
  }
  return std::nullopt;
}

int PublishedRelease::RealRecordCount() const {
  int n = 0;
  for (const QIGroup& g : groups) n += g.RealCount();
  return n;
}

int PublishedRelease::CounterfeitCount() const {
  int n = 0;
  for (const auto& [gid, count] : counterfeit_stats) n += count;
  return n;
}

ExternalKnowledgeTable ExternalKnowledgeTable::FromTable(const Table& table,
                                                         int release_index) {
  ExternalKnowledgeTable et;
  et.release_index = release_index;
  for (const Record& r : table) et.rows[r.id] = r.qi;
  return et;
}

absl::StatusOr<PublishedRelease> Generalize(int release_index,
                                            const std::vector<GroupDraft>& drafts,
                                            const Table& table,
                                            const Schema& schema) {
  PublishedRelease release;
  release.release_index = release_index;
  int next_counterfeit = 1;
  for (size_t g = 0; g < drafts.size(); ++g) {
    const GroupDraft& draft = drafts[g];
    if (draft.records.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("group ", g + 1, ": empty group"));
    }
    QIGroup group;
    group.gid = static_cast<int>(g) + 1;
    RegionBuilder builder(schema.num_qi());
    std::vector<int> rows = draft.records;
    std::sort(rows.begin(), rows.end(),
              [&](int a, int b) { return table[a].id < table[b].id; });
    for (int idx : rows) {
      builder.Add(table[idx].qi);
      group.members.push_back({table[idx].id, table[idx].sensitive, false});
    }
    for (int value : draft.counterfeit_values) {
      group.members.push_back(
          {absl::StrCat("c", next_counterfeit++), value, true});
    }
    group.region = builder.Build(schema);
    if (!draft.counterfeit_values.empty()) {
      release.counterfeit_stats[group.gid] =
          static_cast<int>(draft.counterfeit_values.size());
    }
    release.groups.push_back(std::move(group));
  }
  return release;
}

}  // namespace mdistinct
