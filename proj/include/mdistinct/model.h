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

#ifndef MDISTINCT_MODEL_H_
#define MDISTINCT_MODEL_H_

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mdistinct/rational.h"
#include "absl/strings/string_view.h"

namespace mdistinct {

enum class AttributeKind { kNumeric, kCategorical };

// Rooted tree over the values of a categorical attribute. Leaves are numbered
// in depth-first order (children visited in insertion order), so every
// subtree covers a contiguous run of leaf indices.
class Hierarchy {
 public:
  // parents[i] is the parent of node i, or -1 for the single root.
  static absl::StatusOr<Hierarchy> Create(std::vector<std::string> names,
                                          std::vector<int> parents);

  int root() const { return root_; }
  int num_nodes() const { return static_cast<int>(names_.size()); }
  int num_leaves() const { return static_cast<int>(leaf_nodes_.size()); }
  const std::string& name(int node) const { return names_[node]; }
  int parent(int node) const { return parents_[node]; }
  std::optional<int> FindNode(absl::string_view name) const;

  int leaf_node(int leaf) const { return leaf_nodes_[leaf]; }
  int first_leaf(int node) const { return first_leaf_[node]; }
  int last_leaf(int node) const { return last_leaf_[node]; }
  int LeafCount(int node) const {
    return last_leaf_[node] - first_leaf_[node] + 1;
  }
  bool IsLeaf(int node) const { return children_[node].empty(); }

  // Lowest common ancestor of leaves lo..hi (inclusive).
  int CoveringNode(int lo_leaf, int hi_leaf) const;

 private:
  Hierarchy() = default;

  std::vector<std::string> names_;
  std::vector<int> parents_;
  std::vector<std::vector<int>> children_;
  std::map<std::string, int, std::less<>> index_;
  std::vector<int> leaf_nodes_;
  std::vector<int> first_leaf_;
  std::vector<int> last_leaf_;
  int root_ = -1;
};

// One quasi-identifier attribute. Values are carried as integer codes: the
// number itself for numeric attributes, the leaf index for categorical ones.
struct AttributeSchema {
  std::string name;
  AttributeKind kind = AttributeKind::kNumeric;
  int lo = 0;
  int hi = 0;
  std::shared_ptr<const Hierarchy> hierarchy;

  static AttributeSchema Numeric(std::string name, int lo, int hi);
  static AttributeSchema Categorical(std::string name,
                                     std::shared_ptr<const Hierarchy> tree);

  int min_code() const { return kind == AttributeKind::kNumeric ? lo : 0; }
  int max_code() const {
    return kind == AttributeKind::kNumeric ? hi : hierarchy->num_leaves() - 1;
  }
  int64_t DomainSize() const { return int64_t{max_code()} - min_code() + 1; }

  absl::StatusOr<int> Encode(absl::string_view text) const;
  std::string Decode(int code) const;
};

// Ordered list of sensitive values; codes are positions in this list.
class SensitiveDomain {
 public:
  SensitiveDomain() = default;
  explicit SensitiveDomain(std::vector<std::string> values);

  int size() const { return static_cast<int>(values_.size()); }
  const std::string& name(int code) const { return values_[code]; }
  std::optional<int> Find(absl::string_view value) const;
  const std::vector<std::string>& values() const { return values_; }

 private:
  std::vector<std::string> values_;
  std::map<std::string, int, std::less<>> index_;
};

struct Schema {
  std::vector<AttributeSchema> qi;
  std::string sensitive_name;
  SensitiveDomain sensitive;

  int num_qi() const { return static_cast<int>(qi.size()); }
};

struct Record {
  std::string id;
  std::vector<int> qi;
  int sensitive = 0;
};

using Table = std::vector<Record>;

struct Interval {
  int lo = 0;
  int hi = 0;
  bool operator==(const Interval&) const = default;
};

// Generalized QI box. Categorical dimensions always span exactly the leaf
// range of one hierarchy node.
struct Region {
  std::vector<Interval> dims;

  bool Contains(std::span<const int> point) const;
  bool Covers(const Region& other) const;
  bool operator==(const Region&) const = default;
};

// Accumulates the bounding box of a point set.
class RegionBuilder {
 public:
  explicit RegionBuilder(int dims);
  void Add(std::span<const int> point);
  bool empty() const { return count_ == 0; }
  // Snaps categorical dimensions to their covering hierarchy node.
  Region Build(const Schema& schema) const;

 private:
  std::vector<Interval> box_;
  int count_ = 0;
};

absl::StatusOr<Region> BoundingRegion(std::span<const std::vector<int>> points,
                                      const Schema& schema);

// Number of domain points covered on one dimension.
int64_t DimensionExtent(const Interval& dim);

// Product over dimensions of extent / domain size. Always positive.
Rational RegionMeasure(const Region& region, const Schema& schema);

std::string FormatRegionDim(const Interval& dim, const AttributeSchema& attr);
absl::StatusOr<Interval> ParseRegionDim(absl::string_view text,
                                        const AttributeSchema& attr);

struct Member {
  std::string id;
  int sensitive = 0;
  bool counterfeit = false;
};

struct QIGroup {
  int gid = 0;
  Region region;
  std::vector<Member> members;

  int CounterfeitCount() const;
  int RealCount() const { return static_cast<int>(members.size()) - CounterfeitCount(); }
  std::vector<int> SensitiveValues() const;
};

struct PublishedRelease {
  int release_index = 0;
  std::vector<QIGroup> groups;
  // gid -> number of counterfeit members; only groups with counterfeits.
  std::map<int, int> counterfeit_stats;

  // Index into `groups` of the group holding real record `id`.
  std::optional<int> FindGroupOf(absl::string_view id) const;
  int RealRecordCount() const;
  int CounterfeitCount() const;
};

// What an adversary knows about the QI values of the individuals in one
// release: the microdata without its sensitive column.
struct ExternalKnowledgeTable {
  int release_index = 0;
  std::map<std::string, std::vector<int>> rows;

  static ExternalKnowledgeTable FromTable(const Table& table,
                                          int release_index);
};

// Groups handed to Generalize: indices of real records in the table plus
// the sensitive values of counterfeit members.
struct GroupDraft {
  std::vector<int> records;
  std::vector<int> counterfeit_values;
};

// Builds the published release: each group's region bounds its real members
// only, counterfeits share it. Gids run 1..n in draft order; rows are sorted
// by id with counterfeits (ids c1, c2, ...) last.
absl::StatusOr<PublishedRelease> Generalize(int release_index,
                                            const std::vector<GroupDraft>& drafts,
                                            const Table& table,
                                            const Schema& schema);

}  // namespace mdistinct

#endif  // MDISTINCT_MODEL_H_
