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

#ifndef MDISTINCT_SUG_H_
#define MDISTINCT_SUG_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mdistinct/model.h"
#include "mdistinct/rational.h"
#include "mdistinct/updates.h"

namespace mdistinct {

struct SugNode {
  int value = 0;
  Rational weight;
};

// Arc between node `from` of layer i and node `to` of layer i + 1.
struct SugEdge {
  int from = 0;
  int to = 0;
  Rational weight;
};

// Sensitive-value update graph of one record. edges[i] holds the arcs from
// layers[i] to layers[i + 1].
struct Sug {
  std::vector<std::vector<SugNode>> layers;
  std::vector<std::vector<SugEdge>> edges;

  int num_layers() const { return static_cast<int>(layers.size()); }
  int NodeIndex(int layer, int value) const;  // -1 if absent
};

struct FeasibleSubSug {
  Sug graph;
  int removed_nodes = 0;
  int removed_edges = 0;
};

// history[i] is the candidate sensitive multiset of release i. Duplicates
// collapse into one node whose prior is the value's share of the multiset.
// An edge u -> v exists when P_trans(u, v) > 0; its weight is P_trans(u, v)
// renormalized over the distinct values of the next candidate set, i.e. the
// probability of u updating to v given that the next value is one of those
// published.
absl::StatusOr<Sug> BuildSug(const std::vector<std::vector<int>>& history,
                             const UpdateModel& model);

// Deletes dead ends until none remain: first-layer nodes without successors,
// last-layer nodes without predecessors, interior nodes missing either.
absl::StatusOr<FeasibleSubSug> Prune(const Sug& sug);

struct SugPath {
  std::vector<int> nodes;  // node index per layer
  Rational weight;
};

inline constexpr int64_t kDefaultPathCap = 10'000'000;

// Materializes every first-to-last-layer path. Weight is the product of all
// node and edge weights along the path.
absl::StatusOr<std::vector<SugPath>> EnumeratePaths(
    const Sug& sug, int64_t cap = kDefaultPathCap);

struct RiskReport {
  std::string id;
  std::vector<Rational> risks;  // per version
  mpz_class path_count;         // K
  std::vector<int> layer_sizes; // |V'_i| after pruning
  bool flagged = false;         // some actual value missing from its layer
  int removed_nodes = 0;
  int removed_edges = 0;
};

// Risk of version i: mass of paths through the node holding actual[i] over
// the mass of all paths. Computed with forward/backward sums, no paths are
// materialized.
absl::StatusOr<RiskReport> DisclosureRisks(const Sug& graph,
                                           const std::vector<int>& actual);

// Same quantity by brute force over every joint assignment of values, with
// no graph and no pruning. Used to cross-check the graph method.
inline constexpr int64_t kOracleCap = 1'000'000;
absl::StatusOr<RiskReport> RisksByJointOracle(
    const std::vector<std::vector<int>>& history, const UpdateModel& model,
    const std::vector<int>& actual, int64_t cap = kOracleCap);

// Replays the adversary over a release sequence. ets may be empty (no
// coverage check) or hold one table per release. Reports are sorted by id.
absl::StatusOr<std::vector<RiskReport>> AttackReleaseSequence(
    const std::vector<PublishedRelease>& releases,
    const std::vector<ExternalKnowledgeTable>& ets, const UpdateModel& model);

// Number of (record, version) pairs at risk 1.
int CountVulnerable(const std::vector<RiskReport>& reports);

}  // namespace mdistinct

#endif  // MDISTINCT_SUG_H_
