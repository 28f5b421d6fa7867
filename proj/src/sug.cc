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

#include "mdistinct/sug.h"

#include <algorithm>

#include "absl/strings/str_cat.h"

namespace mdistinct {

int Sug::NodeIndex(int layer, int value) const {
  const auto& nodes = layers[layer];
  for (size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k].value == value) return static_cast<int>(k);
  }
  return -1;
}

absl::StatusOr<Sug> BuildSug(const std::vector<std::vector<int>>& history,
                             const UpdateModel& model) {
  if (history.empty()) return absl::InvalidArgumentError("empty history");
  Sug sug;
  for (size_t i = 0; i < history.size(); ++i) {
    const auto& c = history[i];
    if (c.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("empty candidate set at layer ", i + 1));
    }
    std::map<int, int> counts;
    for (int v : c) {
      if (v < 0 || v >= model.domain_size()) {
        return absl::InvalidArgumentError(
            absl::StrCat("sensitive code ", v, " outside the model domain"));
      }
      ++counts[v];
    }
    std::vector<SugNode> layer;
    for (const auto& [v, n] : counts) {
      Rational w(n, static_cast<long>(c.size()));
      w.canonicalize();
      layer.push_back({v, w});
    }
    sug.layers.push_back(std::move(layer));
  }
  for (int i = 0; i + 1 < sug.num_layers(); ++i) {
    std::vector<SugEdge> arcs;
    const auto& next = sug.layers[i + 1];
    for (int u = 0; u < static_cast<int>(sug.layers[i].size()); ++u) {
      int from = sug.layers[i][u].value;
      Rational total = 0;
      for (const SugNode& n : next) total += model.p(from, n.value);
      if (total == 0) continue;
      for (int v = 0; v < static_cast<int>(next.size()); ++v) {
        const Rational& p = model.p(from, next[v].value);
        if (p > 0) arcs.push_back({u, v, p / total});
      }
    }
    sug.edges.push_back(std::move(arcs));
  }
  return sug;
}

absl::StatusOr<FeasibleSubSug> Prune(const Sug& sug) {
  const int layers = sug.num_layers();
  std::vector<std::vector<char>> alive(layers);
  for (int i = 0; i < layers; ++i) alive[i].assign(sug.layers[i].size(), 1);

  bool changed = layers > 1;
  while (changed) {
    changed = false;
    for (int i = 0; i < layers; ++i) {
      std::vector<int> in(sug.layers[i].size(), 0);
      std::vector<int> out(sug.layers[i].size(), 0);
      if (i > 0) {
        for (const SugEdge& e : sug.edges[i - 1]) {
          if (alive[i - 1][e.from] && alive[i][e.to]) ++in[e.to];
        }
      }
      if (i + 1 < layers) {
        for (const SugEdge& e : sug.edges[i]) {
          if (alive[i][e.from] && alive[i + 1][e.to]) ++out[e.from];
        }
      }
      for (size_t k = 0; k < sug.layers[i].size(); ++k) {
        if (!alive[i][k]) continue;
        bool dead = (i > 0 && in[k] == 0) || (i + 1 < layers && out[k] == 0);
        if (dead) {
          alive[i][k] = 0;
          changed = true;
        }
      }
    }
  }

  FeasibleSubSug fs;
  std::vector<std::vector<int>> remap(layers);
  for (int i = 0; i < layers; ++i) {
    std::vector<SugNode> kept;
    remap[i].assign(sug.layers[i].size(), -1);
    for (size_t k = 0; k < sug.layers[i].size(); ++k) {
      if (alive[i][k]) {
        remap[i][k] = static_cast<int>(kept.size());
        kept.push_back(sug.layers[i][k]);
      } else {
        ++fs.removed_nodes;
      }
    }
    if (kept.empty()) {
      return absl::FailedPreconditionError(
          absl::StrCat("inconsistent history: layer ", i + 1,
                       " has no feasible value"));
    }
    fs.graph.layers.push_back(std::move(kept));
  }
  for (int i = 0; i + 1 < layers; ++i) {
    std::vector<SugEdge> kept;
    for (const SugEdge& e : sug.edges[i]) {
      int from = remap[i][e.from];
      int to = remap[i + 1][e.to];
      if (from >= 0 && to >= 0) {
        kept.push_back({from, to, e.weight});
      } else {
        ++fs.removed_edges;
      }
    }
    fs.graph.edges.push_back(std::move(kept));
  }
  return fs;
}

absl::StatusOr<std::vector<SugPath>> EnumeratePaths(const Sug& sug,
                                                    int64_t cap) {
  if (sug.layers.empty()) return absl::InvalidArgumentError("empty graph");
  const int layers = sug.num_layers();
  std::vector<std::vector<std::vector<const SugEdge*>>> succ(layers);
  for (int i = 0; i < layers; ++i) succ[i].resize(sug.layers[i].size());
  for (int i = 0; i + 1 < layers; ++i) {
    for (const SugEdge& e : sug.edges[i]) succ[i][e.from].push_back(&e);
  }

  std::vector<SugPath> out;
  std::vector<int> nodes(layers);
  std::vector<Rational> prefix(layers);
  // Depth-first walk; prefix[i] is the weight up to and including node i.
  auto walk = [&](auto&& self, int i) -> absl::Status {
    if (i == layers - 1) {
      if (static_cast<int64_t>(out.size()) >= cap) {
        return absl::ResourceExhaustedError("path explosion");
      }
      out.push_back({nodes, prefix[i]});
      return absl::OkStatus();
    }
    for (const SugEdge* e : succ[i][nodes[i]]) {
      nodes[i + 1] = e->to;
      prefix[i + 1] = prefix[i] * e->weight * sug.layers[i + 1][e->to].weight;
      if (absl::Status s = self(self, i + 1); !s.ok()) return s;
    }
    return absl::OkStatus();
  };
  for (int k = 0; k < static_cast<int>(sug.layers[0].size()); ++k) {
    nodes[0] = k;
    prefix[0] = sug.layers[0][k].weight;
    if (absl::Status s = walk(walk, 0); !s.ok()) return s;
  }
  return out;
}

absl::StatusOr<RiskReport> DisclosureRisks(const Sug& graph,
                                           const std::vector<int>& actual) {
  const int layers = graph.num_layers();
  if (layers == 0) return absl::InvalidArgumentError("empty graph");
  if (static_cast<int>(actual.size()) != layers) {
    return absl::InvalidArgumentError("one actual value per layer required");
  }
  std::vector<std::vector<Rational>> fwd(layers), bwd(layers);
  std::vector<std::vector<mpz_class>> fcount(layers), bcount(layers);
  for (int i = 0; i < layers; ++i) {
    fwd[i].assign(graph.layers[i].size(), 0);
    bwd[i].assign(graph.layers[i].size(), 0);
    fcount[i].assign(graph.layers[i].size(), 0);
    bcount[i].assign(graph.layers[i].size(), 0);
  }
  for (size_t k = 0; k < graph.layers[0].size(); ++k) {
    fwd[0][k] = graph.layers[0][k].weight;
    fcount[0][k] = 1;
  }
  for (int i = 0; i + 1 < layers; ++i) {
    for (const SugEdge& e : graph.edges[i]) {
      fwd[i + 1][e.to] += fwd[i][e.from] * e.weight;
      fcount[i + 1][e.to] += fcount[i][e.from];
    }
    for (size_t k = 0; k < graph.layers[i + 1].size(); ++k) {
      fwd[i + 1][k] *= graph.layers[i + 1][k].weight;
    }
  }
  for (size_t k = 0; k < graph.layers[layers - 1].size(); ++k) {
    bwd[layers - 1][k] = 1;
    bcount[layers - 1][k] = 1;
  }
  for (int i = layers - 2; i >= 0; --i) {
    for (const SugEdge& e : graph.edges[i]) {
      bwd[i][e.from] +=
          e.weight * graph.layers[i + 1][e.to].weight * bwd[i + 1][e.to];
      bcount[i][e.from] += bcount[i + 1][e.to];
    }
  }

  RiskReport report;
  Rational total = 0;
  for (const Rational& f : fwd[layers - 1]) total += f;
  for (const mpz_class& c : fcount[layers - 1]) report.path_count += c;
  if (total == 0) {
    return absl::FailedPreconditionError("inconsistent history: no feasible path");
  }
  for (int i = 0; i < layers; ++i) {
    report.layer_sizes.push_back(static_cast<int>(graph.layers[i].size()));
    int k = graph.NodeIndex(i, actual[i]);
    if (k < 0) {
      report.flagged = true;
      report.risks.push_back(0);
      continue;
    }
    report.risks.push_back(fwd[i][k] * bwd[i][k] / total);
  }
  return report;
}

absl::StatusOr<std::vector<RiskReport>> AttackReleaseSequence(
    const std::vector<PublishedRelease>& releases,
    const std::vector<ExternalKnowledgeTable>& ets, const UpdateModel& model) {
  if (!ets.empty() && ets.size() != releases.size()) {
    return absl::InvalidArgumentError(
        "external knowledge needs one table per release");
  }
  struct Trace {
    std::vector<std::vector<int>> candidates;
    std::vector<int> actual;
  };
  std::map<std::string, Trace> traces;
  for (size_t r = 0; r < releases.size(); ++r) {
    for (const QIGroup& g : releases[r].groups) {
      std::vector<int> values = g.SensitiveValues();
      for (const Member& m : g.members) {
        if (m.counterfeit) continue;
        if (!ets.empty()) {
          auto it = ets[r].rows.find(m.id);
          if (it == ets[r].rows.end()) {
            return absl::InvalidArgumentError(
                absl::StrCat("release ", releases[r].release_index, ": '",
                             m.id, "' missing from external knowledge"));
          }
          if (!g.region.Contains(it->second)) {
            return absl::DataLossError(
                absl::StrCat("release ", releases[r].release_index, ": '",
                             m.id, "' not covered by group ", g.gid));
          }
        }
        Trace& t = traces[m.id];
        t.candidates.push_back(values);
        t.actual.push_back(m.sensitive);
      }
    }
  }
  std::vector<RiskReport> out;
  out.reserve(traces.size());
  for (const auto& [id, trace] : traces) {
    absl::StatusOr<Sug> sug = BuildSug(trace.candidates, model);
    if (!sug.ok()) return sug.status();
    absl::StatusOr<FeasibleSubSug> fs = Prune(*sug);
    if (!fs.ok()) {
      return absl::Status(fs.status().code(),
                          absl::StrCat(id, ": ", fs.status().message()));
    }
    absl::StatusOr<RiskReport> report = DisclosureRisks(fs->graph, trace.actual);
    if (!report.ok()) return report.status();
    report->id = id;
    report->removed_nodes = fs->removed_nodes;
    report->removed_edges = fs->removed_edges;
    out.push_back(*std::move(report));
  }
  return out;
}

int CountVulnerable(const std::vector<RiskReport>& reports) {
  int n = 0;
  for (const RiskReport& r : reports) {
    for (const Rational& risk : r.risks) n += risk == 1;
  }
  return n;
}

}  // namespace mdistinct
