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

#include <gtest/gtest.h>

#include "test_util.h"

namespace mdistinct {
namespace {

using testing::Code;
using testing::DiseaseModel;
using testing::DiseaseSchema;

Rational Q(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

// Three layers, every node weighted 1/2. Paths and weights:
//   v11 v21 v31 (2/3, 2/3) = 1/18      v12 v23 v32 (2/3, 1/3) = 1/36
//   v12 v24 v33 (1/3, 1/3) = 1/72      v12 v24 v34 (1/3, 1/3) = 1/72
//   v13 v22 v35 (2/3, 2/3) = 1/18
// Node weights do not sum to 1 per layer, so no history produces this graph;
// it only exercises the path and risk arithmetic.
Sug ArithmeticFixture() {
  Sug g;
  auto half = [] { return Q(1, 2); };
  g.layers = {{{11, half()}, {12, half()}, {13, half()}},
              {{21, half()}, {22, half()}, {23, half()}, {24, half()}},
              {{31, half()}, {32, half()}, {33, half()}, {34, half()}, {35, half()}}};
  g.edges = {{{0, 0, Q(2, 3)}, {1, 2, Q(2, 3)}, {1, 3, Q(1, 3)}, {2, 1, Q(2, 3)}},
             {{0, 0, Q(2, 3)}, {2, 1, Q(1, 3)}, {3, 2, Q(1, 3)}, {3, 3, Q(1, 3)},
              {1, 4, Q(2, 3)}}};
  return g;
}

TEST(ArithmeticFixture, PathWeights) {
  ASSERT_OK_AND_ASSIGN(std::vector<SugPath> paths,
                       EnumeratePaths(ArithmeticFixture()));
  std::vector<Rational> weights;
  Rational total = 0;
  for (const SugPath& p : paths) {
    weights.push_back(p.weight);
    total += p.weight;
  }
  std::sort(weights.begin(), weights.end());
  EXPECT_EQ(weights, (std::vector<Rational>{Q(1, 72), Q(1, 72), Q(1, 36),
                                            Q(1, 18), Q(1, 18)}));
  EXPECT_EQ(total, Q(1, 6));
}

TEST(ArithmeticFixture, DesignatedNodeRisks) {
  ASSERT_OK_AND_ASSIGN(RiskReport r,
                       DisclosureRisks(ArithmeticFixture(), {12, 23, 33}));
  EXPECT_EQ(r.risks, (std::vector<Rational>{Q(1, 3), Q(1, 6), Q(1, 12)}));
  EXPECT_EQ(r.path_count, 5);
  EXPECT_FALSE(r.flagged);
}

TEST(BuildSug, JuliaGraphHasHalfWeights) {
  Schema s = DiseaseSchema();
  UpdateModel model = DiseaseModel(s);
  const int dys = Code(s, "Dyspepsia"), pne = Code(s, "Pneumonia"),
            lc = Code(s, "Lung Cancer");
  ASSERT_OK_AND_ASSIGN(Sug g, BuildSug({{dys, pne}, {lc, pne}}, model));
  ASSERT_EQ(g.num_layers(), 2);
  for (const auto& layer : g.layers) {
    for (const SugNode& n : layer) EXPECT_EQ(n.weight, Q(1, 2));
  }
  // Dyspepsia has no successor in {Lung Cancer, Pneumonia}.
  ASSERT_EQ(g.edges[0].size(), 2u);
  for (const SugEdge& e : g.edges[0]) {
    EXPECT_EQ(g.layers[0][e.from].value, pne);
    EXPECT_EQ(e.weight, Q(1, 2));
  }
}

TEST(BuildSug, IdentityModelGivesParallelEdges) {
  UpdateModel model = UpdateModel::Identity(2);
  ASSERT_OK_AND_ASSIGN(Sug g, BuildSug({{0, 1}, {0, 1}}, model));
  ASSERT_EQ(g.edges[0].size(), 2u);
  for (const SugEdge& e : g.edges[0]) {
    EXPECT_EQ(g.layers[0][e.from].value, g.layers[1][e.to].value);
    EXPECT_EQ(e.weight, 1);
  }
}

TEST(BuildSug, DuplicateValuesShareOneNode) {
  ASSERT_OK_AND_ASSIGN(Sug g, BuildSug({{0, 0, 1}}, UpdateModel::FullyMixing(2)));
  ASSERT_EQ(g.layers[0].size(), 2u);
  EXPECT_EQ(g.layers[0][0].weight, Q(2, 3));
  EXPECT_EQ(g.layers[0][1].weight, Q(1, 3));
}

TEST(BuildSug, RejectsEmptyAndOutOfDomain) {
  EXPECT_FALSE(BuildSug({}, UpdateModel::Identity(2)).ok());
  EXPECT_FALSE(BuildSug({{0}, {}}, UpdateModel::Identity(2)).ok());
  EXPECT_FALSE(BuildSug({{5}}, UpdateModel::Identity(2)).ok());
}

TEST(Prune, RemovesJuliasDyspepsia) {
  Schema s = DiseaseSchema();
  UpdateModel model = DiseaseModel(s);
  const int dys = Code(s, "Dyspepsia"), pne = Code(s, "Pneumonia"),
            lc = Code(s, "Lung Cancer");
  ASSERT_OK_AND_ASSIGN(Sug g, BuildSug({{dys, pne}, {lc, pne}}, model));
  ASSERT_OK_AND_ASSIGN(FeasibleSubSug fs, Prune(g));
  EXPECT_EQ(fs.removed_nodes, 1);
  EXPECT_EQ(fs.graph.layers[0].size(), 1u);
  EXPECT_EQ(fs.graph.layers[0][0].value, pne);
  EXPECT_EQ(fs.graph.layers[1].size(), 2u);
}

TEST(Prune, CascadesThroughMiddleLayer) {
  // 0 -> 1 -> 2 only; layer 3 holds 3, so everything but the chain dies and
  // then the chain itself has no end.
  std::vector<ValueSet> cus;
  std::vector<std::vector<Rational>> p(4, std::vector<Rational>(4, 0));
  p[0][1] = 1;
  p[1][2] = 1;
  p[2][2] = 1;
  p[3][3] = 1;
  for (int a = 0; a < 4; ++a) {
    ValueSet c(4);
    for (int b = 0; b < 4; ++b) {
      if (p[a][b] > 0) c.Insert(b);
    }
    cus.push_back(c);
  }
  UpdateModel model(cus, p);
  ASSERT_OK_AND_ASSIGN(Sug g, BuildSug({{0, 3}, {1, 3}, {2, 3}}, model));
  ASSERT_OK_AND_ASSIGN(FeasibleSubSug fs, Prune(g));
  EXPECT_EQ(fs.removed_nodes, 0);

  ASSERT_OK_AND_ASSIGN(Sug g2, BuildSug({{0, 3}, {1}, {3}}, model));
  absl::StatusOr<FeasibleSubSug> dead = Prune(g2);
  EXPECT_EQ(dead.status().code(), absl::StatusCode::kFailedPrecondition);

  ASSERT_OK_AND_ASSIGN(Sug g3, BuildSug({{0, 3}, {1, 3}, {3}}, model));
  ASSERT_OK_AND_ASSIGN(FeasibleSubSug fs3, Prune(g3));
  // 0 and 1 form a chain that never reaches layer 3.
  EXPECT_EQ(fs3.removed_nodes, 2);
  EXPECT_EQ(fs3.graph.layers[0].size(), 1u);
}

TEST(Prune, FullyConnectedUnchanged) {
  ASSERT_OK_AND_ASSIGN(Sug g, BuildSug({{0, 1}, {0, 1}, {0, 1}},
                                       UpdateModel::FullyMixing(2)));
  ASSERT_OK_AND_ASSIGN(FeasibleSubSug fs, Prune(g));
  EXPECT_EQ(fs.removed_nodes, 0);
  EXPECT_EQ(fs.removed_edges, 0);
}

TEST(EnumeratePaths, SingleNodeGraph) {
  ASSERT_OK_AND_ASSIGN(Sug g, BuildSug({{0}}, UpdateModel::Identity(1)));
  ASSERT_OK_AND_ASSIGN(std::vector<SugPath> paths, EnumeratePaths(g));
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0].weight, 1);
}

TEST(EnumeratePaths, CapTriggersPathExplosion) {
  ASSERT_OK_AND_ASSIGN(Sug g, BuildSug({{0, 1}, {0, 1}, {0, 1}},
                                       UpdateModel::FullyMixing(2)));
  absl::StatusOr<std::vector<SugPath>> paths = EnumeratePaths(g, 7);
  EXPECT_EQ(paths.status().code(), absl::StatusCode::kResourceExhausted);
  EXPECT_TRUE(EnumeratePaths(g, 8).ok());
}

TEST(DisclosureRisks, MissingActualValueIsFlagged) {
  ASSERT_OK_AND_ASSIGN(Sug g, BuildSug({{0, 1}}, UpdateModel::FullyMixing(3)));
  ASSERT_OK_AND_ASSIGN(RiskReport r, DisclosureRisks(g, {2}));
  EXPECT_TRUE(r.flagged);
  EXPECT_EQ(r.risks[0], 0);
}

TEST(DisclosureRisks, SingleReleaseIsOneOverGroupSize) {
  ASSERT_OK_AND_ASSIGN(Sug g, BuildSug({{0, 1, 2}}, UpdateModel::FullyMixing(3)));
  ASSERT_OK_AND_ASSIGN(RiskReport r, DisclosureRisks(g, {1}));
  EXPECT_EQ(r.risks[0], Q(1, 3));
}

TEST(Attack, TablesThreeAndFour) {
  Schema s = DiseaseSchema();
  UpdateModel model = DiseaseModel(s);
  ASSERT_OK_AND_ASSIGN(
      std::vector<RiskReport> reports,
      AttackReleaseSequence(testing::FixtureHistory("t3_t4", s), {}, model));
  std::map<std::string, std::vector<Rational>> risk;
  for (const RiskReport& r : reports) risk[r.id] = r.risks;
  EXPECT_EQ(risk["Ben"], (std::vector<Rational>{1, 1}));
  EXPECT_EQ(risk["Ken"], (std::vector<Rational>{1, 1}));
  EXPECT_EQ(risk["Lily"], (std::vector<Rational>{1, 1}));
  EXPECT_EQ(risk["Julia"], (std::vector<Rational>{1, Q(1, 2)}));
  EXPECT_EQ(risk["Tom"], (std::vector<Rational>{1, Q(1, 2)}));
  EXPECT_EQ(risk["Harry"], (std::vector<Rational>{Q(1, 2), Q(1, 2)}));
  EXPECT_EQ(CountVulnerable(reports), 8);
}

TEST(Attack, CounterfeitsDefendTablesThreeAndFive) {
  Schema s = DiseaseSchema();
  UpdateModel model = DiseaseModel(s);
  ASSERT_OK_AND_ASSIGN(
      std::vector<RiskReport> reports,
      AttackReleaseSequence(testing::FixtureHistory("t3_t5", s), {}, model));
  ASSERT_EQ(reports.size(), 6u);
  for (const RiskReport& r : reports) {
    for (const Rational& risk : r.risks) EXPECT_EQ(risk, Q(1, 2)) << r.id;
  }
  EXPECT_EQ(CountVulnerable(reports), 0);
}

TEST(Attack, ExternalKnowledgeMustCoverEveryRecord) {
  Schema s = DiseaseSchema();
  UpdateModel model = DiseaseModel(s);
  std::vector<PublishedRelease> releases = testing::FixtureHistory("t3_t5", s);
  ASSERT_OK_AND_ASSIGN(auto ets, LoadExternalKnowledgeDir(
                                     testing::DataDir() / "et", s, 2));
  EXPECT_TRUE(AttackReleaseSequence(releases, ets, model).ok());

  ets[1].rows.erase("Ben");
  EXPECT_EQ(AttackReleaseSequence(releases, ets, model).status().code(),
            absl::StatusCode::kInvalidArgument);

  ets[1].rows["Ben"] = {40, 0};
  EXPECT_EQ(AttackReleaseSequence(releases, ets, model).status().code(),
            absl::StatusCode::kDataLoss);
}

// Graph risks match the brute-force joint oracle.
TEST(OracleProperty, RandomSparseInstances) {
  Rng rng(20260417);
  int checked = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const int domain = 2 + static_cast<int>(rng.Uniform(5));
    UpdateModel model = testing::RandomSparseModel(domain, rng);
    std::vector<std::vector<int>> history;
    std::vector<int> actual;
    if (!testing::RandomFeasibleInstance(model, 4, 4, rng, history, actual)) {
      continue;
    }
    ASSERT_OK_AND_ASSIGN(RiskReport oracle,
                         RisksByJointOracle(history, model, actual));
    ASSERT_OK_AND_ASSIGN(Sug g, BuildSug(history, model));
    ASSERT_OK_AND_ASSIGN(FeasibleSubSug fs, Prune(g));
    ASSERT_OK_AND_ASSIGN(RiskReport graph, DisclosureRisks(fs.graph, actual));
    EXPECT_EQ(graph.risks, oracle.risks) << "trial " << trial;
    EXPECT_EQ(graph.path_count, oracle.path_count) << "trial " << trial;
    EXPECT_EQ(graph.layer_sizes, oracle.layer_sizes) << "trial " << trial;

    ASSERT_OK_AND_ASSIGN(std::vector<SugPath> paths, EnumeratePaths(fs.graph));
    Rational total = 0;
    for (const SugPath& p : paths) total += p.weight;
    for (size_t i = 0; i < actual.size(); ++i) {
      int node = fs.graph.NodeIndex(static_cast<int>(i), actual[i]);
      Rational through = 0;
      for (const SugPath& p : paths) {
        if (p.nodes[i] == node) through += p.weight;
      }
      EXPECT_EQ(graph.risks[i], through / total);
    }
    ++checked;
  }
  EXPECT_GT(checked, 300);
}

// Under the fully-mixing model, appending a release leaves earlier risks
// unchanged.
TEST(RiskProperty, FullyMixingAppendKeepsRisks) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int domain = 2 + static_cast<int>(rng.Uniform(5));
    UpdateModel model = UpdateModel::FullyMixing(domain);
    std::vector<std::vector<int>> history;
    std::vector<int> actual;
    ASSERT_TRUE(testing::RandomFeasibleInstance(model, 3, 4, rng, history, actual));
    ASSERT_OK_AND_ASSIGN(Sug g, BuildSug(history, model));
    ASSERT_OK_AND_ASSIGN(FeasibleSubSug fs, Prune(g));
    ASSERT_OK_AND_ASSIGN(RiskReport before, DisclosureRisks(fs.graph, actual));

    std::vector<int> extra(1 + rng.Uniform(4));
    for (int& v : extra) v = static_cast<int>(rng.Uniform(domain));
    history.push_back(extra);
    actual.push_back(extra[0]);
    ASSERT_OK_AND_ASSIGN(Sug g2, BuildSug(history, model));
    ASSERT_OK_AND_ASSIGN(FeasibleSubSug fs2, Prune(g2));
    ASSERT_OK_AND_ASSIGN(RiskReport after, DisclosureRisks(fs2.graph, actual));
    for (size_t i = 0; i + 1 < actual.size(); ++i) {
      EXPECT_EQ(before.risks[i], after.risks[i]);
    }
  }
}

// A version is fully disclosed exactly when its pruned layer has one node.
TEST(RiskProperty, RiskOneIffSingletonLayer) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int domain = 2 + static_cast<int>(rng.Uniform(4));
    UpdateModel model = testing::RandomSparseModel(domain, rng);
    std::vector<std::vector<int>> history;
    std::vector<int> actual;
    if (!testing::RandomFeasibleInstance(model, 4, 4, rng, history, actual)) {
      continue;
    }
    ASSERT_OK_AND_ASSIGN(Sug g, BuildSug(history, model));
    ASSERT_OK_AND_ASSIGN(FeasibleSubSug fs, Prune(g));
    ASSERT_OK_AND_ASSIGN(RiskReport r, DisclosureRisks(fs.graph, actual));
    for (size_t i = 0; i < actual.size(); ++i) {
      EXPECT_EQ(r.risks[i] == 1, r.layer_sizes[i] == 1) << "trial " << trial;
    }
  }
}

}  // namespace
}  // namespace mdistinct
