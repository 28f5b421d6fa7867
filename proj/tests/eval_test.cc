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

#include "mdistinct/eval.h"

#include <gtest/gtest.h>

#include <fstream>

#include "mdistinct/engine.h"
#include "test_util.h"

namespace mdistinct {
namespace {

namespace fs = std::filesystem;

Rational Q(long n, long d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

Schema LineSchema() {
  Schema s;
  s.qi = {AttributeSchema::Numeric("a", 0, 99)};
  s.sensitive_name = "s";
  s.sensitive = SensitiveDomain({"x", "y", "z"});
  return s;
}

PublishedRelease OneGroup(bool with_counterfeit) {
  PublishedRelease r;
  r.release_index = 1;
  QIGroup g;
  g.gid = 1;
  g.region.dims = {{20, 23}};
  g.members = {{"p", 0, false}, {"q", 1, false}};
  if (with_counterfeit) {
    g.members.push_back({"c1", 2, true});
    r.counterfeit_stats[1] = 1;
  }
  r.groups.push_back(g);
  return r;
}

TEST(EstimateCount, UniformOverlap) {
  PublishedRelease r = OneGroup(false);
  EXPECT_EQ(EstimateCount(r, {{{22, 23}}, {0, 2}}), 1);
  EXPECT_EQ(EstimateCount(r, {{{0, 99}}, {0, 2}}), 2);
  EXPECT_EQ(EstimateCount(r, {{{0, 20}}, {0, 2}}), Q(1, 2));
  EXPECT_EQ(EstimateCount(r, {{{24, 99}}, {0, 2}}), 0);
  // Sensitive dimension uses the actual values of real members.
  EXPECT_EQ(EstimateCount(r, {{{0, 99}}, {1, 1}}), 1);
}

TEST(EstimateCount, CounterfeitsExcluded) {
  PublishedRelease r = OneGroup(true);
  EXPECT_EQ(EstimateCount(r, {{{0, 99}}, {0, 2}}), 2);
  EXPECT_EQ(EstimateCount(r, {{{0, 99}}, {2, 2}}), 0);
  EXPECT_EQ(CounterfeitsPerGroup(r), 1);
  EXPECT_EQ(CounterfeitsPerGroup(OneGroup(false)), 0);
}

TEST(EstimateCount, WholeSpaceIsRealCount) {
  Schema s = testing::DiseaseSchema();
  for (const char* h : {"t3_t4", "t3_t5"}) {
    for (const PublishedRelease& r : testing::FixtureHistory(h, s)) {
      AggregateQuery all{{{10, 40}, {0, 100}}, {0, 6}};
      EXPECT_EQ(EstimateCount(r, all), r.RealRecordCount());
    }
  }
  std::vector<PublishedRelease> t5 = testing::FixtureHistory("t3_t5", s);
  EXPECT_EQ(CounterfeitsPerGroup(t5[1]), Q(2, 4));
}

TEST(TrueCount, LinearScan) {
  Table t = {{"p", {20}, 0}, {"q", {23}, 1}, {"r", {50}, 1}};
  EXPECT_EQ(TrueCount(t, {{{22, 60}}, {0, 2}}), 2);
  EXPECT_EQ(TrueCount(t, {{{22, 60}}, {0, 0}}), 0);
}

TEST(QueryError, Formula) {
  EXPECT_EQ(QueryError(3, 4), Q(1, 4));
  EXPECT_EQ(QueryError(5, 4), Q(1, 4));
  EXPECT_EQ(QueryError(4, 4), 0);
}

TEST(Median, OddAndEven) {
  EXPECT_EQ(Median({3, 1, 2}), 2);
  EXPECT_EQ(Median({4, 1, 3, 2}), Q(5, 2));
  EXPECT_EQ(Median({Q(1, 3)}), Q(1, 3));
}

TEST(RandomQuery, WidthsFollowTheta) {
  Schema s = testing::DiseaseSchema();
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    AggregateQuery q = RandomQuery(s, Q(1, 4), rng);
    // round(31/4) = 8, round(101/4) = 25, round(7/4) = 2.
    EXPECT_EQ(q.qi[0].hi - q.qi[0].lo + 1, 8);
    EXPECT_EQ(q.qi[1].hi - q.qi[1].lo + 1, 25);
    EXPECT_EQ(q.sensitive.hi - q.sensitive.lo + 1, 2);
    EXPECT_GE(q.qi[0].lo, 10);
    EXPECT_LE(q.qi[0].hi, 40);
    EXPECT_GE(q.sensitive.lo, 0);
    EXPECT_LE(q.sensitive.hi, 6);
  }
  AggregateQuery tiny = RandomQuery(s, Q(1, 100), rng);
  EXPECT_EQ(tiny.sensitive.hi, tiny.sensitive.lo);
  AggregateQuery full = RandomQuery(s, 1, rng);
  EXPECT_EQ(full.qi[1], (Interval{0, 100}));
}

TEST(MedianQueryError, MatchesDirectComputation) {
  Schema s = testing::DiseaseSchema();
  UpdateModel model = testing::DiseaseModel(s);
  absl::StatusOr<Table> t = LoadMicrodata(testing::DataDir() / "table2.csv", s);
  ASSERT_TRUE(t.ok());
  std::vector<PublishedRelease> h = testing::FixtureHistory("t3_t5", s);
  const Rational theta = Q(1, 2);
  std::optional<Rational> fast = MedianQueryError(*t, h[1], s, theta, 1, 77);
  ASSERT_TRUE(fast.has_value());
  // Replays the same seeded draws through the rational path.
  Rng rng(77);
  std::optional<Rational> direct;
  for (int draws = 0; draws < 10 && !direct; ++draws) {
    AggregateQuery q = RandomQuery(s, theta, rng);
    Rational est = EstimateCount(h[1], q);
    if (est > 0) direct = QueryError(TrueCount(*t, q), est);
  }
  ASSERT_TRUE(direct.has_value());
  EXPECT_EQ(*fast, *direct);
}

TEST(MedianQueryError, NoneWhenEveryEstimateIsZero) {
  PublishedRelease empty;
  empty.release_index = 1;
  EXPECT_FALSE(
      MedianQueryError({}, empty, LineSchema(), Q(1, 2), 5, 1).has_value());
}

TEST(Publisher, Names) {
  for (Publisher p : {Publisher::kMDistinct, Publisher::kMDistinctStar,
                      Publisher::kLDiversity, Publisher::kMInvariance}) {
    ASSERT_OK_AND_ASSIGN(Publisher again, ParsePublisher(PublisherName(p)));
    EXPECT_EQ(again, p);
  }
  EXPECT_FALSE(ParsePublisher("k_anonymity").ok());
}

class ScenarioTest : public ::testing::Test {
 protected:
  ScenarioTest() : dir_(testing::TempDir("eval")) {}
  ~ScenarioTest() override { fs::remove_all(dir_); }

  absl::StatusOr<ScenarioConfig> Load(const std::string& text) {
    std::ofstream(dir_ / "c.csv") << text;
    return LoadScenarioConfig(dir_ / "c.csv");
  }

  static ScenarioConfig Small() {
    ScenarioConfig c;
    c.releases = 3;
    c.pool_records = 400;
    c.initial_records = 150;
    c.inserts = 30;
    c.deletes = 20;
    c.sensitive_updates = 40;
    c.queries = 50;
    c.seed = 11;
    return c;
  }

  fs::path dir_;
};

TEST_F(ScenarioTest, ConfigParsing) {
  ASSERT_OK_AND_ASSIGN(
      ScenarioConfig c,
      Load("key,value\npublisher,m_distinct_star\nm,4\nd,5\nreleases,3\n"
           "thetas,0.1;1/2\nseed,9\nattack,0\n"));
  EXPECT_EQ(c.publisher, Publisher::kMDistinctStar);
  EXPECT_EQ(c.m, 4);
  EXPECT_EQ(c.diameter, 5);
  EXPECT_EQ(c.thetas, (std::vector<Rational>{Q(1, 10), Q(1, 2)}));
  EXPECT_EQ(c.seed, 9u);
  EXPECT_FALSE(c.attack);
  EXPECT_EQ(c.pool_records, 20000);
  EXPECT_FALSE(Load("key,value\ncolour,blue\n").ok());
  EXPECT_FALSE(Load("key,value\nm,two\n").ok());
}

TEST_F(ScenarioTest, Validation) {
  EXPECT_OK(ValidateScenario(Small()));
  ScenarioConfig c = Small();
  c.diameter = 7;
  EXPECT_FALSE(ValidateScenario(c).ok());
  c = Small();
  c.m = 1;
  EXPECT_FALSE(ValidateScenario(c).ok());
  c = Small();
  c.thetas = {Q(3, 2)};
  EXPECT_FALSE(ValidateScenario(c).ok());
  c = Small();
  c.initial_records = c.pool_records + 1;
  EXPECT_FALSE(ValidateScenario(c).ok());
}

TEST_F(ScenarioTest, ZeroReleasesGiveEmptyReport) {
  ScenarioConfig c = Small();
  c.releases = 0;
  ASSERT_OK_AND_ASSIGN(ExperimentResult r, RunExperiment(c));
  EXPECT_TRUE(r.rows.empty());
  EXPECT_EQ(FormatRunReport(r.rows, c.thetas).find('\n'),
            FormatRunReport(r.rows, c.thetas).size() - 1);
}

TEST_F(ScenarioTest, SmallRunIsSafeAndDeterministic) {
  ScenarioConfig c = Small();
  fs::path h1 = dir_ / "h1", h2 = dir_ / "h2";
  ASSERT_OK_AND_ASSIGN(ExperimentResult a, RunExperiment(c, &h1));
  ASSERT_OK_AND_ASSIGN(ExperimentResult b, RunExperiment(c, &h2));
  ASSERT_EQ(a.rows.size(), 3u);
  EXPECT_EQ(FormatRunReport(a.rows, c.thetas), FormatRunReport(b.rows, c.thetas));
  for (int i = 1; i <= 3; ++i) {
    std::string f = "release_" + std::to_string(i) + ".csv";
    std::ifstream x(h1 / f), y(h2 / f);
    std::string sx((std::istreambuf_iterator<char>(x)), {});
    std::string sy((std::istreambuf_iterator<char>(y)), {});
    EXPECT_FALSE(sx.empty());
    EXPECT_EQ(sx, sy);
  }
  EXPECT_TRUE(VerifyMDistinct(a.releases, a.model, c.m).ok());
  for (const RunReportRow& row : a.rows) {
    EXPECT_EQ(row.vulnerable, 0);
    EXPECT_GE(row.min_layer, c.m);
    EXPECT_LE(row.max_risk, Q(1, c.m));
    EXPECT_EQ(row.pruned_records, 0);
    ASSERT_EQ(row.median_errors.size(), 3u);
  }
  EXPECT_EQ(a.rows[0].records, 150);
  EXPECT_EQ(a.rows[1].records, 160);
  // An existing history is not overwritten.
  EXPECT_EQ(RunExperiment(c, &h1).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST_F(ScenarioTest, MInvarianceAtDiameterOneNeverInvalidates) {
  ScenarioConfig c = Small();
  c.publisher = Publisher::kMInvariance;
  c.diameter = 1;
  c.attack = false;
  ASSERT_OK_AND_ASSIGN(ExperimentResult r, RunExperiment(c));
  for (const RunReportRow& row : r.rows) EXPECT_EQ(row.invalidated, 0);
}

TEST(FormatRunReport, Layout) {
  RunReportRow row;
  row.release = 1;
  row.records = 6;
  row.groups = 3;
  row.cnt_g = Q(1, 3);
  row.max_risk = Q(1, 2);
  row.median_errors = {Q(1, 8), std::nullopt};
  std::string text = FormatRunReport({row}, {Q(1, 4), Q(1, 2)});
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "release,records,groups,counterfeits,cnt_g,vulnerable,invalidated,"
            "pruned_records,min_layer,max_risk,median_error_0.25,"
            "median_error_0.50");
  EXPECT_NE(text.find("0.333333"), std::string::npos);
  EXPECT_NE(text.find("0.125000,NA"), std::string::npos);
}

}  // namespace
}  // namespace mdistinct
