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

#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "absl/strings/str_format.h"
#include "test_util.h"

namespace mdistinct {
namespace {

class StaticPartitionTest : public ::testing::Test {
 protected:
  StaticPartitionTest()
      : schema_(testing::DiseaseSchema()), model_(testing::DiseaseModel(schema_)) {}

  std::vector<int> AllRows(const Table& t) const {
    std::vector<int> rows(t.size());
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
  }

  Table RandomTable(int n, Rng& rng) const {
    Table t;
    for (int i = 0; i < n; ++i) {
      t.push_back(Record{absl::StrFormat("r%03d", i),
                         {10 + static_cast<int>(rng.Uniform(31)),
                          static_cast<int>(rng.Uniform(101))},
                         static_cast<int>(rng.Uniform(schema_.sensitive.size()))});
    }
    return t;
  }

  // Every row used exactly once; each group has >= m members with
  // pairwise-distinct keys.
  void CheckGroups(const std::vector<GroupDraft>& groups, const Table& t, int m,
                   const std::vector<int>& keys) const {
    std::multiset<int> used;
    for (const GroupDraft& g : groups) {
      ASSERT_FALSE(g.records.empty());
      std::vector<int> k;
      for (int r : g.records) {
        used.insert(r);
        k.push_back(keys[t[r].sensitive]);
      }
      for (int v : g.counterfeit_values) k.push_back(keys[v]);
      EXPECT_GE(k.size(), static_cast<size_t>(m));
      EXPECT_EQ(std::set<int>(k.begin(), k.end()).size(), k.size());
    }
    std::vector<int> all = AllRows(t);
    EXPECT_EQ(used, std::multiset<int>(all.begin(), all.end()));
  }

  Schema schema_;
  UpdateModel model_;
};

TEST_F(StaticPartitionTest, KeysFollowCusComponents) {
  std::vector<int> plain = PartitionKeys(model_, false);
  EXPECT_EQ(plain, (std::vector<int>{0, 1, 2, 3, 4, 5, 6}));
  std::vector<int> star = PartitionKeys(model_, true);
  EXPECT_EQ(star[0], star[1]);
  EXPECT_EQ(star[2], star[3]);
  EXPECT_EQ(star[3], star[4]);
  EXPECT_EQ(star[5], star[6]);
  EXPECT_EQ(std::set<int>(star.begin(), star.end()).size(), 3u);
}

TEST_F(StaticPartitionTest, TableOneTwoDiverse) {
  absl::StatusOr<Table> t = LoadMicrodata(testing::DataDir() / "table1.csv", schema_);
  ASSERT_TRUE(t.ok());
  Rng rng(1);
  StaticPartitionOptions opt{.m = 2, .star = false, .allow_counterfeits = false};
  ASSERT_OK_AND_ASSIGN(std::vector<GroupDraft> groups,
                       StaticPartition(AllRows(*t), *t, schema_, model_, opt, rng));
  EXPECT_EQ(groups.size(), 3u);
  CheckGroups(groups, *t, 2, PartitionKeys(model_, false));
}

TEST_F(StaticPartitionTest, IneligibleWithoutCounterfeitsIsError) {
  Table t = {Record{"a", {14, 20}, 0}, Record{"b", {15, 20}, 0},
             Record{"c", {16, 20}, 1}};
  Rng rng(1);
  StaticPartitionOptions strict{.m = 2, .star = false, .allow_counterfeits = false};
  EXPECT_FALSE(StaticPartition(AllRows(t), t, schema_, model_, strict, rng).ok());
  StaticPartitionOptions pad{.m = 2, .star = false, .allow_counterfeits = true};
  ASSERT_OK_AND_ASSIGN(std::vector<GroupDraft> groups,
                       StaticPartition(AllRows(t), t, schema_, model_, pad, rng));
  CheckGroups(groups, t, 2, PartitionKeys(model_, false));
}

TEST_F(StaticPartitionTest, TooFewKeysIsError) {
  Table t = {Record{"a", {14, 20}, 0}, Record{"b", {15, 20}, 2}};
  Rng rng(1);
  StaticPartitionOptions star{.m = 4, .star = true, .allow_counterfeits = true};
  EXPECT_FALSE(StaticPartition(AllRows(t), t, schema_, model_, star, rng).ok());
}

TEST_F(StaticPartitionTest, RandomTablesProduceValidGroups) {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    Table t = RandomTable(1 + static_cast<int>(rng.Uniform(40)), rng);
    const bool star = rng.Chance(1, 2);
    const int m = 2 + static_cast<int>(rng.Uniform(star ? 2 : 5));
    StaticPartitionOptions opt{.m = m, .star = star, .allow_counterfeits = true};
    absl::StatusOr<std::vector<GroupDraft>> groups =
        StaticPartition(AllRows(t), t, schema_, model_, opt, rng);
    ASSERT_TRUE(groups.ok()) << groups.status();
    CheckGroups(*groups, t, m, PartitionKeys(model_, star));
  }
}

}  // namespace
}  // namespace mdistinct
