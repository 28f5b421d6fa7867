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

#include "mdistinct/cli.h"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "absl/status/status.h"
#include "test_util.h"

namespace mdistinct {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result RunMain(std::vector<std::string> args) {
  args.insert(args.begin(), "mdistinct");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  CliTest() : dir_(testing::TempDir("cli")) {}
  ~CliTest() override { fs::remove_all(dir_); }

  std::string Data(const std::string& name) const {
    return (testing::DataDir() / name).string();
  }

  Result Publish(const fs::path& history, const std::string& table) {
    return RunMain({"publish", "--microdata", Data(table), "--model",
                Data("disease_model.csv"), "--history", history.string(),
                "--schema", Data("schema.csv"), "--m", "2", "--seed", "3"});
  }

  fs::path dir_;
};

TEST(ExitCodeFor, Mapping) {
  EXPECT_EQ(ExitCodeFor(absl::OkStatus()), 0);
  EXPECT_EQ(ExitCodeFor(absl::InvalidArgumentError("x")), 2);
  EXPECT_EQ(ExitCodeFor(absl::FailedPreconditionError("x")), 3);
  EXPECT_EQ(ExitCodeFor(absl::ResourceExhaustedError("x")), 4);
  EXPECT_EQ(ExitCodeFor(absl::InternalError("x")), 2);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(RunMain({}).code, 1);
  EXPECT_EQ(RunMain({"frobnicate"}).code, 1);
  EXPECT_EQ(RunMain({"verify", "--history", "x"}).code, 1);
  EXPECT_EQ(RunMain({"publish", "--m", "zero"}).code, 1);
}

TEST_F(CliTest, VerifyFixtures) {
  Result good = RunMain({"verify", "--history", Data("t3_t5"), "--model",
                     Data("disease_model.csv"), "--m", "2"});
  EXPECT_EQ(good.code, 0) << good.err;
  Result bad = RunMain({"verify", "--history", Data("t3_t4"), "--model",
                    Data("disease_model.csv"), "--m", "2"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("Julia"), std::string::npos) << bad.err;
}

TEST_F(CliTest, AttackWritesRisks) {
  fs::path out = dir_ / "risks.csv";
  Result r = RunMain({"attack", "--history", Data("t3_t4"), "--model",
                  Data("disease_model.csv"), "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("vulnerable 8"), std::string::npos) << r.out;
  std::string csv = ReadFile(out);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "id,version,risk_num,risk_den,risk_decimal");
  EXPECT_NE(csv.find("Julia,2,1,2,0.500000"), std::string::npos) << csv;

  Result et = RunMain({"attack", "--history", Data("t3_t5"), "--model",
                   Data("disease_model.csv"), "--et", Data("et"), "--out",
                   (dir_ / "r5.csv").string()});
  ASSERT_EQ(et.code, 0) << et.err;
  EXPECT_NE(et.out.find("max risk 1/2, vulnerable 0"), std::string::npos) << et.out;
}

TEST_F(CliTest, PublishVerifyAttackRoundTrip) {
  fs::path h = dir_ / "h";
  Result first = Publish(h, "table1.csv");
  ASSERT_EQ(first.code, 0) << first.err;
  Result single = RunMain({"attack", "--history", h.string(), "--model",
                       Data("disease_model.csv")});
  ASSERT_EQ(single.code, 0) << single.err;
  EXPECT_NE(single.out.find("max risk 1/2"), std::string::npos) << single.out;
  EXPECT_TRUE(fs::exists(h / "risks.csv"));

  ASSERT_EQ(Publish(h, "table2.csv").code, 0);
  Result v = RunMain({"verify", "--history", h.string(), "--model",
                  Data("disease_model.csv")});
  EXPECT_EQ(v.code, 0) << v.err;
  Result a = RunMain({"attack", "--history", h.string(), "--model",
                  Data("disease_model.csv")});
  EXPECT_NE(a.out.find("vulnerable 0"), std::string::npos) << a.out;
}

TEST_F(CliTest, PublishIsByteIdentical) {
  fs::path a = dir_ / "a", b = dir_ / "b";
  for (const fs::path& h : {a, b}) {
    ASSERT_EQ(Publish(h, "table1.csv").code, 0);
    ASSERT_EQ(Publish(h, "table2.csv").code, 0);
  }
  for (const char* f : {"release_1.csv", "release_2.csv", "counterfeits_2.csv",
                        "meta.csv", "schema.csv"}) {
    EXPECT_EQ(ReadFile(a / f), ReadFile(b / f)) << f;
  }
}

TEST_F(CliTest, PublishRejectsChangedParameters) {
  fs::path h = dir_ / "h";
  ASSERT_EQ(Publish(h, "table1.csv").code, 0);
  Result r = RunMain({"publish", "--microdata", Data("table2.csv"), "--model",
                  Data("disease_model.csv"), "--history", h.string(), "--m",
                  "3", "--seed", "3"});
  EXPECT_NE(r.code, 0);
  EXPECT_FALSE(fs::exists(h / "release_2.csv"));
}

TEST_F(CliTest, PublishNeedsSchemaForNewHistory) {
  Result r = RunMain({"publish", "--microdata", Data("table1.csv"), "--model",
                  Data("disease_model.csv"), "--history",
                  (dir_ / "h").string(), "--m", "2", "--seed", "3"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST_F(CliTest, PublishInfeasibleIsFailedPrecondition) {
  Result r = RunMain({"publish", "--microdata", Data("table1.csv"), "--model",
                  Data("disease_model.csv"), "--history",
                  (dir_ / "h").string(), "--schema", Data("schema.csv"), "--m",
                  "4", "--star", "--seed", "3"});
  EXPECT_EQ(r.code, 3) << r.err;
}

TEST_F(CliTest, Baselines) {
  fs::path l = dir_ / "l";
  Result ldiv = RunMain({"baseline", "--kind", "ldiv", "--microdata",
                     Data("table1.csv"), "--history", l.string(), "--schema",
                     Data("schema.csv"), "--l", "2", "--seed", "1"});
  ASSERT_EQ(ldiv.code, 0) << ldiv.err;
  EXPECT_TRUE(fs::exists(l / "release_1.csv"));
  Result minv = RunMain({"baseline", "--kind", "minv", "--microdata",
                     Data("table1.csv"), "--history", (dir_ / "m").string(),
                     "--schema", Data("schema.csv"), "--m", "2", "--seed", "1"});
  EXPECT_EQ(minv.code, 0) << minv.err;
  EXPECT_EQ(RunMain({"baseline", "--kind", "kanon", "--microdata",
                 Data("table1.csv"), "--history", (dir_ / "k").string(),
                 "--schema", Data("schema.csv"), "--m", "2", "--seed", "1"})
                .code,
            1);
}

TEST_F(CliTest, Simulate) {
  fs::path cfg = dir_ / "c.csv";
  std::ofstream(cfg) << "key,value\nreleases,2\npool_records,200\n"
                        "initial_records,80\ninserts,10\ndeletes,10\n"
                        "sensitive_updates,20\nqueries,20\nseed,4\n";
  Result r = RunMain({"simulate", "--config", cfg.string(), "--out",
                  (dir_ / "sim").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "sim" / "report.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "sim" / "history" / "release_2.csv"));
  EXPECT_NE(r.out.find("release 2:"), std::string::npos);
  Result again = RunMain({"simulate", "--config", cfg.string(), "--out",
                      (dir_ / "sim").string()});
  EXPECT_EQ(again.code, 3);
}

TEST_F(CliTest, MissingFilesAreReported) {
  Result r = RunMain({"verify", "--history", (dir_ / "none").string(), "--model",
                  Data("disease_model.csv"), "--m", "2"});
  EXPECT_NE(r.code, 0);
  EXPECT_FALSE(r.err.empty());
}

}  // namespace
}  // namespace mdistinct
