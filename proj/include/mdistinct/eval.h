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

#ifndef MDISTINCT_EVAL_H_
#define MDISTINCT_EVAL_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mdistinct/model.h"
#include "mdistinct/rational.h"
#include "mdistinct/rng.h"
#include "mdistinct/updates.h"

namespace mdistinct {

// COUNT(*) over a box: one code range per QI attribute plus a range of
// sensitive codes. Categorical ranges are runs of leaf indices.
struct AggregateQuery {
  std::vector<Interval> qi;
  Interval sensitive;
};

// Each range has width max(1, round(theta * |domain|)) and a uniform start.
AggregateQuery RandomQuery(const Schema& schema, const Rational& theta,
                           Rng& rng);

// Exact answer on the microdata.
int64_t TrueCount(const Table& table, const AggregateQuery& query);

// Answer from the published release assuming values spread uniformly over
// each group's region. Counterfeit members are excluded.
Rational EstimateCount(const PublishedRelease& release,
                       const AggregateQuery& query);

// |estimate - truth| / estimate; estimate must be positive.
Rational QueryError(int64_t truth, const Rational& estimate);

// Median of a non-empty list; the mean of the two middle values when the
// size is even.
Rational Median(std::vector<Rational> values);

// Draws `queries` random queries with positive estimate (redrawing those
// with zero estimate, at most 10 * queries draws in total) and returns the
// median error, or nullopt if none could be scored.
std::optional<Rational> MedianQueryError(const Table& table,
                                         const PublishedRelease& release,
                                         const Schema& schema,
                                         const Rational& theta, int queries,
                                         uint64_t seed);

// Average number of counterfeits per group.
Rational CounterfeitsPerGroup(const PublishedRelease& release);

enum class Publisher { kMDistinct, kMDistinctStar, kLDiversity, kMInvariance };

std::string PublisherName(Publisher p);
absl::StatusOr<Publisher> ParsePublisher(absl::string_view name);

struct ScenarioConfig {
  Publisher publisher = Publisher::kMDistinct;
  int m = 2;  // l for l-diversity
  int diameter = 10;
  int releases = 10;
  int pool_records = 20'000;
  int initial_records = 2'000;
  int inserts = 500;
  int deletes = 200;
  int sensitive_updates = 500;
  int queries = 1'000;
  std::vector<Rational> thetas = {Rational(1, 4), Rational(1, 2),
                                  Rational(3, 4)};
  uint64_t seed = 1;
  bool attack = true;
};

// key,value file; unknown keys are rejected. thetas are separated by ';'.
absl::StatusOr<ScenarioConfig> LoadScenarioConfig(
    const std::filesystem::path& path);
absl::Status ValidateScenario(const ScenarioConfig& config);

struct RunReportRow {
  int release = 0;
  int records = 0;
  int groups = 0;
  int counterfeits = 0;
  Rational cnt_g;
  int vulnerable = 0;
  int invalidated = 0;      // cumulative, m-invariance only
  int pruned_records = 0;   // records whose graph lost a node when pruned
  int min_layer = 0;        // smallest surviving layer over all records
  Rational max_risk;
  std::vector<std::optional<Rational>> median_errors;  // one per theta
  double seconds = 0;  // wall clock; kept out of the CSV
};

struct ExperimentResult {
  Schema schema;
  UpdateModel model;
  std::vector<Table> microdata;  // per release
  std::vector<PublishedRelease> releases;
  std::vector<RunReportRow> rows;
};

// Publishes config.releases releases of the synthetic population and
// evaluates each one. When history_dir is given the releases are also
// written there as a history store.
absl::StatusOr<ExperimentResult> RunExperiment(
    const ScenarioConfig& config,
    const std::filesystem::path* history_dir = nullptr);

// One row per release; rationals as 6-digit decimals, missing medians as NA.
std::string FormatRunReport(const std::vector<RunReportRow>& rows,
                            const std::vector<Rational>& thetas);

}  // namespace mdistinct

#endif  // MDISTINCT_EVAL_H_
