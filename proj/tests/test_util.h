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

#ifndef MDISTINCT_TESTS_TEST_UTIL_H_
#define MDISTINCT_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mdistinct/io.h"
#include "mdistinct/model.h"
#include "mdistinct/rng.h"
#include "mdistinct/updates.h"

#define MDISTINCT_CONCAT_INNER(a, b) a##b
#define MDISTINCT_CONCAT(a, b) MDISTINCT_CONCAT_INNER(a, b)

#define MDISTINCT_ASSIGN_OR_RETURN_IMPL(tmp, lhs, expr, fail) \
  auto tmp = (expr);                                          \
  fail(tmp.status().ok()) << tmp.status();                    \
  lhs = *std::move(tmp)

#define ASSERT_OK_AND_ASSIGN(lhs, expr)                                     \
  MDISTINCT_ASSIGN_OR_RETURN_IMPL(MDISTINCT_CONCAT(status_or_, __LINE__), \
                                  lhs, expr, ASSERT_TRUE)

#define ASSERT_OK(expr)                    \
  do {                                     \
    const absl::Status _s = (expr);        \
    ASSERT_TRUE(_s.ok()) << _s;            \
  } while (0)

#define EXPECT_OK(expr)                    \
  do {                                     \
    const absl::Status _s = (expr);        \
    EXPECT_TRUE(_s.ok()) << _s;            \
  } while (0)

namespace mdistinct::testing {

inline std::filesystem::path DataDir() { return MDISTINCT_TEST_DATA; }

// Fresh empty directory under the system temp dir.
std::filesystem::path TempDir(const std::string& name);

// The disease schema and model of the worked example: digestive
// {Dyspepsia, Gastritis}, respiratory {Pneumonia, Flu, Lung Cancer},
// eye {Glaucoma, Cataract}, uniform within each class.
Schema DiseaseSchema();
UpdateModel DiseaseModel(const Schema& schema);
int Code(const Schema& schema, const std::string& value);

// Releases of a fixture history directory (t3_t4 or t3_t5).
std::vector<PublishedRelease> FixtureHistory(const std::string& name,
                                             const Schema& schema);

// Model whose rows have a random non-empty support and random positive
// integer weights; cus is the support. No closure guarantee.
UpdateModel RandomSparseModel(int domain, Rng& rng);

// Candidate multisets: layers in 1..max_layers, each with 1..max_values
// entries drawn from the domain (duplicates allowed).
std::vector<std::vector<int>> RandomHistory(int domain, int max_layers,
                                            int max_values, Rng& rng);

// A random history that has at least one feasible path under `model`,
// plus actual values along one such path. Returns false if none was found.
bool RandomFeasibleInstance(const UpdateModel& model, int max_layers,
                            int max_values, Rng& rng,
                            std::vector<std::vector<int>>& history,
                            std::vector<int>& actual);

}  // namespace mdistinct::testing

#endif  // MDISTINCT_TESTS_TEST_UTIL_H_
