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

#include "test_util.h"

#include <unistd.h>

#include <cstdlib>

#include "absl/strings/str_cat.h"

namespace mdistinct::testing {

std::filesystem::path TempDir(const std::string& name) {
  std::filesystem::path dir =
      std::filesystem::temp_directory_path() /
      absl::StrCat("mdistinct_test_", name, "_", ::getpid());
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

Schema DiseaseSchema() {
  absl::StatusOr<Schema> schema = LoadSchema(DataDir() / "schema.csv");
  if (!schema.ok()) std::abort();
  return *std::move(schema);
}

UpdateModel DiseaseModel(const Schema& schema) {
  absl::StatusOr<UpdateModel> model =
      LoadUpdateModel(DataDir() / "disease_model.csv", schema);
  if (!model.ok()) std::abort();
  return *std::move(model);
}

int Code(const Schema& schema, const std::string& value) {
  std::optional<int> code = schema.sensitive.Find(value);
  if (!code) std::abort();
  return *code;
}

std::vector<PublishedRelease> FixtureHistory(const std::string& name,
                                             const Schema& schema) {
  absl::StatusOr<std::vector<PublishedRelease>> releases =
      HistoryStore(DataDir() / name).LoadAll(schema);
  if (!releases.ok()) std::abort();
  return *std::move(releases);
}

UpdateModel RandomSparseModel(int domain, Rng& rng) {
  std::vector<ValueSet> cus;
  std::vector<std::vector<Rational>> p(domain, std::vector<Rational>(domain, 0));
  for (int a = 0; a < domain; ++a) {
    ValueSet support(domain);
    while (support.Empty()) {
      for (int b = 0; b < domain; ++b) {
        if (rng.Chance(1, 3)) support.Insert(b);
      }
    }
    Rational total = 0;
    for (int b : support.Elements()) {
      p[a][b] = static_cast<long>(1 + rng.Uniform(4));
      total += p[a][b];
    }
    for (int b : support.Elements()) {
      p[a][b] /= total;
      p[a][b].canonicalize();
    }
    cus.push_back(support);
  }
  return UpdateModel(std::move(cus), std::move(p));
}

std::vector<std::vector<int>> RandomHistory(int domain, int max_layers,
                                            int max_values, Rng& rng) {
  std::vector<std::vector<int>> history(1 + rng.Uniform(max_layers));
  for (auto& layer : history) {
    layer.resize(1 + rng.Uniform(max_values));
    for (int& v : layer) v = static_cast<int>(rng.Uniform(domain));
  }
  return history;
}

bool RandomFeasibleInstance(const UpdateModel& model, int max_layers,
                            int max_values, Rng& rng,
                            std::vector<std::vector<int>>& history,
                            std::vector<int>& actual) {
  const int domain = model.domain_size();
  const int layers = 1 + static_cast<int>(rng.Uniform(max_layers));
  actual.assign(1, static_cast<int>(rng.Uniform(domain)));
  for (int i = 1; i < layers; ++i) {
    std::vector<int> next;
    for (int b = 0; b < domain; ++b) {
      if (model.p(actual.back(), b) > 0) next.push_back(b);
    }
    if (next.empty()) return false;
    actual.push_back(next[rng.Uniform(next.size())]);
  }
  history.assign(layers, {});
  for (int i = 0; i < layers; ++i) {
    history[i].push_back(actual[i]);
    const int extra = static_cast<int>(rng.Uniform(max_values));
    for (int k = 0; k < extra; ++k) {
      history[i].push_back(static_cast<int>(rng.Uniform(domain)));
    }
    rng.Shuffle(history[i]);
  }
  return true;
}

}  // namespace mdistinct::testing
