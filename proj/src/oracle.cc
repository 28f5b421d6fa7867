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

// Brute-force risk computation over joint value assignments. Shares no code
// with the graph path in sug.cc on purpose.

#include <algorithm>
#include <map>

#include "absl/strings/str_cat.h"
#include "mdistinct/sug.h"

namespace mdistinct {

absl::StatusOr<RiskReport> RisksByJointOracle(
    const std::vector<std::vector<int>>& history, const UpdateModel& model,
    const std::vector<int>& actual, int64_t cap) {
  const size_t layers = history.size();
  if (layers == 0) return absl::InvalidArgumentError("empty history");
  if (actual.size() != layers) {
    return absl::InvalidArgumentError("one actual value per layer required");
  }
  // Distinct values with their multiplicity per layer.
  std::vector<std::vector<std::pair<int, int>>> support(layers);
  int64_t combos = 1;
  for (size_t i = 0; i < layers; ++i) {
    std::map<int, int> counts;
    for (int v : history[i]) ++counts[v];
    if (counts.empty()) return absl::InvalidArgumentError("empty candidate set");
    support[i].assign(counts.begin(), counts.end());
    combos *= static_cast<int64_t>(support[i].size());
    if (combos > cap) {
      return absl::ResourceExhaustedError(
          absl::StrCat("joint oracle exceeds ", cap, " assignments"));
    }
  }

  RiskReport report;
  std::vector<Rational> hit(layers, 0);
  std::vector<std::vector<char>> used(layers);
  for (size_t i = 0; i < layers; ++i) used[i].assign(support[i].size(), 0);
  Rational total = 0;
  std::vector<size_t> pick(layers, 0);
  for (int64_t step = 0; step < combos; ++step) {
    Rational w = 1;
    for (size_t i = 0; i < layers && w != 0; ++i) {
      const auto& [v, n] = support[i][pick[i]];
      Rational prior(n, static_cast<long>(history[i].size()));
      prior.canonicalize();
      w *= prior;
      if (i + 1 < layers) {
        Rational norm = 0;
        for (const auto& [next, unused] : support[i + 1]) {
          norm += model.p(v, next);
        }
        if (norm == 0) {
          w = 0;
        } else {
          w *= model.p(v, support[i + 1][pick[i + 1]].first) / norm;
        }
      }
    }
    if (w != 0) {
      total += w;
      ++report.path_count;
      for (size_t i = 0; i < layers; ++i) {
        used[i][pick[i]] = 1;
        if (support[i][pick[i]].first == actual[i]) hit[i] += w;
      }
    }
    for (size_t i = layers; i-- > 0;) {
      if (++pick[i] < support[i].size()) break;
      pick[i] = 0;
    }
  }
  if (total == 0) {
    return absl::FailedPreconditionError("inconsistent history: no feasible path");
  }
  for (size_t i = 0; i < layers; ++i) {
    report.risks.push_back(hit[i] / total);
    report.layer_sizes.push_back(
        static_cast<int>(std::count(used[i].begin(), used[i].end(), 1)));
  }
  return report;
}

}  // namespace mdistinct
