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

#ifndef MDISTINCT_BASELINES_H_
#define MDISTINCT_BASELINES_H_

#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mdistinct/model.h"
#include "mdistinct/rng.h"
#include "mdistinct/updates.h"

namespace mdistinct {

// Each release anonymized on its own: groups of at least l members with
// pairwise-distinct sensitive values, no counterfeits.
absl::StatusOr<PublishedRelease> PublishLDiversity(const Table& table,
                                                   const Schema& schema,
                                                   int release_index, int l,
                                                   uint64_t seed);

// Simplified m-invariance: a returning record keeps the sensitive-value set
// of its previous group as its signature.
struct MInvarianceState {
  int m = 2;
  uint64_t seed = 0;
  int release_count = 0;
  std::map<std::string, std::vector<int>> signature;  // sorted values
  int cumulative_invalidated = 0;

  static MInvarianceState FromRelease(const PublishedRelease& latest, int m,
                                      uint64_t seed);
};

struct MInvarianceOutput {
  PublishedRelease release;
  // Returning records whose current value left their signature; they are
  // republished in fresh groups.
  std::vector<std::string> invalidated;
};

absl::StatusOr<MInvarianceOutput> PublishMInvariance(const Table& table,
                                                     const Schema& schema,
                                                     MInvarianceState& state);

}  // namespace mdistinct

#endif  // MDISTINCT_BASELINES_H_
