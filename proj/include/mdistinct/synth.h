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

#ifndef MDISTINCT_SYNTH_H_
#define MDISTINCT_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mdistinct/model.h"
#include "mdistinct/rng.h"
#include "mdistinct/updates.h"

namespace mdistinct {

// Census-shaped schema: age 1..100, gender (2), marital status (6 leaves),
// education (17 leaves, ordered), occupation occ01..occ50 sensitive.
Schema SyntheticSchema();

// Number of occupation values in SyntheticSchema.
inline constexpr int kSyntheticOccupations = 50;

enum class UpdateRule {
  kIncrementCapped,    // +1 per release, stays at the domain max
  kFrozen,
  kMonotoneHierarchy,  // moves to a listed successor with some probability
};

struct AttributeUpdate {
  UpdateRule rule = UpdateRule::kFrozen;
  // For kMonotoneHierarchy: successors[code] lists the codes a value may
  // move to; empty means the value is final.
  std::vector<std::vector<int>> successors;
  uint64_t change_num = 1;
  uint64_t change_den = 10;
};

struct InternalUpdateSpec {
  std::vector<AttributeUpdate> qi;  // one per QI attribute
  // Records that redraw their sensitive value from its CUS each release.
  int sensitive_updates = 0;
};

// Age increments, gender frozen, marital status follows life events,
// education advances one level; each of the latter two moves with
// probability 1/10 per release.
InternalUpdateSpec SyntheticUpdateSpec(const Schema& schema,
                                       int sensitive_updates);

// Records r00001.. drawn uniformly over each attribute domain.
Table GeneratePopulation(const Schema& schema, int count, uint64_t seed);

// Applies one release's worth of internal updates. The result depends only
// on (table, release_index, spec, model, seed). Exactly
// min(sensitive_updates, |table|) records get a fresh value drawn uniformly
// from the CUS of their current value.
absl::StatusOr<Table> SynthesizeInternalUpdates(const Table& table,
                                                int release_index,
                                                const InternalUpdateSpec& spec,
                                                const Schema& schema,
                                                const UpdateModel& model,
                                                uint64_t seed);

}  // namespace mdistinct

#endif  // MDISTINCT_SYNTH_H_
