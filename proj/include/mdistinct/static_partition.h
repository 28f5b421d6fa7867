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

#ifndef MDISTINCT_STATIC_PARTITION_H_
#define MDISTINCT_STATIC_PARTITION_H_

#include <vector>

#include "absl/status/statusor.h"
#include "mdistinct/model.h"
#include "mdistinct/rng.h"
#include "mdistinct/updates.h"

namespace mdistinct {

// Groups records with no history into groups of at least m members with
// pairwise-distinct keys. A key is a sensitive value, or in star mode the
// connected component of values whose CUS overlap, so that distinct keys
// imply pairwise-disjoint CUS.
struct StaticPartitionOptions {
  int m = 2;
  bool star = false;
  // When false, a set that is not m-eligible is an error; when true it is
  // padded with counterfeits whose keys are absent from their group.
  bool allow_counterfeits = true;
};

// key_of_value[v] for every sensitive code v.
std::vector<int> PartitionKeys(const UpdateModel& model, bool star);

absl::StatusOr<std::vector<GroupDraft>> StaticPartition(
    const std::vector<int>& rows, const Table& table, const Schema& schema,
    const UpdateModel& model, const StaticPartitionOptions& options, Rng& rng);

}  // namespace mdistinct

#endif  // MDISTINCT_STATIC_PARTITION_H_
