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

#ifndef MDISTINCT_ENGINE_H_
#define MDISTINCT_ENGINE_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mdistinct/model.h"
#include "mdistinct/rational.h"
#include "mdistinct/rng.h"
#include "mdistinct/updates.h"

namespace mdistinct {

enum class Mode { kMDistinct, kMDistinctStar };

// What the publisher remembers about a record from the latest release.
struct PriorVersion {
  int release_index = 0;
  int sensitive = 0;
  Uss uss;  // USS of the group it was published in
};

struct EngineState {
  int m = 2;
  Mode mode = Mode::kMDistinct;
  uint64_t seed = 0;
  int release_count = 0;
  std::map<std::string, PriorVersion> last;

  // Rebuilds the per-record memory from the latest published release.
  static absl::StatusOr<EngineState> FromRelease(const PublishedRelease& latest,
                                                 const UpdateModel& model, int m,
                                                 Mode mode, uint64_t seed);
};

// Records sharing an update set signature. entries[i] holds table rows whose
// sensitive value lies in signature[i].
class Bucket {
 public:
  Bucket(Uss signature, int num_qi);

  const Uss& signature() const { return signature_; }
  int num_entries() const { return static_cast<int>(signature_.size()); }
  const std::vector<std::vector<int>>& entries() const { return entries_; }
  const std::vector<int>& counterfeits() const { return counterfeits_; }
  int real_count() const { return real_count_; }
  bool empty() const { return real_count_ == 0; }
  // Entries pairwise disjoint; the only buckets star mode lets new records
  // join.
  bool disjoint() const { return disjoint_; }

  bool Covers(int value) const;
  int Frequency(int value) const;
  int MaxFrequency() const { return max_frequency_; }
  // max(F_max, |e_1|, ..., |e_k|), counterfeits included in entry sizes.
  int Delta() const;
  int EntrySize(int entry) const {
    return static_cast<int>(entries_[entry].size()) + counterfeits_[entry];
  }
  // Bounding box of the real members, raw codes.
  const std::vector<Interval>& box() const { return box_; }

  void Add(int row, int entry, const Table& table);
  void SetCounterfeits(int entry, int count) { counterfeits_[entry] = count; }

 private:
  Uss signature_;
  std::vector<std::vector<int>> entries_;
  std::vector<int> counterfeits_;
  std::map<int, int> freq_;
  int max_frequency_ = 0;
  int real_count_ = 0;
  std::vector<Interval> box_;
  bool disjoint_ = true;
};

// Phase 1: one bucket per distinct prior signature in input order, then one
// per best pairwise intersection plan not already present. Single pass.
std::vector<Bucket> Phase1CreateBuckets(const std::vector<Uss>& prior_signatures,
                                        int num_qi);

// Buckets a record may join. prior is null for a first-time record;
// star_new restricts first-time records to disjoint buckets.
int CntBuc(int value, const Uss* prior, const std::vector<Bucket>& buckets,
           bool star_new);

struct AssignmentScore {
  int epsilon = 1;
  Rational lambda;
  Rational value;
};

absl::StatusOr<AssignmentScore> ScoreAssignment(const Bucket& bucket, int entry,
                                                const Record& record,
                                                const Schema& schema);

struct Phase2Result {
  std::vector<Bucket> buckets;   // empty buckets already dropped
  std::vector<int> unassigned;   // rows with CNT_buc = 0
};

// priors[row] is the record's prior version or null. Rows are visited by
// (CNT_buc, id); each goes to its best scored (bucket, entry).
absl::StatusOr<Phase2Result> Phase2Assign(
    const Table& table, const Schema& schema, const UpdateModel& model,
    const std::vector<const PriorVersion*>& priors, std::vector<Bucket> buckets,
    Mode mode);

// Pads every entry with counterfeits up to delta.
void BalanceCounterfeits(Bucket& bucket);

// sum over children of |B_i| * sum_j l_ij / I_j; I from the parent rows.
absl::StatusOr<Rational> SplitScore(const std::vector<int>& parent,
                                    const std::vector<int>& child_a,
                                    const std::vector<int>& child_b,
                                    const Table& table, const Schema& schema);

inline constexpr int64_t kPickOutCap = 1'000'000;

struct Phase3Stats {
  int splits = 0;
  int fallbacks = 0;
};

// Splits a balanced bucket into groups holding one member per entry with
// pairwise-distinct sensitive values; counterfeits get values from their
// entry's CUS.
absl::StatusOr<std::vector<GroupDraft>> Phase3Split(const Bucket& bucket,
                                                    const Table& table,
                                                    const Schema& schema,
                                                    Rng& rng,
                                                    Phase3Stats* stats = nullptr);

struct PublishStats {
  int buckets = 0;
  int bucket_groups = 0;
  int static_groups = 0;
  int static_records = 0;
  Phase3Stats phase3;
};

// Publishes the next release of `table` and advances `state`.
absl::StatusOr<PublishedRelease> Publish(const Table& table,
                                         const Schema& schema,
                                         const UpdateModel& model,
                                         EngineState& state,
                                         PublishStats* stats = nullptr);

struct MDistinctViolation {
  int release_index = 0;
  std::string id;  // empty for group-level problems
  int gid = 0;
  std::string reason;
};

struct VerifyResult {
  bool ok() const { return violations.empty(); }
  std::vector<MDistinctViolation> violations;
};

// Checks m-uniqueness of every release and, for each record present in two
// neighbouring releases, that its new candidate set is a legal update
// instance of its previous group's signature. With star, groups holding a
// first-time record must also have pairwise-disjoint CUS.
VerifyResult VerifyMDistinct(const std::vector<PublishedRelease>& releases,
                             const UpdateModel& model, int m, bool star = false);

}  // namespace mdistinct

#endif  // MDISTINCT_ENGINE_H_
