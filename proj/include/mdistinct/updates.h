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

#ifndef MDISTINCT_UPDATES_H_
#define MDISTINCT_UPDATES_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mdistinct/rational.h"
#include "mdistinct/value_set.h"

namespace mdistinct {

class SensitiveDomain;

// Candidate update sets and transition probabilities over sensitive codes
// 0..n-1. Construction does not validate; see ValidateUpdateModel.
class UpdateModel {
 public:
  UpdateModel() = default;
  // p[a][b] is P_trans(a, b); cus[a] is the support the caller declares.
  UpdateModel(std::vector<ValueSet> cus, std::vector<std::vector<Rational>> p);

  // p_trans uniform over each cus(a).
  static UpdateModel Uniform(std::vector<ValueSet> cus);
  // cus(a) = {a}.
  static UpdateModel Identity(int domain_size);
  // Every value may become any value, uniformly.
  static UpdateModel FullyMixing(int domain_size);
  // Consecutive classes of `diameter` values; cus(a) is a's class.
  static absl::StatusOr<UpdateModel> Diameter(int domain_size, int diameter);

  int domain_size() const { return static_cast<int>(cus_.size()); }
  const ValueSet& cus(int a) const { return cus_[a]; }
  const Rational& p(int a, int b) const { return p_[a][b]; }

 private:
  std::vector<ValueSet> cus_;
  std::vector<std::vector<Rational>> p_;
};

struct ModelViolation {
  enum class Kind {
    kEmptyCus,
    kClosure,           // b in cus(a) but cus(b) not inside cus(a)
    kNonPositive,       // b in cus(a) with p(a, b) <= 0
    kOutsideCus,        // p(a, b) > 0 with b outside cus(a)
    kProbabilitySum,    // p(a, .) does not sum to 1
  };
  Kind kind;
  int a = 0;
  int b = 0;
};

std::vector<ModelViolation> ValidateUpdateModel(const UpdateModel& model);

// One line per violation, using value names when a domain is given.
std::string DescribeViolation(const ModelViolation& v,
                              const SensitiveDomain* domain);

// InvalidArgument listing every violation, or OK.
absl::Status CheckUpdateModel(const UpdateModel& model,
                              const SensitiveDomain* domain);

// Update set signature: a multiset of CUS kept sorted, so two signatures of
// the same multiset compare equal.
using Uss = std::vector<ValueSet>;

Uss MakeUss(std::vector<ValueSet> entries);

absl::StatusOr<Uss> UssOf(std::span<const int> values, const UpdateModel& model);

bool IsLegalUpdateInstance(std::span<const int> values, const Uss& uss);

// True iff |a| = |b| and each entry of b can be paired with a distinct
// superset entry of a.
bool Implies(const Uss& a, const Uss& b);

struct IntersectionPlan {
  // pairing[k] is the entry of b paired with entry k of a.
  std::vector<int> pairing;
  Uss result;
  Rational score;
};

// Highest scored bijection with all pairwise intersections non-empty.
// Score is sum |X & Y| / sum |X | Y|; ties go to the lexicographically
// smallest pairing. Exhaustive up to kExhaustiveIntersectLimit entries,
// greedy above.
inline constexpr int kExhaustiveIntersectLimit = 8;
std::optional<IntersectionPlan> Intersect(const Uss& a, const Uss& b);

// True iff the CUS of the given values are pairwise disjoint.
bool CusDisjoint(std::span<const int> values, const UpdateModel& model);

// Bipartite matching helper shared by several modules: adj[l] lists the
// right nodes left node l may take. Returns match_of_left, -1 for unmatched.
std::vector<int> MaxBipartiteMatching(const std::vector<std::vector<int>>& adj,
                                      int num_right);

}  // namespace mdistinct

#endif  // MDISTINCT_UPDATES_H_
