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

#include "mdistinct/updates.h"

#include <algorithm>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "mdistinct/model.h"

namespace mdistinct {

UpdateModel::UpdateModel(std::vector<ValueSet> cus,
                         std::vector<std::vector<Rational>> p)
    : cus_(std::move(cus)), p_(std::move(p)) {}

UpdateModel UpdateModel::Uniform(std::vector<ValueSet> cus) {
  const int n = static_cast<int>(cus.size());
  std::vector<std::vector<Rational>> p(n, std::vector<Rational>(n, 0));
  for (int a = 0; a < n; ++a) {
    int size = cus[a].Size();
    if (size == 0) continue;
    for (int b : cus[a].Elements()) p[a][b] = Rational(1, size);
  }
  return UpdateModel(std::move(cus), std::move(p));
}

UpdateModel UpdateModel::Identity(int domain_size) {
  std::vector<ValueSet> cus;
  for (int a = 0; a < domain_size; ++a) cus.push_back(ValueSet(domain_size, {a}));
  return Uniform(std::move(cus));
}

UpdateModel UpdateModel::FullyMixing(int domain_size) {
  std::vector<int> all(domain_size);
  std::iota(all.begin(), all.end(), 0);
  return Uniform(std::vector<ValueSet>(domain_size, ValueSet(domain_size, all)));
}

absl::StatusOr<UpdateModel> UpdateModel::Diameter(int domain_size,
                                                  int diameter) {
  if (diameter < 1 || diameter > domain_size) {
    return absl::InvalidArgumentError(absl::StrCat(
        "diameter ", diameter, " outside [1, ", domain_size, "]"));
  }
  if (domain_size % diameter != 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "diameter ", diameter, " does not divide domain size ", domain_size));
  }
  std::vector<ValueSet> cus;
  for (int a = 0; a < domain_size; ++a) {
    ValueSet cls(domain_size);
    int start = a / diameter * diameter;
    for (int b = start; b < start + diameter; ++b) cls.Insert(b);
    cus.push_back(std::move(cls));
  }
  return Uniform(std::move(cus));
}

std::vector<ModelViolation> ValidateUpdateModel(const UpdateModel& model) {
  using Kind = ModelViolation::Kind;
  std::vector<ModelViolation> out;
  const int n = model.domain_size();
  for (int a = 0; a < n; ++a) {
    const ValueSet& ca = model.cus(a);
    if (ca.Empty()) {
      out.push_back({Kind::kEmptyCus, a, a});
      continue;
    }
    Rational sum = 0;
    for (int b = 0; b < n; ++b) {
      const Rational& p = model.p(a, b);
      if (ca.Contains(b)) {
        if (p <= 0) out.push_back({Kind::kNonPositive, a, b});
        if (!model.cus(b).IsSubsetOf(ca)) out.push_back({Kind::kClosure, a, b});
      } else if (p != 0) {
        out.push_back({Kind::kOutsideCus, a, b});
      }
      sum += p;
    }
    if (sum != 1) out.push_back({Kind::kProbabilitySum, a, a});
  }
  return out;
}

std::string DescribeViolation(const ModelViolation& v,
                              const SensitiveDomain* domain) {
  auto name = [&](int code) {
    return domain != nullptr ? domain->name(code) : absl::StrCat(code);
  };
  using Kind = ModelViolation::Kind;
  switch (v.kind) {
    case Kind::kEmptyCus:
      return absl::StrCat("empty candidate update set for ", name(v.a));
    case Kind::kClosure:
      return absl::StrCat("closure violation (", name(v.a), ", ", name(v.b),
                          "): CUS(", name(v.b), ") is not inside CUS(",
                          name(v.a), ")");
    case Kind::kNonPositive:
      return absl::StrCat("non-positive probability (", name(v.a), ", ",
                          name(v.b), ")");
    case Kind::kOutsideCus:
      return absl::StrCat("probability outside CUS (", name(v.a), ", ",
                          name(v.b), ")");
    case Kind::kProbabilitySum:
      return absl::StrCat("probabilities of ", name(v.a), " do not sum to 1");
  }
  return "unknown violation";
}

absl::Status CheckUpdateModel(const UpdateModel& model,
                              const SensitiveDomain* domain) {
  std::vector<ModelViolation> violations = ValidateUpdateModel(model);
  if (violations.empty()) return absl::OkStatus();
  std::vector<std::string> lines;
  for (const ModelViolation& v : violations) {
    lines.push_back(DescribeViolation(v, domain));
  }
  return absl::InvalidArgumentError(absl::StrJoin(lines, "; "));
}

Uss MakeUss(std::vector<ValueSet> entries) {
  std::sort(entries.begin(), entries.end());
  return entries;
}

absl::StatusOr<Uss> UssOf(std::span<const int> values,
                          const UpdateModel& model) {
  std::vector<ValueSet> entries;
  entries.reserve(values.size());
  for (int v : values) {
    if (v < 0 || v >= model.domain_size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("sensitive code ", v, " outside the model domain"));
    }
    entries.push_back(model.cus(v));
  }
  return MakeUss(std::move(entries));
}

bool IsLegalUpdateInstance(std::span<const int> values, const Uss& uss) {
  if (values.size() != uss.size()) return false;
  for (int v : values) {
    bool covered = std::any_of(uss.begin(), uss.end(),
                               [v](const ValueSet& e) { return e.Contains(v); });
    if (!covered) return false;
  }
  for (const ValueSet& e : uss) {
    bool hit = std::any_of(values.begin(), values.end(),
                           [&e](int v) { return e.Contains(v); });
    if (!hit) return false;
  }
  return true;
}

namespace {

bool Augment(int l, const std::vector<std::vector<int>>& adj,
             std::vector<int>& match_right, std::vector<char>& seen) {
  for (int r : adj[l]) {
    if (seen[r]) continue;
    seen[r] = 1;
    if (match_right[r] < 0 || Augment(match_right[r], adj, match_right, seen)) {
      match_right[r] = l;
      return true;
    }
  }
  return false;
}

bool HasPerfectMatching(const std::vector<std::vector<int>>& adj, int n) {
  std::vector<int> m = MaxBipartiteMatching(adj, n);
  return std::none_of(m.begin(), m.end(), [](int r) { return r < 0; });
}

}  // namespace

std::vector<int> MaxBipartiteMatching(const std::vector<std::vector<int>>& adj,
                                      int num_right) {
  std::vector<int> match_right(num_right, -1);
  std::vector<char> seen(num_right);
  for (int l = 0; l < static_cast<int>(adj.size()); ++l) {
    std::fill(seen.begin(), seen.end(), 0);
    Augment(l, adj, match_right, seen);
  }
  std::vector<int> match_left(adj.size(), -1);
  for (int r = 0; r < num_right; ++r) {
    if (match_right[r] >= 0) match_left[match_right[r]] = r;
  }
  return match_left;
}

bool Implies(const Uss& a, const Uss& b) {
  if (a.size() != b.size()) return false;
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<int>> adj(n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      if (b[k].IsSubsetOf(a[j])) adj[k].push_back(j);
    }
    if (adj[k].empty()) return false;
  }
  return HasPerfectMatching(adj, n);
}

std::optional<IntersectionPlan> Intersect(const Uss& a, const Uss& b) {
  if (a.size() != b.size()) return std::nullopt;
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<int>> inter(n, std::vector<int>(n));
  std::vector<std::vector<int>> uni(n, std::vector<int>(n));
  std::vector<std::vector<int>> adj(n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      inter[k][j] = a[k].IntersectionSize(b[j]);
      uni[k][j] = a[k].UnionSize(b[j]);
      if (inter[k][j] > 0) adj[k].push_back(j);
    }
  }
  if (!HasPerfectMatching(adj, n)) return std::nullopt;

  std::vector<int> best;
  int64_t best_num = 0, best_den = 1;
  auto consider = [&](const std::vector<int>& perm) {
    int64_t num = 0, den = 0;
    for (int k = 0; k < n; ++k) {
      if (inter[k][perm[k]] == 0) return;
      num += inter[k][perm[k]];
      den += uni[k][perm[k]];
    }
    if (best.empty() || num * best_den > best_num * den) {
      best = perm;
      best_num = num;
      best_den = den;
    }
  };

  if (n <= kExhaustiveIntersectLimit) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      consider(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    // Greedy: entry by entry take the best overlap that still leaves a
    // perfect matching for the rest.
    std::vector<int> perm(n, -1);
    std::vector<char> used(n, 0);
    for (int k = 0; k < n; ++k) {
      int pick = -1;
      for (int j = 0; j < n; ++j) {
        if (used[j] || inter[k][j] == 0) continue;
        if (pick >= 0 && int64_t{inter[k][j]} * uni[k][pick] <=
                             int64_t{inter[k][pick]} * uni[k][j]) {
          continue;
        }
        std::vector<std::vector<int>> rest;
        for (int kk = k + 1; kk < n; ++kk) {
          std::vector<int> row;
          for (int jj = 0; jj < n; ++jj) {
            if (!used[jj] && jj != j && inter[kk][jj] > 0) row.push_back(jj);
          }
          rest.push_back(std::move(row));
        }
        if (HasPerfectMatching(rest, n)) pick = j;
      }
      perm[k] = pick;
      used[pick] = 1;
    }
    consider(perm);
  }

  IntersectionPlan plan;
  plan.pairing = best;
  std::vector<ValueSet> entries;
  for (int k = 0; k < n; ++k) entries.push_back(a[k].Intersection(b[best[k]]));
  plan.result = MakeUss(std::move(entries));
  plan.score = Rational(best_num, best_den);
  plan.score.canonicalize();
  return plan;
}

bool CusDisjoint(std::span<const int> values, const UpdateModel& model) {
  for (size_t i = 0; i < values.size(); ++i) {
    for (size_t j = i + 1; j < values.size(); ++j) {
      if (model.cus(values[i]).Intersects(model.cus(values[j]))) return false;
    }
  }
  return true;
}

}  // namespace mdistinct
