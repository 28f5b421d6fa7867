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

#include "mdistinct/engine.h"

#include <algorithm>
#include <set>

#include "absl/strings/str_cat.h"
#include "mdistinct/static_partition.h"

namespace mdistinct {

absl::StatusOr<EngineState> EngineState::FromRelease(
    const PublishedRelease& latest, const UpdateModel& model, int m, Mode mode,
    uint64_t seed) {
  EngineState state;
  state.m = m;
  state.mode = mode;
  state.seed = seed;
  state.release_count = latest.release_index;
  for (const QIGroup& g : latest.groups) {
    std::vector<int> values = g.SensitiveValues();
    absl::StatusOr<Uss> uss = UssOf(values, model);
    if (!uss.ok()) return uss.status();
    for (const Member& member : g.members) {
      if (member.counterfeit) continue;
      state.last[member.id] = {latest.release_index, member.sensitive, *uss};
    }
  }
  return state;
}

Bucket::Bucket(Uss signature, int num_qi)
    : signature_(std::move(signature)),
      entries_(signature_.size()),
      counterfeits_(signature_.size(), 0),
      box_(num_qi) {
  for (size_t i = 0; i < signature_.size(); ++i) {
    for (size_t j = i + 1; j < signature_.size(); ++j) {
      if (signature_[i].Intersects(signature_[j])) disjoint_ = false;
    }
  }
}

bool Bucket::Covers(int value) const {
  return std::any_of(signature_.begin(), signature_.end(),
                     [value](const ValueSet& e) { return e.Contains(value); });
}

int Bucket::Frequency(int value) const {
  auto it = freq_.find(value);
  return it == freq_.end() ? 0 : it->second;
}

int Bucket::Delta() const {
  int delta = max_frequency_;
  for (int e = 0; e < num_entries(); ++e) delta = std::max(delta, EntrySize(e));
  return delta;
}

void Bucket::Add(int row, int entry, const Table& table) {
  const Record& r = table[row];
  entries_[entry].push_back(row);
  max_frequency_ = std::max(max_frequency_, ++freq_[r.sensitive]);
  for (size_t d = 0; d < box_.size(); ++d) {
    if (real_count_ == 0) {
      box_[d] = {r.qi[d], r.qi[d]};
    } else {
      box_[d].lo = std::min(box_[d].lo, r.qi[d]);
      box_[d].hi = std::max(box_[d].hi, r.qi[d]);
    }
  }
  ++real_count_;
}

std::vector<Bucket> Phase1CreateBuckets(const std::vector<Uss>& prior_signatures,
                                        int num_qi) {
  std::vector<Uss> originals;
  std::set<Uss> seen;
  for (const Uss& uss : prior_signatures) {
    if (seen.insert(uss).second) originals.push_back(uss);
  }
  std::vector<Uss> intersections;
  for (size_t i = 0; i < originals.size(); ++i) {
    for (size_t j = i + 1; j < originals.size(); ++j) {
      std::optional<IntersectionPlan> plan = Intersect(originals[i], originals[j]);
      if (plan && seen.insert(plan->result).second) {
        intersections.push_back(plan->result);
      }
    }
  }
  std::vector<Bucket> buckets;
  for (Uss& uss : originals) buckets.emplace_back(std::move(uss), num_qi);
  for (Uss& uss : intersections) buckets.emplace_back(std::move(uss), num_qi);
  return buckets;
}

int CntBuc(int value, const Uss* prior, const std::vector<Bucket>& buckets,
           bool star_new) {
  int n = 0;
  for (const Bucket& b : buckets) {
    if (!b.Covers(value)) continue;
    if (prior != nullptr) {
      n += Implies(*prior, b.signature());
    } else {
      n += !star_new || b.disjoint();
    }
  }
  return n;
}

namespace {

int64_t SnappedExtent(const AttributeSchema& attr, int lo, int hi) {
  if (attr.kind == AttributeKind::kCategorical) {
    return attr.hierarchy->LeafCount(attr.hierarchy->CoveringNode(lo, hi));
  }
  return int64_t{hi} - lo + 1;
}

// lambda = after / before as products of per-dimension extents; the domain
// sizes of the normalized measure cancel.
struct Lambda {
  int64_t after = 1;
  int64_t before = 1;
};

absl::StatusOr<Lambda> ComputeLambda(const Bucket& bucket, const Record& record,
                                     const Schema& schema) {
  Lambda out;
  if (bucket.empty()) return out;
  for (int d = 0; d < schema.num_qi(); ++d) {
    const Interval& box = bucket.box()[d];
    int64_t before = SnappedExtent(schema.qi[d], box.lo, box.hi);
    int64_t after = SnappedExtent(schema.qi[d], std::min(box.lo, record.qi[d]),
                                  std::max(box.hi, record.qi[d]));
    if (__builtin_mul_overflow(out.before, before, &out.before) ||
        __builtin_mul_overflow(out.after, after, &out.after)) {
      return absl::ResourceExhaustedError("region measure overflows 64 bits");
    }
  }
  return out;
}

int Epsilon(const Bucket& bucket, int entry, int value) {
  int delta = bucket.Delta();
  if (delta == 0) return 1;
  if (bucket.Frequency(value) == delta || bucket.EntrySize(entry) == delta) {
    return -1;
  }
  return 1;
}

// Orders (epsilon, lambda) as the score 1/lambda or -lambda would.
bool Better(int eps_a, const Lambda& a, int eps_b, const Lambda& b) {
  if (eps_a != eps_b) return eps_a > eps_b;
  __int128 lhs = __int128{a.after} * b.before;
  __int128 rhs = __int128{b.after} * a.before;
  return lhs < rhs;
}

bool SameScore(int eps_a, const Lambda& a, int eps_b, const Lambda& b) {
  return eps_a == eps_b &&
         __int128{a.after} * b.before == __int128{b.after} * a.before;
}

}  // namespace

absl::StatusOr<AssignmentScore> ScoreAssignment(const Bucket& bucket, int entry,
                                                const Record& record,
                                                const Schema& schema) {
  if (entry < 0 || entry >= bucket.num_entries() ||
      !bucket.signature()[entry].Contains(record.sensitive)) {
    return absl::InvalidArgumentError("record's value is not in the entry");
  }
  absl::StatusOr<Lambda> lambda = ComputeLambda(bucket, record, schema);
  if (!lambda.ok()) return lambda.status();
  AssignmentScore score;
  score.epsilon = Epsilon(bucket, entry, record.sensitive);
  score.lambda = Rational(lambda->after, lambda->before);
  score.lambda.canonicalize();
  score.value = score.epsilon == 1 ? Rational(1 / score.lambda)
                                   : Rational(-score.lambda);
  return score;
}

absl::StatusOr<Phase2Result> Phase2Assign(
    const Table& table, const Schema& schema, const UpdateModel& model,
    const std::vector<const PriorVersion*>& priors, std::vector<Bucket> buckets,
    Mode mode) {
  (void)model;
  const int n = static_cast<int>(table.size());
  const bool star = mode == Mode::kMDistinctStar;

  // implies[sig][b] for each distinct prior signature.
  std::map<Uss, std::vector<char>> implies;
  auto implies_row = [&](const Uss& uss) -> const std::vector<char>& {
    auto it = implies.find(uss);
    if (it != implies.end()) return it->second;
    std::vector<char> row(buckets.size());
    for (size_t b = 0; b < buckets.size(); ++b) {
      row[b] = Implies(uss, buckets[b].signature());
    }
    return implies.emplace(uss, std::move(row)).first->second;
  };
  auto eligible = [&](int row, size_t b) {
    const Bucket& bucket = buckets[b];
    if (!bucket.Covers(table[row].sensitive)) return false;
    if (priors[row] != nullptr) return implies_row(priors[row]->uss)[b] != 0;
    return !star || bucket.disjoint();
  };

  Phase2Result result;
  std::vector<std::pair<int, int>> order;  // (cnt, row); rows are id-sorted
  for (int row = 0; row < n; ++row) {
    int cnt = 0;
    for (size_t b = 0; b < buckets.size(); ++b) cnt += eligible(row, b);
    if (cnt == 0) {
      result.unassigned.push_back(row);
    } else {
      order.push_back({cnt, row});
    }
  }
  std::sort(order.begin(), order.end());

  for (const auto& [cnt, row] : order) {
    const Record& record = table[row];
    int best_bucket = -1, best_entry = -1, best_eps = 0;
    Lambda best_lambda;
    for (size_t b = 0; b < buckets.size(); ++b) {
      if (!eligible(row, b)) continue;
      const Bucket& bucket = buckets[b];
      absl::StatusOr<Lambda> lambda = ComputeLambda(bucket, record, schema);
      if (!lambda.ok()) return lambda.status();
      for (int e = 0; e < bucket.num_entries(); ++e) {
        if (!bucket.signature()[e].Contains(record.sensitive)) continue;
        int eps = Epsilon(bucket, e, record.sensitive);
        bool take = best_bucket < 0 || Better(eps, *lambda, best_eps, best_lambda);
        if (!take && best_bucket == static_cast<int>(b) &&
            SameScore(eps, *lambda, best_eps, best_lambda)) {
          take = bucket.entries()[e].size() <
                 bucket.entries()[best_entry].size();
        }
        if (take) {
          best_bucket = static_cast<int>(b);
          best_entry = e;
          best_eps = eps;
          best_lambda = *lambda;
        }
      }
    }
    buckets[best_bucket].Add(row, best_entry, table);
  }

  for (Bucket& b : buckets) {
    if (!b.empty()) result.buckets.push_back(std::move(b));
  }
  return result;
}

void BalanceCounterfeits(Bucket& bucket) {
  int delta = bucket.Delta();
  for (int e = 0; e < bucket.num_entries(); ++e) {
    bucket.SetCounterfeits(
        e, delta - static_cast<int>(bucket.entries()[e].size()));
  }
}

namespace {

// Checks one group against the signature of each returning member and, in
// star mode, disjointness for groups with a first-time member.
void CheckGroup(const QIGroup& g, int release_index, int m, bool star,
                const UpdateModel& model,
                const std::map<std::string, const Uss*>& previous,
                std::vector<MDistinctViolation>& out) {
  std::vector<int> values = g.SensitiveValues();
  if (static_cast<int>(values.size()) < m) {
    out.push_back({release_index, "", g.gid,
                   absl::StrCat("group has ", values.size(), " members, fewer than ", m)});
  }
  std::vector<int> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    out.push_back({release_index, "", g.gid, "duplicate sensitive values"});
  }
  bool has_new = false;
  for (const Member& member : g.members) {
    if (member.counterfeit) continue;
    auto it = previous.find(member.id);
    if (it == previous.end()) {
      has_new = true;
      continue;
    }
    if (!IsLegalUpdateInstance(values, *it->second)) {
      out.push_back({release_index, member.id, g.gid,
                     "candidate set is not a legal update instance of the "
                     "previous signature"});
    }
  }
  if (star && has_new && !CusDisjoint(values, model)) {
    out.push_back({release_index, "", g.gid,
                   "group with a first-time record has overlapping CUS"});
  }
}

}  // namespace

VerifyResult VerifyMDistinct(const std::vector<PublishedRelease>& releases,
                             const UpdateModel& model, int m, bool star) {
  VerifyResult result;
  std::vector<Uss> prev_sigs;
  std::map<std::string, const Uss*> previous;
  for (const PublishedRelease& release : releases) {
    std::map<int, int> stats;
    for (const QIGroup& g : release.groups) {
      int c = g.CounterfeitCount();
      if (c > 0) stats[g.gid] = c;
      CheckGroup(g, release.release_index, m, star, model, previous,
                 result.violations);
    }
    if (stats != release.counterfeit_stats) {
      result.violations.push_back(
          {release.release_index, "", 0, "counterfeit statistics mismatch"});
    }
    std::vector<Uss> sigs;
    sigs.reserve(release.groups.size());
    for (const QIGroup& g : release.groups) {
      absl::StatusOr<Uss> uss = UssOf(g.SensitiveValues(), model);
      if (!uss.ok()) {
        result.violations.push_back({release.release_index, "", g.gid,
                                     std::string(uss.status().message())});
        sigs.emplace_back();
      } else {
        sigs.push_back(*std::move(uss));
      }
    }
    std::map<std::string, const Uss*> current;
    for (size_t gi = 0; gi < release.groups.size(); ++gi) {
      for (const Member& member : release.groups[gi].members) {
        if (!member.counterfeit) current[member.id] = &sigs[gi];
      }
    }
    // Moving the vector keeps its buffer, so `current` stays valid.
    prev_sigs = std::move(sigs);
    previous = std::move(current);
  }
  return result;
}

absl::StatusOr<PublishedRelease> Publish(const Table& input, const Schema& schema,
                                         const UpdateModel& model,
                                         EngineState& state,
                                         PublishStats* stats) {
  Table table = input;
  std::sort(table.begin(), table.end(),
            [](const Record& a, const Record& b) { return a.id < b.id; });
  for (size_t i = 0; i + 1 < table.size(); ++i) {
    if (table[i].id == table[i + 1].id) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate record id '", table[i].id, "'"));
    }
  }
  const int release_index = state.release_count + 1;
  const bool star = state.mode == Mode::kMDistinctStar;

  std::vector<const PriorVersion*> priors(table.size(), nullptr);
  std::vector<Uss> prior_signatures;
  for (size_t row = 0; row < table.size(); ++row) {
    const Record& r = table[row];
    if (r.sensitive < 0 || r.sensitive >= model.domain_size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("'", r.id, "': sensitive value outside the domain"));
    }
    auto it = state.last.find(r.id);
    if (it == state.last.end()) continue;
    if (!model.cus(it->second.sensitive).Contains(r.sensitive)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "'", r.id, "': sensitive update outside the candidate update set"));
    }
    priors[row] = &it->second;
    prior_signatures.push_back(it->second.uss);
  }

  std::vector<Bucket> buckets =
      Phase1CreateBuckets(prior_signatures, schema.num_qi());
  absl::StatusOr<Phase2Result> phase2 =
      Phase2Assign(table, schema, model, priors, std::move(buckets), state.mode);
  if (!phase2.ok()) return phase2.status();

  Rng rng(DeriveSeed(state.seed, static_cast<uint64_t>(release_index)));
  PublishStats local;
  std::vector<GroupDraft> drafts;
  for (Bucket& bucket : phase2->buckets) {
    BalanceCounterfeits(bucket);
    absl::StatusOr<std::vector<GroupDraft>> groups =
        Phase3Split(bucket, table, schema, rng, &local.phase3);
    if (!groups.ok()) return groups.status();
    local.bucket_groups += static_cast<int>(groups->size());
    for (GroupDraft& g : *groups) drafts.push_back(std::move(g));
  }
  local.buckets = static_cast<int>(phase2->buckets.size());

  StaticPartitionOptions options;
  options.m = state.m;
  options.star = star;
  options.allow_counterfeits = true;
  absl::StatusOr<std::vector<GroupDraft>> fresh = StaticPartition(
      phase2->unassigned, table, schema, model, options, rng);
  if (!fresh.ok()) return fresh.status();
  local.static_groups = static_cast<int>(fresh->size());
  local.static_records = static_cast<int>(phase2->unassigned.size());
  for (GroupDraft& g : *fresh) drafts.push_back(std::move(g));

  absl::StatusOr<PublishedRelease> release =
      Generalize(release_index, drafts, table, schema);
  if (!release.ok()) return release.status();

  // Self-check against the state the release was built from.
  std::map<std::string, const Uss*> previous;
  for (const auto& [id, prior] : state.last) previous[id] = &prior.uss;
  std::vector<MDistinctViolation> violations;
  for (const QIGroup& g : release->groups) {
    CheckGroup(g, release_index, state.m, star, model, previous, violations);
  }
  if (!violations.empty()) {
    const MDistinctViolation& v = violations.front();
    return absl::InternalError(absl::StrCat("release ", release_index,
                                            " group ", v.gid, " ", v.id, ": ",
                                            v.reason));
  }

  absl::StatusOr<EngineState> next =
      EngineState::FromRelease(*release, model, state.m, state.mode, state.seed);
  if (!next.ok()) return next.status();
  state = *std::move(next);
  if (stats != nullptr) *stats = local;
  return release;
}

}  // namespace mdistinct
