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

#include "mdistinct/eval.h"

#include <algorithm>
#include <chrono>
#include <limits>
#include <map>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "mdistinct/baselines.h"
#include "mdistinct/csv.h"
#include "mdistinct/engine.h"
#include "mdistinct/io.h"
#include "mdistinct/sug.h"
#include "mdistinct/synth.h"

namespace mdistinct {
namespace {

// Stream labels for the experiment's independent random sources.
constexpr uint64_t kPoolLabel = 0x706f6f6c;
constexpr uint64_t kUpdateLabel = 0x75706474;
constexpr uint64_t kChurnLabel = 0x63687572;
constexpr uint64_t kQueryLabel = 0x71756572;

int64_t Overlap(const Interval& a, const Interval& b) {
  return std::max(0, std::min(a.hi, b.hi) - std::max(a.lo, b.lo) + 1);
}

Interval RandomRange(int lo, int hi, const Rational& theta, Rng& rng) {
  const int64_t size = int64_t{hi} - lo + 1;
  // round(theta * size), halves up
  Rational scaled = theta * size;
  mpz_class twice = 2 * scaled.get_num() + scaled.get_den();
  mpz_class rounded;
  mpz_fdiv_q(rounded.get_mpz_t(), twice.get_mpz_t(),
             mpz_class(2 * scaled.get_den()).get_mpz_t());
  int64_t width = std::clamp<int64_t>(rounded.get_si(), 1, size);
  int start = lo + static_cast<int>(rng.Uniform(size - width + 1));
  return {start, static_cast<int>(start + width - 1)};
}

// Per-group data for exact estimates over a common denominator L: the
// estimate is sum_g scale_g * hits_g * prod_j overlap_j / L.
struct GroupView {
  std::vector<Interval> dims;
  std::vector<int> values;  // real members, sorted
  mpz_class scale;          // L / prod_j extent_j
};

struct ReleaseView {
  std::vector<GroupView> groups;
  mpz_class denominator;  // L
};

ReleaseView MakeView(const PublishedRelease& release) {
  ReleaseView view;
  if (release.groups.empty()) {
    view.denominator = 1;
    return view;
  }
  const size_t q = release.groups[0].region.dims.size();
  std::vector<mpz_class> lcm(q, 1);
  for (const QIGroup& g : release.groups) {
    for (size_t j = 0; j < q; ++j) {
      mpz_lcm_ui(lcm[j].get_mpz_t(), lcm[j].get_mpz_t(),
                 static_cast<unsigned long>(DimensionExtent(g.region.dims[j])));
    }
  }
  view.denominator = 1;
  for (const mpz_class& l : lcm) view.denominator *= l;
  for (const QIGroup& g : release.groups) {
    GroupView gv;
    gv.dims = g.region.dims;
    for (const Member& m : g.members) {
      if (!m.counterfeit) gv.values.push_back(m.sensitive);
    }
    std::sort(gv.values.begin(), gv.values.end());
    gv.scale = 1;
    for (size_t j = 0; j < q; ++j) {
      gv.scale *= lcm[j] / static_cast<unsigned long>(DimensionExtent(gv.dims[j]));
    }
    view.groups.push_back(std::move(gv));
  }
  return view;
}

// Estimate times L.
mpz_class ScaledEstimate(const ReleaseView& view, const AggregateQuery& query) {
  mpz_class sum = 0;
  for (const GroupView& g : view.groups) {
    auto first = std::lower_bound(g.values.begin(), g.values.end(),
                                  query.sensitive.lo);
    auto last = std::upper_bound(g.values.begin(), g.values.end(),
                                 query.sensitive.hi);
    unsigned long factor = static_cast<unsigned long>(last - first);
    for (size_t j = 0; j < g.dims.size() && factor > 0; ++j) {
      factor *= static_cast<unsigned long>(Overlap(g.dims[j], query.qi[j]));
    }
    if (factor > 0) mpz_addmul_ui(sum.get_mpz_t(), g.scale.get_mpz_t(), factor);
  }
  return sum;
}

std::string FormatOptional(const std::optional<Rational>& v) {
  return v ? FormatDecimal(*v, 6) : "NA";
}

}  // namespace

AggregateQuery RandomQuery(const Schema& schema, const Rational& theta,
                           Rng& rng) {
  AggregateQuery q;
  for (const AttributeSchema& a : schema.qi) {
    q.qi.push_back(RandomRange(a.min_code(), a.max_code(), theta, rng));
  }
  q.sensitive = RandomRange(0, schema.sensitive.size() - 1, theta, rng);
  return q;
}

int64_t TrueCount(const Table& table, const AggregateQuery& query) {
  int64_t count = 0;
  for (const Record& r : table) {
    if (r.sensitive < query.sensitive.lo || r.sensitive > query.sensitive.hi) {
      continue;
    }
    bool inside = true;
    for (size_t j = 0; j < query.qi.size() && inside; ++j) {
      inside = r.qi[j] >= query.qi[j].lo && r.qi[j] <= query.qi[j].hi;
    }
    if (inside) ++count;
  }
  return count;
}

Rational EstimateCount(const PublishedRelease& release,
                       const AggregateQuery& query) {
  Rational total = 0;
  for (const QIGroup& g : release.groups) {
    int hits = 0;
    for (const Member& m : g.members) {
      if (!m.counterfeit && m.sensitive >= query.sensitive.lo &&
          m.sensitive <= query.sensitive.hi) {
        ++hits;
      }
    }
    if (hits == 0) continue;
    Rational p = hits;
    for (size_t j = 0; j < query.qi.size(); ++j) {
      Rational share(Overlap(g.region.dims[j], query.qi[j]),
                     DimensionExtent(g.region.dims[j]));
      share.canonicalize();
      p *= share;
    }
    total += p;
  }
  total.canonicalize();
  return total;
}

Rational QueryError(int64_t truth, const Rational& estimate) {
  Rational diff = estimate - Rational(truth);
  Rational err = abs(diff) / estimate;
  err.canonicalize();
  return err;
}

Rational Median(std::vector<Rational> values) {
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  Rational mid = (values[n / 2 - 1] + values[n / 2]) / 2;
  mid.canonicalize();
  return mid;
}

std::optional<Rational> MedianQueryError(const Table& table,
                                         const PublishedRelease& release,
                                         const Schema& schema,
                                         const Rational& theta, int queries,
                                         uint64_t seed) {
  if (queries <= 0) return std::nullopt;
  ReleaseView view = MakeView(release);
  Rng rng(seed);
  std::vector<Rational> errors;
  const int64_t max_draws = int64_t{10} * queries;
  for (int64_t draw = 0;
       draw < max_draws && static_cast<int>(errors.size()) < queries; ++draw) {
    AggregateQuery q = RandomQuery(schema, theta, rng);
    mpz_class scaled = ScaledEstimate(view, q);
    if (scaled == 0) continue;
    mpz_class diff = scaled - view.denominator * TrueCount(table, q);
    Rational err(abs(diff), scaled);
    err.canonicalize();
    errors.push_back(std::move(err));
  }
  if (errors.empty()) return std::nullopt;
  return Median(std::move(errors));
}

Rational CounterfeitsPerGroup(const PublishedRelease& release) {
  if (release.groups.empty()) return 0;
  Rational r(release.CounterfeitCount(),
             static_cast<long>(release.groups.size()));
  r.canonicalize();
  return r;
}

std::string PublisherName(Publisher p) {
  switch (p) {
    case Publisher::kMDistinct:
      return "m_distinct";
    case Publisher::kMDistinctStar:
      return "m_distinct_star";
    case Publisher::kLDiversity:
      return "l_diversity";
    case Publisher::kMInvariance:
      return "m_invariance";
  }
  return "";
}

absl::StatusOr<Publisher> ParsePublisher(absl::string_view name) {
  for (Publisher p : {Publisher::kMDistinct, Publisher::kMDistinctStar,
                      Publisher::kLDiversity, Publisher::kMInvariance}) {
    if (name == PublisherName(p)) return p;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown publisher '", name, "'"));
}

absl::Status ValidateScenario(const ScenarioConfig& c) {
  auto bad = [](absl::string_view what) {
    return absl::InvalidArgumentError(absl::StrCat("scenario: ", what));
  };
  if (c.m < 2) return bad("m (or l) must be at least 2");
  if (c.diameter < 1 || kSyntheticOccupations % c.diameter != 0) {
    return bad(absl::StrCat("d must divide ", kSyntheticOccupations));
  }
  if (c.releases < 0 || c.pool_records < 0 || c.initial_records < 0 ||
      c.inserts < 0 || c.deletes < 0 || c.sensitive_updates < 0 ||
      c.queries < 0) {
    return bad("counts must be non-negative");
  }
  if (c.initial_records > c.pool_records) {
    return bad("initial_records exceeds pool_records");
  }
  for (const Rational& t : c.thetas) {
    if (t <= 0 || t > 1) return bad("theta must lie in (0, 1]");
  }
  return absl::OkStatus();
}

absl::StatusOr<ScenarioConfig> LoadScenarioConfig(
    const std::filesystem::path& path) {
  auto kv = ReadKeyValues(path);
  if (!kv.ok()) return kv.status();
  ScenarioConfig c;
  std::map<std::string, int*> ints = {
      {"m", &c.m},
      {"l", &c.m},
      {"d", &c.diameter},
      {"releases", &c.releases},
      {"pool_records", &c.pool_records},
      {"initial_records", &c.initial_records},
      {"inserts", &c.inserts},
      {"deletes", &c.deletes},
      {"sensitive_updates", &c.sensitive_updates},
      {"queries", &c.queries},
  };
  for (const auto& [key, value] : *kv) {
    auto fail = [&, &key = key, &value = value](absl::string_view why) {
      return absl::InvalidArgumentError(absl::StrCat(
          path.string(), ": ", key, "=", value, ": ", why));
    };
    if (auto it = ints.find(key); it != ints.end()) {
      if (!absl::SimpleAtoi(value, it->second)) return fail("not an integer");
    } else if (key == "publisher") {
      absl::StatusOr<Publisher> p = ParsePublisher(value);
      if (!p.ok()) return fail(p.status().message());
      c.publisher = *p;
    } else if (key == "seed") {
      if (!absl::SimpleAtoi(value, &c.seed)) return fail("not an integer");
    } else if (key == "attack") {
      if (value != "0" && value != "1") return fail("must be 0 or 1");
      c.attack = value == "1";
    } else if (key == "thetas") {
      c.thetas.clear();
      for (absl::string_view t : absl::StrSplit(value, ';', absl::SkipEmpty())) {
        absl::StatusOr<Rational> r = ParseRational(t);
        if (!r.ok()) return fail(r.status().message());
        c.thetas.push_back(*r);
      }
    } else {
      return fail("unknown key");
    }
  }
  if (absl::Status s = ValidateScenario(c); !s.ok()) return s;
  return c;
}

absl::StatusOr<ExperimentResult> RunExperiment(
    const ScenarioConfig& config, const std::filesystem::path* history_dir) {
  if (absl::Status s = ValidateScenario(config); !s.ok()) return s;
  ExperimentResult result;
  result.schema = SyntheticSchema();
  const Schema& schema = result.schema;
  absl::StatusOr<UpdateModel> model =
      UpdateModel::Diameter(kSyntheticOccupations, config.diameter);
  if (!model.ok()) return model.status();
  result.model = *model;

  std::optional<HistoryStore> store;
  if (history_dir != nullptr) {
    store.emplace(*history_dir);
    if (store->ReleaseCount() > 0) {
      return absl::FailedPreconditionError(absl::StrCat(
          history_dir->string(), " already holds a history"));
    }
    if (absl::Status s = store->WriteSchema(schema); !s.ok()) return s;
    if (absl::Status s = store->WriteMeta(
            {config.seed, config.m, PublisherName(config.publisher)});
        !s.ok()) {
      return s;
    }
  }

  const Table pool = GeneratePopulation(schema, config.pool_records,
                                        DeriveSeed(config.seed, kPoolLabel));
  const InternalUpdateSpec spec =
      SyntheticUpdateSpec(schema, config.sensitive_updates);
  const uint64_t update_seed = DeriveSeed(config.seed, kUpdateLabel);
  const uint64_t churn_seed = DeriveSeed(config.seed, kChurnLabel);
  const uint64_t query_seed = DeriveSeed(config.seed, kQueryLabel);
  size_t next_insert = std::min<size_t>(config.initial_records, pool.size());

  const Mode mode = config.publisher == Publisher::kMDistinctStar
                        ? Mode::kMDistinctStar
                        : Mode::kMDistinct;
  EngineState engine;
  engine.m = config.m;
  engine.mode = mode;
  engine.seed = config.seed;
  MInvarianceState minv;
  minv.m = config.m;
  minv.seed = config.seed;

  Table table(pool.begin(), pool.begin() + next_insert);
  for (int r = 1; r <= config.releases; ++r) {
    const auto start = std::chrono::steady_clock::now();
    if (r > 1) {
      absl::StatusOr<Table> updated =
          SynthesizeInternalUpdates(table, r, spec, schema, result.model, update_seed);
      if (!updated.ok()) return updated.status();
      table = *std::move(updated);
      Rng churn(DeriveSeed(churn_seed, static_cast<uint64_t>(r)));
      const int drop = std::min<int>(config.deletes, static_cast<int>(table.size()));
      for (int i = 0; i < drop; ++i) {
        size_t j = i + churn.Uniform(table.size() - i);
        std::swap(table[i], table[j]);
      }
      table.erase(table.begin(), table.begin() + drop);
      if (next_insert + config.inserts > pool.size()) {
        return absl::FailedPreconditionError(
            absl::StrCat("record pool exhausted at release ", r));
      }
      table.insert(table.end(), pool.begin() + next_insert,
                   pool.begin() + next_insert + config.inserts);
      next_insert += config.inserts;
      std::sort(table.begin(), table.end(),
                [](const Record& a, const Record& b) { return a.id < b.id; });
    }

    RunReportRow row;
    absl::StatusOr<PublishedRelease> release;
    switch (config.publisher) {
      case Publisher::kMDistinct:
      case Publisher::kMDistinctStar:
        release = Publish(table, schema, result.model, engine);
        break;
      case Publisher::kLDiversity:
        release = PublishLDiversity(table, schema, r, config.m, config.seed);
        break;
      case Publisher::kMInvariance: {
        absl::StatusOr<MInvarianceOutput> out =
            PublishMInvariance(table, schema, minv);
        if (!out.ok()) return out.status();
        release = std::move(out->release);
        row.invalidated = minv.cumulative_invalidated;
        break;
      }
    }
    if (!release.ok()) return release.status();
    if (store) {
      if (absl::Status s = store->Append(*release, schema); !s.ok()) return s;
    }
    result.releases.push_back(*release);
    result.microdata.push_back(table);

    row.release = r;
    row.records = static_cast<int>(table.size());
    row.groups = static_cast<int>(release->groups.size());
    row.counterfeits = release->CounterfeitCount();
    row.cnt_g = CounterfeitsPerGroup(*release);
    if (config.attack) {
      absl::StatusOr<std::vector<RiskReport>> reports =
          AttackReleaseSequence(result.releases, {}, result.model);
      if (!reports.ok()) return reports.status();
      row.vulnerable = CountVulnerable(*reports);
      row.min_layer = std::numeric_limits<int>::max();
      for (const RiskReport& rep : *reports) {
        if (rep.removed_nodes > 0) ++row.pruned_records;
        for (int s : rep.layer_sizes) row.min_layer = std::min(row.min_layer, s);
        for (const Rational& risk : rep.risks) {
          if (risk > row.max_risk) row.max_risk = risk;
        }
      }
      if (reports->empty()) row.min_layer = 0;
    }
    for (size_t t = 0; t < config.thetas.size(); ++t) {
      uint64_t seed = DeriveSeed(DeriveSeed(query_seed, static_cast<uint64_t>(r)), t);
      row.median_errors.push_back(MedianQueryError(
          table, *release, schema, config.thetas[t], config.queries, seed));
    }
    row.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::string FormatRunReport(const std::vector<RunReportRow>& rows,
                            const std::vector<Rational>& thetas) {
  std::vector<std::string> header = {
      "release",  "records",        "groups",    "counterfeits", "cnt_g",
      "vulnerable", "invalidated", "pruned_records", "min_layer", "max_risk"};
  for (const Rational& t : thetas) {
    header.push_back(absl::StrCat("median_error_", FormatDecimal(t, 2)));
  }
  std::vector<std::vector<std::string>> out;
  for (const RunReportRow& r : rows) {
    std::vector<std::string> line = {
        absl::StrCat(r.release),      absl::StrCat(r.records),
        absl::StrCat(r.groups),       absl::StrCat(r.counterfeits),
        FormatDecimal(r.cnt_g, 6),    absl::StrCat(r.vulnerable),
        absl::StrCat(r.invalidated),  absl::StrCat(r.pruned_records),
        absl::StrCat(r.min_layer),    FormatDecimal(r.max_risk, 6)};
    for (const auto& e : r.median_errors) line.push_back(FormatOptional(e));
    out.push_back(std::move(line));
  }
  return FormatCsv(header, out);
}

}  // namespace mdistinct
