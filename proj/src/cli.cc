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

#include "mdistinct/cli.h"

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "mdistinct/baselines.h"
#include "mdistinct/csv.h"
#include "mdistinct/engine.h"
#include "mdistinct/eval.h"
#include "mdistinct/io.h"
#include "mdistinct/sug.h"

namespace mdistinct {
namespace {

namespace fs = std::filesystem;

// Advisory lock: a history directory takes one writer at a time.
class HistoryLock {
 public:
  static absl::StatusOr<std::unique_ptr<HistoryLock>> Acquire(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
      return absl::PermissionDeniedError(
          absl::StrCat("cannot create ", dir.string(), ": ", ec.message()));
    }
    fs::path path = dir / ".lock";
    std::FILE* f = std::fopen(path.c_str(), "wx");
    if (f == nullptr) {
      return absl::FailedPreconditionError(absl::StrCat(
          dir.string(), " is locked by another writer (remove ", path.string(),
          " if stale)"));
    }
    std::fclose(f);
    return std::unique_ptr<HistoryLock>(new HistoryLock(std::move(path)));
  }
  ~HistoryLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }

 private:
  explicit HistoryLock(fs::path path) : path_(std::move(path)) {}
  fs::path path_;
};

// Schema of a history: the stored one, or the one given on the command line
// (which is then stored). When both exist they must agree.
absl::StatusOr<Schema> ResolveSchema(const HistoryStore& store,
                                     const std::string& schema_path,
                                     bool store_it) {
  if (store.HasSchema()) {
    absl::StatusOr<Schema> stored = store.ReadSchema();
    if (!stored.ok()) return stored.status();
    if (!schema_path.empty()) {
      absl::StatusOr<Schema> given = LoadSchema(schema_path);
      if (!given.ok()) return given.status();
      if (FormatSchema(*given) != FormatSchema(*stored)) {
        return absl::InvalidArgumentError(absl::StrCat(
            schema_path, " differs from the schema stored in ",
            store.dir().string()));
      }
    }
    return stored;
  }
  if (schema_path.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(
        store.dir().string(), " has no schema.csv; pass --schema"));
  }
  absl::StatusOr<Schema> given = LoadSchema(schema_path);
  if (!given.ok()) return given.status();
  if (store_it) {
    if (absl::Status s = store.WriteSchema(*given); !s.ok()) return s;
  }
  return given;
}

// Checks stored metadata against the flags, or writes it for a new history.
absl::Status ReconcileMeta(const HistoryStore& store, const HistoryMeta& want) {
  if (store.ReleaseCount() == 0) return store.WriteMeta(want);
  absl::StatusOr<HistoryMeta> have = store.ReadMeta();
  if (!have.ok()) return have.status();
  if (have->mode != want.mode || have->m != want.m || have->seed != want.seed) {
    return absl::InvalidArgumentError(absl::StrCat(
        store.dir().string(), " was started with mode=", have->mode,
        " m=", have->m, " seed=", have->seed, "; got mode=", want.mode,
        " m=", want.m, " seed=", want.seed));
  }
  return absl::OkStatus();
}

std::string Summary(const PublishedRelease& r) {
  return absl::StrCat("release ", r.release_index, ": ", r.RealRecordCount(),
                      " records, ", r.groups.size(), " groups, ",
                      r.CounterfeitCount(), " counterfeits");
}

struct PublishArgs {
  std::string microdata, model, history, schema;
  int m = 2;
  bool star = false;
  uint64_t seed = 0;
};

absl::Status RunPublish(const PublishArgs& a, std::ostream& out) {
  HistoryStore store(a.history);
  absl::StatusOr<std::unique_ptr<HistoryLock>> lock = HistoryLock::Acquire(a.history);
  if (!lock.ok()) return lock.status();
  absl::StatusOr<Schema> schema = ResolveSchema(store, a.schema, true);
  if (!schema.ok()) return schema.status();
  absl::StatusOr<UpdateModel> model = LoadUpdateModel(a.model, *schema);
  if (!model.ok()) return model.status();
  absl::StatusOr<Table> table = LoadMicrodata(a.microdata, *schema);
  if (!table.ok()) return table.status();
  const Mode mode = a.star ? Mode::kMDistinctStar : Mode::kMDistinct;
  if (absl::Status s = ReconcileMeta(
          store, {a.seed, a.m, a.star ? "m_distinct_star" : "m_distinct"});
      !s.ok()) {
    return s;
  }

  EngineState state;
  state.m = a.m;
  state.mode = mode;
  state.seed = a.seed;
  if (int n = store.ReleaseCount(); n > 0) {
    absl::StatusOr<PublishedRelease> latest = LoadRelease(a.history, n, *schema);
    if (!latest.ok()) return latest.status();
    absl::StatusOr<EngineState> restored =
        EngineState::FromRelease(*latest, *model, a.m, mode, a.seed);
    if (!restored.ok()) return restored.status();
    state = *std::move(restored);
  }
  absl::StatusOr<PublishedRelease> release = Publish(*table, *schema, *model, state);
  if (!release.ok()) return release.status();
  if (absl::Status s = store.Append(*release, *schema); !s.ok()) return s;
  out << Summary(*release) << "\n";
  return absl::OkStatus();
}

struct BaselineArgs {
  std::string kind, microdata, history, schema;
  int m = 2;
  uint64_t seed = 0;
};

absl::Status RunBaseline(const BaselineArgs& a, std::ostream& out) {
  HistoryStore store(a.history);
  absl::StatusOr<std::unique_ptr<HistoryLock>> lock = HistoryLock::Acquire(a.history);
  if (!lock.ok()) return lock.status();
  absl::StatusOr<Schema> schema = ResolveSchema(store, a.schema, true);
  if (!schema.ok()) return schema.status();
  absl::StatusOr<Table> table = LoadMicrodata(a.microdata, *schema);
  if (!table.ok()) return table.status();
  const bool ldiv = a.kind == "ldiv";
  if (absl::Status s = ReconcileMeta(
          store, {a.seed, a.m, ldiv ? "l_diversity" : "m_invariance"});
      !s.ok()) {
    return s;
  }
  const int n = store.ReleaseCount();
  absl::StatusOr<PublishedRelease> release;
  std::string extra;
  if (ldiv) {
    release = PublishLDiversity(*table, *schema, n + 1, a.m, a.seed);
  } else {
    MInvarianceState state;
    state.m = a.m;
    state.seed = a.seed;
    if (n > 0) {
      absl::StatusOr<PublishedRelease> latest = LoadRelease(a.history, n, *schema);
      if (!latest.ok()) return latest.status();
      state = MInvarianceState::FromRelease(*latest, a.m, a.seed);
    }
    absl::StatusOr<MInvarianceOutput> o = PublishMInvariance(*table, *schema, state);
    if (!o.ok()) return o.status();
    extra = absl::StrCat(", ", o->invalidated.size(), " invalidated");
    release = std::move(o->release);
  }
  if (!release.ok()) return release.status();
  if (absl::Status s = store.Append(*release, *schema); !s.ok()) return s;
  out << Summary(*release) << extra << "\n";
  return absl::OkStatus();
}

struct AttackArgs {
  std::string history, model, et, out;
};

absl::Status RunAttack(const AttackArgs& a, std::ostream& out) {
  HistoryStore store(a.history);
  absl::StatusOr<Schema> schema = store.ReadSchema();
  if (!schema.ok()) return schema.status();
  absl::StatusOr<UpdateModel> model = LoadUpdateModel(a.model, *schema);
  if (!model.ok()) return model.status();
  absl::StatusOr<std::vector<PublishedRelease>> releases = store.LoadAll(*schema);
  if (!releases.ok()) return releases.status();
  if (releases->empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat(a.history, " holds no releases"));
  }
  std::vector<ExternalKnowledgeTable> ets;
  if (!a.et.empty()) {
    absl::StatusOr<std::vector<ExternalKnowledgeTable>> loaded =
        LoadExternalKnowledgeDir(a.et, *schema, static_cast<int>(releases->size()));
    if (!loaded.ok()) return loaded.status();
    ets = *std::move(loaded);
  }
  absl::StatusOr<std::vector<RiskReport>> reports =
      AttackReleaseSequence(*releases, ets, *model);
  if (!reports.ok()) return reports.status();

  std::vector<std::vector<std::string>> rows;
  Rational max_risk = 0;
  for (const RiskReport& r : *reports) {
    for (size_t v = 0; v < r.risks.size(); ++v) {
      const Rational& risk = r.risks[v];
      if (risk > max_risk) max_risk = risk;
      rows.push_back({r.id, absl::StrCat(v + 1), risk.get_num().get_str(),
                      risk.get_den().get_str(), FormatDecimal(risk, 6)});
    }
  }
  const std::string path =
      a.out.empty() ? (fs::path(a.history) / "risks.csv").string() : a.out;
  if (absl::Status s = WriteTextFile(
          path, FormatCsv({"id", "version", "risk_num", "risk_den", "risk_decimal"},
                          rows));
      !s.ok()) {
    return s;
  }
  out << "records " << reports->size() << ", versions " << rows.size()
      << ", max risk " << FormatRational(max_risk) << ", vulnerable "
      << CountVulnerable(*reports) << "\n";
  return absl::OkStatus();
}

struct VerifyArgs {
  std::string history, model;
  std::optional<int> m;
  bool star = false;
};

absl::Status RunVerify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  HistoryStore store(a.history);
  absl::StatusOr<Schema> schema = store.ReadSchema();
  if (!schema.ok()) return schema.status();
  absl::StatusOr<UpdateModel> model = LoadUpdateModel(a.model, *schema);
  if (!model.ok()) return model.status();
  int m = 0;
  if (a.m) {
    m = *a.m;
  } else {
    absl::StatusOr<HistoryMeta> meta = store.ReadMeta();
    if (!meta.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("no --m given and ", meta.status().message()));
    }
    m = meta->m;
  }
  absl::StatusOr<std::vector<PublishedRelease>> releases = store.LoadAll(*schema);
  if (!releases.ok()) return releases.status();
  VerifyResult result = VerifyMDistinct(*releases, *model, m, a.star);
  for (const MDistinctViolation& v : result.violations) {
    err << "release " << v.release_index;
    if (v.gid > 0) err << " group " << v.gid;
    if (!v.id.empty()) err << " record " << v.id;
    err << ": " << v.reason << "\n";
  }
  if (!result.ok()) {
    return absl::InvalidArgumentError(absl::StrCat(
        result.violations.size(), " violation(s) of ", m, "-distinct"));
  }
  out << releases->size() << " release(s) satisfy " << m << "-distinct"
      << (a.star ? "*" : "") << "\n";
  return absl::OkStatus();
}

struct SimulateArgs {
  std::string config, out;
};

absl::Status RunSimulate(const SimulateArgs& a, std::ostream& out) {
  absl::StatusOr<ScenarioConfig> config = LoadScenarioConfig(a.config);
  if (!config.ok()) return config.status();
  const fs::path history = fs::path(a.out) / "history";
  absl::StatusOr<std::unique_ptr<HistoryLock>> lock = HistoryLock::Acquire(history);
  if (!lock.ok()) return lock.status();
  absl::StatusOr<ExperimentResult> result = RunExperiment(*config, &history);
  if (!result.ok()) return result.status();
  if (absl::Status s =
          WriteTextFile(fs::path(a.out) / "report.csv",
                        FormatRunReport(result->rows, config->thetas));
      !s.ok()) {
    return s;
  }
  for (const RunReportRow& r : result->rows) {
    out << "release " << r.release << ": " << r.records << " records, "
        << r.groups << " groups, vulnerable " << r.vulnerable << ", "
        << absl::StrFormat("%.3f", r.seconds) << " s\n";
  }
  return absl::OkStatus();
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return 0;
    case absl::StatusCode::kFailedPrecondition:
      return 3;
    case absl::StatusCode::kResourceExhausted:
      return 4;
    default:
      return 2;
  }
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Anonymized re-publication of dynamic datasets", "mdistinct"};
  app.require_subcommand(1);

  PublishArgs pub;
  CLI::App* publish = app.add_subcommand("publish", "Publish the next release");
  publish->add_option("--microdata", pub.microdata, "Microdata CSV")->required();
  publish->add_option("--model", pub.model, "Update model CSV")->required();
  publish->add_option("--history", pub.history, "History directory")->required();
  publish->add_option("--schema", pub.schema, "Schema CSV (first release)");
  publish->add_option("--m", pub.m, "Group size")->required()->check(CLI::PositiveNumber);
  publish->add_flag("--star", pub.star, "Require disjoint CUS for new records");
  publish->add_option("--seed", pub.seed, "Random seed")->required();

  AttackArgs att;
  CLI::App* attack = app.add_subcommand("attack", "Replay the update-graph attack");
  attack->add_option("--history", att.history, "History directory")->required();
  attack->add_option("--model", att.model, "Update model CSV")->required();
  attack->add_option("--et", att.et, "Directory of et_<i>.csv files");
  attack->add_option("--out", att.out, "Output CSV (default <history>/risks.csv)");

  VerifyArgs ver;
  CLI::App* verify = app.add_subcommand("verify", "Check a history");
  verify->add_option("--history", ver.history, "History directory")->required();
  verify->add_option("--model", ver.model, "Update model CSV")->required();
  verify->add_option("--m", ver.m, "Group size (default from meta.csv)")
      ->check(CLI::PositiveNumber);
  verify->add_flag("--star", ver.star, "Also check the disjointness rule");

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Run a synthetic experiment");
  simulate->add_option("--config", sim.config, "Scenario key,value CSV")->required();
  simulate->add_option("--out", sim.out, "Output directory")->required();

  BaselineArgs base;
  CLI::App* baseline = app.add_subcommand("baseline", "Publish with a baseline");
  baseline->add_option("--kind", base.kind, "ldiv or minv")
      ->required()
      ->check(CLI::IsMember({"ldiv", "minv"}));
  baseline->add_option("--microdata", base.microdata, "Microdata CSV")->required();
  baseline->add_option("--history", base.history, "History directory")->required();
  baseline->add_option("--schema", base.schema, "Schema CSV (first release)");
  baseline->add_option("--m,--l", base.m, "Group size")->required()->check(CLI::PositiveNumber);
  baseline->add_option("--seed", base.seed, "Random seed")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  absl::Status status;
  if (*publish) {
    status = RunPublish(pub, out);
  } else if (*attack) {
    status = RunAttack(att, out);
  } else if (*verify) {
    status = RunVerify(ver, out, err);
  } else if (*simulate) {
    status = RunSimulate(sim, out);
  } else if (*baseline) {
    status = RunBaseline(base, out);
  }
  if (!status.ok()) err << "error: " << status.message() << "\n";
  return ExitCodeFor(status);
}

}  // namespace mdistinct
