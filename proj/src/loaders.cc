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

#include <algorithm>
#include <map>
#include <set>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "mdistinct/csv.h"
#include "mdistinct/io.h"

namespace mdistinct {
namespace {

// Rows are numbered as file lines, header included.
absl::Status LineError(const CsvFile& csv, size_t row, absl::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat(csv.path, ": row ", csv.line_numbers[row], ": ", what));
}

absl::Status ExpectHeader(const CsvFile& csv,
                          const std::vector<std::string>& expected) {
  if (csv.header != expected) {
    return absl::InvalidArgumentError(absl::StrCat(
        csv.path, ": header must be ", absl::StrJoin(expected, ",")));
  }
  return absl::OkStatus();
}

std::vector<std::string> QiHeader(const Schema& schema) {
  std::vector<std::string> out = {"id"};
  for (const AttributeSchema& a : schema.qi) out.push_back(a.name);
  return out;
}

absl::StatusOr<std::vector<int>> ParseQi(const CsvFile& csv, size_t row,
                                         const Schema& schema) {
  std::vector<int> qi;
  for (int j = 0; j < schema.num_qi(); ++j) {
    absl::StatusOr<int> code = schema.qi[j].Encode(csv.rows[row][j + 1]);
    if (!code.ok()) return LineError(csv, row, code.status().message());
    qi.push_back(*code);
  }
  return qi;
}

}  // namespace

absl::StatusOr<Schema> LoadSchema(const std::filesystem::path& path) {
  absl::StatusOr<CsvFile> csv = ReadCsv(path);
  if (!csv.ok()) return csv.status();
  if (absl::Status s = ExpectHeader(*csv, {"attribute", "kind", "node", "parent"});
      !s.ok()) {
    return s;
  }
  struct Pending {
    std::string kind;
    std::vector<std::string> nodes;
    std::vector<std::string> parents;
  };
  std::vector<std::string> order;
  std::map<std::string, Pending> attrs;
  for (size_t r = 0; r < csv->rows.size(); ++r) {
    const auto& row = csv->rows[r];
    const std::string& name = row[0];
    if (name.empty()) return LineError(*csv, r, "empty attribute name");
    auto [it, inserted] = attrs.try_emplace(name);
    if (inserted) {
      order.push_back(name);
      it->second.kind = row[1];
    } else if (it->second.kind != row[1]) {
      return LineError(*csv, r, absl::StrCat("attribute '", name,
                                             "' declared with two kinds"));
    }
    it->second.nodes.push_back(row[2]);
    it->second.parents.push_back(row[3]);
  }

  Schema schema;
  bool have_sensitive = false;
  for (const std::string& name : order) {
    Pending& p = attrs[name];
    if (p.kind == "numeric") {
      std::vector<absl::string_view> bounds = absl::StrSplit(p.nodes[0], "..");
      int lo = 0, hi = 0;
      if (p.nodes.size() != 1 || bounds.size() != 2 ||
          !absl::SimpleAtoi(bounds[0], &lo) || !absl::SimpleAtoi(bounds[1], &hi) ||
          lo > hi) {
        return absl::InvalidArgumentError(absl::StrCat(
            path.string(), ": numeric attribute '", name,
            "' needs one row with domain lo..hi"));
      }
      schema.qi.push_back(AttributeSchema::Numeric(name, lo, hi));
    } else if (p.kind == "categorical") {
      std::map<std::string, int> index;
      for (size_t i = 0; i < p.nodes.size(); ++i) index[p.nodes[i]] = static_cast<int>(i);
      std::vector<int> parents;
      for (const std::string& parent : p.parents) {
        if (parent.empty()) {
          parents.push_back(-1);
          continue;
        }
        auto it = index.find(parent);
        if (it == index.end()) {
          return absl::InvalidArgumentError(absl::StrCat(
              path.string(), ": attribute '", name, "' has unknown parent '",
              parent, "'"));
        }
        parents.push_back(it->second);
      }
      absl::StatusOr<Hierarchy> tree = Hierarchy::Create(p.nodes, parents);
      if (!tree.ok()) {
        return absl::InvalidArgumentError(
            absl::StrCat(path.string(), ": ", name, ": ", tree.status().message()));
      }
      schema.qi.push_back(AttributeSchema::Categorical(
          name, std::make_shared<const Hierarchy>(*std::move(tree))));
    } else if (p.kind == "sensitive") {
      if (have_sensitive) {
        return absl::InvalidArgumentError(
            absl::StrCat(path.string(), ": more than one sensitive attribute"));
      }
      std::set<std::string> unique(p.nodes.begin(), p.nodes.end());
      if (unique.size() != p.nodes.size()) {
        return absl::InvalidArgumentError(absl::StrCat(
            path.string(), ": duplicate value of sensitive attribute '", name, "'"));
      }
      have_sensitive = true;
      schema.sensitive_name = name;
      schema.sensitive = SensitiveDomain(p.nodes);
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          path.string(), ": attribute '", name, "' has unknown kind '", p.kind, "'"));
    }
  }
  if (!have_sensitive) {
    return absl::InvalidArgumentError(
        absl::StrCat(path.string(), ": no sensitive attribute"));
  }
  return schema;
}

std::string FormatSchema(const Schema& schema) {
  std::vector<std::vector<std::string>> rows;
  for (const AttributeSchema& a : schema.qi) {
    if (a.kind == AttributeKind::kNumeric) {
      rows.push_back({a.name, "numeric", absl::StrCat(a.lo, "..", a.hi), ""});
      continue;
    }
    const Hierarchy& h = *a.hierarchy;
    for (int node = 0; node < h.num_nodes(); ++node) {
      int parent = h.parent(node);
      rows.push_back({a.name, "categorical", h.name(node),
                      parent < 0 ? "" : h.name(parent)});
    }
  }
  for (const std::string& v : schema.sensitive.values()) {
    rows.push_back({schema.sensitive_name, "sensitive", v, ""});
  }
  return FormatCsv({"attribute", "kind", "node", "parent"}, rows);
}

absl::StatusOr<Table> LoadMicrodata(const std::filesystem::path& path,
                                    const Schema& schema) {
  absl::StatusOr<CsvFile> csv = ReadCsv(path);
  if (!csv.ok()) return csv.status();
  std::vector<std::string> header = QiHeader(schema);
  header.push_back(schema.sensitive_name);
  if (absl::Status s = ExpectHeader(*csv, header); !s.ok()) return s;
  Table table;
  std::set<std::string> ids;
  for (size_t r = 0; r < csv->rows.size(); ++r) {
    const auto& row = csv->rows[r];
    if (row[0].empty()) return LineError(*csv, r, "empty id");
    if (!ids.insert(row[0]).second) {
      return LineError(*csv, r, absl::StrCat("duplicate id '", row[0], "'"));
    }
    absl::StatusOr<std::vector<int>> qi = ParseQi(*csv, r, schema);
    if (!qi.ok()) return qi.status();
    std::optional<int> s = schema.sensitive.Find(row.back());
    if (!s) {
      return LineError(*csv, r, absl::StrCat(schema.sensitive_name, ": '",
                                             row.back(), "' not in the domain"));
    }
    table.push_back({row[0], *std::move(qi), *s});
  }
  return table;
}

std::string FormatMicrodata(const Table& table, const Schema& schema) {
  std::vector<std::string> header = QiHeader(schema);
  header.push_back(schema.sensitive_name);
  std::vector<std::vector<std::string>> rows;
  for (const Record& r : table) {
    std::vector<std::string> row = {r.id};
    for (int j = 0; j < schema.num_qi(); ++j) row.push_back(schema.qi[j].Decode(r.qi[j]));
    row.push_back(schema.sensitive.name(r.sensitive));
    rows.push_back(std::move(row));
  }
  return FormatCsv(header, rows);
}

absl::StatusOr<UpdateModel> LoadUpdateModel(const std::filesystem::path& path,
                                            const Schema& schema) {
  absl::StatusOr<CsvFile> csv = ReadCsv(path);
  if (!csv.ok()) return csv.status();
  if (absl::Status s = ExpectHeader(*csv, {"value", "successor", "probability"});
      !s.ok()) {
    return s;
  }
  const int n = schema.sensitive.size();
  std::vector<ValueSet> cus(n, ValueSet(n));
  std::vector<std::vector<Rational>> p(n, std::vector<Rational>(n, 0));
  std::vector<std::vector<int>> blanks(n);
  for (size_t r = 0; r < csv->rows.size(); ++r) {
    const auto& row = csv->rows[r];
    std::optional<int> a = schema.sensitive.Find(row[0]);
    std::optional<int> b = schema.sensitive.Find(row[1]);
    if (!a || !b) {
      return LineError(*csv, r, absl::StrCat("unknown sensitive value '",
                                             a ? row[1] : row[0], "'"));
    }
    if (cus[*a].Contains(*b)) {
      return LineError(*csv, r, "duplicate transition");
    }
    cus[*a].Insert(*b);
    if (row[2].empty()) {
      blanks[*a].push_back(*b);
      continue;
    }
    absl::StatusOr<Rational> prob = ParseRational(row[2]);
    if (!prob.ok()) return LineError(*csv, r, prob.status().message());
    p[*a][*b] = *prob;
  }
  for (int a = 0; a < n; ++a) {
    if (blanks[a].empty()) continue;
    Rational rest = 1;
    for (int b = 0; b < n; ++b) rest -= p[a][b];
    Rational share = rest / static_cast<long>(blanks[a].size());
    for (int b : blanks[a]) p[a][b] = share;
  }
  UpdateModel model(std::move(cus), std::move(p));
  if (absl::Status s = CheckUpdateModel(model, &schema.sensitive); !s.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path.string(), ": ", s.message()));
  }
  return model;
}

std::string FormatUpdateModel(const UpdateModel& model, const Schema& schema) {
  std::vector<std::vector<std::string>> rows;
  for (int a = 0; a < model.domain_size(); ++a) {
    for (int b : model.cus(a).Elements()) {
      rows.push_back({schema.sensitive.name(a), schema.sensitive.name(b),
                      FormatRational(model.p(a, b))});
    }
  }
  return FormatCsv({"value", "successor", "probability"}, rows);
}

absl::StatusOr<ExternalKnowledgeTable> LoadExternalKnowledge(
    const std::filesystem::path& path, const Schema& schema, int release_index) {
  absl::StatusOr<CsvFile> csv = ReadCsv(path);
  if (!csv.ok()) return csv.status();
  if (absl::Status s = ExpectHeader(*csv, QiHeader(schema)); !s.ok()) return s;
  ExternalKnowledgeTable et;
  et.release_index = release_index;
  for (size_t r = 0; r < csv->rows.size(); ++r) {
    absl::StatusOr<std::vector<int>> qi = ParseQi(*csv, r, schema);
    if (!qi.ok()) return qi.status();
    if (!et.rows.emplace(csv->rows[r][0], *std::move(qi)).second) {
      return LineError(*csv, r, "duplicate id");
    }
  }
  return et;
}

std::string FormatExternalKnowledge(const ExternalKnowledgeTable& et,
                                    const Schema& schema) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [id, qi] : et.rows) {
    std::vector<std::string> row = {id};
    for (int j = 0; j < schema.num_qi(); ++j) row.push_back(schema.qi[j].Decode(qi[j]));
    rows.push_back(std::move(row));
  }
  return FormatCsv(QiHeader(schema), rows);
}

absl::StatusOr<std::vector<ExternalKnowledgeTable>> LoadExternalKnowledgeDir(
    const std::filesystem::path& dir, const Schema& schema, int releases) {
  std::vector<ExternalKnowledgeTable> out;
  for (int i = 1; i <= releases; ++i) {
    absl::StatusOr<ExternalKnowledgeTable> et = LoadExternalKnowledge(
        dir / absl::StrCat("et_", i, ".csv"), schema, i);
    if (!et.ok()) return et.status();
    out.push_back(*std::move(et));
  }
  return out;
}

}  // namespace mdistinct
