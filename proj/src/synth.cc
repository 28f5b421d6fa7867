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

#include "mdistinct/synth.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace mdistinct {
namespace {

// Builds a hierarchy from (node, parent) pairs; the first pair is the root.
std::shared_ptr<const Hierarchy> Tree(
    const std::vector<std::pair<std::string, std::string>>& nodes) {
  std::vector<std::string> names;
  std::vector<int> parents;
  for (const auto& [name, parent] : nodes) {
    names.push_back(name);
    int p = -1;
    for (size_t i = 0; i < names.size(); ++i) {
      if (names[i] == parent) p = static_cast<int>(i);
    }
    parents.push_back(p);
  }
  absl::StatusOr<Hierarchy> tree = Hierarchy::Create(names, parents);
  return std::make_shared<const Hierarchy>(*std::move(tree));
}

int Leaf(const AttributeSchema& attr, absl::string_view name) {
  return *attr.Encode(name);
}

}  // namespace

Schema SyntheticSchema() {
  Schema schema;
  schema.qi.push_back(AttributeSchema::Numeric("age", 1, 100));
  schema.qi.push_back(AttributeSchema::Categorical(
      "gender", Tree({{"Any", ""}, {"Male", "Any"}, {"Female", "Any"}})));
  schema.qi.push_back(AttributeSchema::Categorical(
      "marital", Tree({{"Any", ""},
                       {"Never-married", "Any"},
                       {"Partnered", "Any"},
                       {"Married", "Partnered"},
                       {"Spouse-absent", "Partnered"},
                       {"Formerly-married", "Any"},
                       {"Divorced", "Formerly-married"},
                       {"Separated", "Formerly-married"},
                       {"Widowed", "Formerly-married"}})));
  schema.qi.push_back(AttributeSchema::Categorical(
      "education", Tree({{"Any", ""},
                         {"Primary", "Any"},
                         {"Preschool", "Primary"},
                         {"1st-4th", "Primary"},
                         {"5th-6th", "Primary"},
                         {"7th-8th", "Primary"},
                         {"Secondary", "Any"},
                         {"9th", "Secondary"},
                         {"10th", "Secondary"},
                         {"11th", "Secondary"},
                         {"12th", "Secondary"},
                         {"HS-grad", "Secondary"},
                         {"Post-secondary", "Any"},
                         {"Some-college", "Post-secondary"},
                         {"Assoc-voc", "Post-secondary"},
                         {"Assoc-acdm", "Post-secondary"},
                         {"Bachelors", "Post-secondary"},
                         {"Post-bacc", "Post-secondary"},
                         {"Graduate", "Any"},
                         {"Masters", "Graduate"},
                         {"Prof-school", "Graduate"},
                         {"Doctorate", "Graduate"}})));
  std::vector<std::string> occupations;
  for (int i = 1; i <= kSyntheticOccupations; ++i) {
    occupations.push_back(absl::StrFormat("occ%02d", i));
  }
  schema.sensitive_name = "occupation";
  schema.sensitive = SensitiveDomain(occupations);
  return schema;
}

InternalUpdateSpec SyntheticUpdateSpec(const Schema& schema,
                                       int sensitive_updates) {
  InternalUpdateSpec spec;
  spec.sensitive_updates = sensitive_updates;
  spec.qi.resize(schema.num_qi());
  for (int j = 0; j < schema.num_qi(); ++j) {
    const AttributeSchema& attr = schema.qi[j];
    AttributeUpdate& u = spec.qi[j];
    if (attr.name == "age") {
      u.rule = UpdateRule::kIncrementCapped;
    } else if (attr.name == "marital") {
      u.rule = UpdateRule::kMonotoneHierarchy;
      u.successors.resize(attr.DomainSize());
      auto add = [&](absl::string_view from,
                     std::initializer_list<absl::string_view> to) {
        for (absl::string_view t : to) {
          u.successors[Leaf(attr, from)].push_back(Leaf(attr, t));
        }
      };
      add("Never-married", {"Married"});
      add("Married", {"Spouse-absent", "Divorced", "Separated", "Widowed"});
      add("Spouse-absent", {"Married", "Divorced", "Separated", "Widowed"});
      add("Divorced", {"Married"});
      add("Separated", {"Divorced", "Married"});
      add("Widowed", {"Married"});
    } else if (attr.name == "education") {
      u.rule = UpdateRule::kMonotoneHierarchy;
      u.successors.resize(attr.DomainSize());
      for (int c = 0; c + 1 < attr.DomainSize(); ++c) u.successors[c] = {c + 1};
    }
  }
  return spec;
}

Table GeneratePopulation(const Schema& schema, int count, uint64_t seed) {
  Rng rng(seed);
  Table table;
  table.reserve(count);
  for (int i = 1; i <= count; ++i) {
    Record r;
    r.id = absl::StrFormat("r%05d", i);
    for (const AttributeSchema& attr : schema.qi) {
      r.qi.push_back(attr.min_code() +
                     static_cast<int>(rng.Uniform(attr.DomainSize())));
    }
    r.sensitive = static_cast<int>(rng.Uniform(schema.sensitive.size()));
    table.push_back(std::move(r));
  }
  return table;
}

absl::StatusOr<Table> SynthesizeInternalUpdates(const Table& table,
                                                int release_index,
                                                const InternalUpdateSpec& spec,
                                                const Schema& schema,
                                                const UpdateModel& model,
                                                uint64_t seed) {
  if (static_cast<int>(spec.qi.size()) != schema.num_qi()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "update spec covers ", spec.qi.size(), " attributes, schema has ",
        schema.num_qi()));
  }
  if (model.domain_size() != schema.sensitive.size()) {
    return absl::InvalidArgumentError(
        "update model does not match the sensitive domain");
  }
  for (int j = 0; j < schema.num_qi(); ++j) {
    const AttributeUpdate& u = spec.qi[j];
    if (u.rule == UpdateRule::kMonotoneHierarchy &&
        static_cast<int64_t>(u.successors.size()) != schema.qi[j].DomainSize()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "successor list of '", schema.qi[j].name, "' has the wrong size"));
    }
    if (u.rule == UpdateRule::kIncrementCapped &&
        schema.qi[j].kind != AttributeKind::kNumeric) {
      return absl::InvalidArgumentError(absl::StrCat(
          "'", schema.qi[j].name, "' is not numeric and cannot increment"));
    }
    if (u.change_den == 0 || u.change_num > u.change_den) {
      return absl::InvalidArgumentError("bad change probability");
    }
  }
  if (spec.sensitive_updates < 0) {
    return absl::InvalidArgumentError("negative sensitive update count");
  }

  Rng rng(DeriveSeed(seed, static_cast<uint64_t>(release_index)));
  Table out = table;
  for (Record& r : out) {
    for (int j = 0; j < schema.num_qi(); ++j) {
      const AttributeUpdate& u = spec.qi[j];
      int& v = r.qi[j];
      switch (u.rule) {
        case UpdateRule::kFrozen:
          break;
        case UpdateRule::kIncrementCapped:
          v = std::min(v + 1, schema.qi[j].max_code());
          break;
        case UpdateRule::kMonotoneHierarchy: {
          // Draw unconditionally so the stream does not depend on values.
          bool move = rng.Chance(u.change_num, u.change_den);
          uint64_t pick = rng.Next();
          const std::vector<int>& next = u.successors[v - schema.qi[j].min_code()];
          if (move && !next.empty()) v = next[pick % next.size()];
          break;
        }
      }
    }
  }

  std::vector<int> order(out.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  const int k = std::min<int>(spec.sensitive_updates, static_cast<int>(out.size()));
  // Partial Fisher-Yates: the first k slots are a uniform k-subset.
  for (int i = 0; i < k; ++i) {
    int j = i + static_cast<int>(rng.Uniform(order.size() - i));
    std::swap(order[i], order[j]);
  }
  for (int i = 0; i < k; ++i) {
    Record& r = out[order[i]];
    std::vector<int> cus = model.cus(r.sensitive).Elements();
    r.sensitive = cus[rng.Uniform(cus.size())];
  }
  return out;
}

}  // namespace mdistinct
