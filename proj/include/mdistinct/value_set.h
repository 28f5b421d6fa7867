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

#ifndef MDISTINCT_VALUE_SET_H_
#define MDISTINCT_VALUE_SET_H_

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace mdistinct {

// A set of sensitive-domain codes in [0, universe). The ordering is an
// arbitrary but fixed total order (bit words compared lexicographically); it
// is what gives USS entries a canonical order.
class ValueSet {
 public:
  ValueSet() = default;
  explicit ValueSet(int universe);
  ValueSet(int universe, std::initializer_list<int> values);
  ValueSet(int universe, const std::vector<int>& values);

  int universe() const { return universe_; }

  void Insert(int v);
  void Erase(int v);
  bool Contains(int v) const;
  int Size() const;
  bool Empty() const { return Size() == 0; }

  bool Intersects(const ValueSet& other) const;
  bool IsSubsetOf(const ValueSet& other) const;
  int IntersectionSize(const ValueSet& other) const;
  int UnionSize(const ValueSet& other) const;
  ValueSet Intersection(const ValueSet& other) const;

  std::vector<int> Elements() const;

  bool operator==(const ValueSet& other) const {
    return universe_ == other.universe_ && words_ == other.words_;
  }
  std::strong_ordering operator<=>(const ValueSet& other) const;

 private:
  int universe_ = 0;
  std::vector<uint64_t> words_;
};

}  // namespace mdistinct

#endif  // MDISTINCT_VALUE_SET_H_
