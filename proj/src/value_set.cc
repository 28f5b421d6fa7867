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

#include "mdistinct/value_set.h"

#include <algorithm>
#include <bit>
#include <cassert>

namespace mdistinct {

ValueSet::ValueSet(int universe)
    : universe_(universe), words_((universe + 63) / 64, 0) {}

ValueSet::ValueSet(int universe, std::initializer_list<int> values)
    : ValueSet(universe) {
  for (int v : values) Insert(v);
}

ValueSet::ValueSet(int universe, const std::vector<int>& values)
    : ValueSet(universe) {
  for (int v : values) Insert(v);
}

void ValueSet::Insert(int v) {
  assert(v >= 0 && v < universe_);
  words_[v >> 6] |= uint64_t{1} << (v & 63);
}

void ValueSet::Erase(int v) {
  assert(v >= 0 && v < universe_);
  words_[v >> 6] &= ~(uint64_t{1} << (v & 63));
}

bool ValueSet::Contains(int v) const {
  if (v < 0 || v >= universe_) return false;
  return (words_[v >> 6] >> (v & 63)) & 1;
}

int ValueSet::Size() const {
  int n = 0;
  for (uint64_t w : words_) n += std::popcount(w);
  return n;
}

bool ValueSet::Intersects(const ValueSet& other) const {
  size_t n = std::min(words_.size(), other.words_.size());
  for (size_t i = 0; i < n; ++i) {
    if (words_[i] & other.words_[i]) return true;
  }
  return false;
}

bool ValueSet::IsSubsetOf(const ValueSet& other) const {
  for (size_t i = 0; i < words_.size(); ++i) {
    uint64_t theirs = i < other.words_.size() ? other.words_[i] : 0;
    if (words_[i] & ~theirs) return false;
  }
  return true;
}

int ValueSet::IntersectionSize(const ValueSet& other) const {
  int n = 0;
  size_t k = std::min(words_.size(), other.words_.size());
  for (size_t i = 0; i < k; ++i) n += std::popcount(words_[i] & other.words_[i]);
  return n;
}

int ValueSet::UnionSize(const ValueSet& other) const {
  return Size() + other.Size() - IntersectionSize(other);
}

ValueSet ValueSet::Intersection(const ValueSet& other) const {
  ValueSet out(universe_);
  size_t k = std::min(words_.size(), other.words_.size());
  for (size_t i = 0; i < k; ++i) out.words_[i] = words_[i] & other.words_[i];
  return out;
}

std::vector<int> ValueSet::Elements() const {
  std::vector<int> out;
  for (size_t i = 0; i < words_.size(); ++i) {
    uint64_t w = words_[i];
    while (w) {
      int bit = std::countr_zero(w);
      out.push_back(static_cast<int>(i * 64) + bit);
      w &= w - 1;
    }
  }
  return out;
}

std::strong_ordering ValueSet::operator<=>(const ValueSet& other) const {
  if (auto c = universe_ <=> other.universe_; c != 0) return c;
  return words_ <=> other.words_;
}

}  // namespace mdistinct
