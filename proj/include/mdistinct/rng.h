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

#ifndef MDISTINCT_RNG_H_
#define MDISTINCT_RNG_H_

#include <cstdint>
#include <random>
#include <vector>

namespace mdistinct {

// Seeded generator used for every random choice in the library. Draws are
// computed from the raw 64-bit stream so results do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }

  // Uniform integer in [0, n). n must be positive.
  uint64_t Uniform(uint64_t n);

  // Bernoulli draw with probability num/den.
  bool Chance(uint64_t num, uint64_t den) { return Uniform(den) < num; }

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[Uniform(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Derives an independent stream seed from a base seed and a label such as a
// release index.
uint64_t DeriveSeed(uint64_t base, uint64_t label);

}  // namespace mdistinct

#endif  // MDISTINCT_RNG_H_
