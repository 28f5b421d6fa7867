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

#ifndef MDISTINCT_RATIONAL_H_
#define MDISTINCT_RATIONAL_H_

#include <gmpxx.h>

#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace mdistinct {

// Exact rational arithmetic. Risks, path weights and transition
// probabilities are all carried as canonical GMP rationals.
using Rational = mpq_class;

// Parses "p/q", an integer, or a finite decimal such as "0.125". Decimals are
// converted exactly (0.1 is 1/10, not the nearest double).
absl::StatusOr<Rational> ParseRational(absl::string_view text);

// "p/q", or "p" when the denominator is 1.
std::string FormatRational(const Rational& value);

// Fixed-point decimal rendering with `digits` fractional digits, rounded
// half away from zero. Deterministic, no floating point involved.
std::string FormatDecimal(const Rational& value, int digits);

}  // namespace mdistinct

#endif  // MDISTINCT_RATIONAL_H_
