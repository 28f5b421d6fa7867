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

#include "mdistinct/rational.h"

#include <cctype>
#include <string>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"

namespace mdistinct {
namespace {

bool IsDigits(absl::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!absl::ascii_isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

absl::StatusOr<Rational> ParseRational(absl::string_view text) {
  absl::string_view s = absl::StripAsciiWhitespace(text);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational out;
  if (auto slash = s.find('/'); slash != absl::string_view::npos) {
    absl::string_view num = s.substr(0, slash);
    absl::string_view den = s.substr(slash + 1);
    if (!IsDigits(num) || !IsDigits(den)) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed rational '", text, "'"));
    }
    mpz_class n{std::string(num)}, d{std::string(den)};
    if (d == 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("zero denominator in '", text, "'"));
    }
    out = Rational(n, d);
  } else if (auto dot = s.find('.'); dot != absl::string_view::npos) {
    absl::string_view whole = s.substr(0, dot);
    absl::string_view frac = s.substr(dot + 1);
    if ((!whole.empty() && !IsDigits(whole)) ||
        (!frac.empty() && !IsDigits(frac)) || (whole.empty() && frac.empty())) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed decimal '", text, "'"));
    }
    mpz_class scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    mpz_class n(whole.empty() ? std::string("0") : std::string(whole));
    n *= scale;
    if (!frac.empty()) n += mpz_class(std::string(frac));
    out = Rational(n, scale);
  } else {
    if (!IsDigits(s)) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed number '", text, "'"));
    }
    out = Rational(mpz_class(std::string(s)));
  }
  out.canonicalize();
  if (negative) out = -out;
  return out;
}

std::string FormatRational(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return absl::StrCat(value.get_num().get_str(), "/",
                      value.get_den().get_str());
}

std::string FormatDecimal(const Rational& value, int digits) {
  mpz_class scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  mpz_class num = abs(value.get_num()) * scale * 2 + value.get_den();
  mpz_class den = value.get_den() * 2;
  mpz_class scaled;
  mpz_fdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  mpz_class whole, frac;
  mpz_fdiv_qr(whole.get_mpz_t(), frac.get_mpz_t(), scaled.get_mpz_t(),
              scale.get_mpz_t());
  std::string out = value < 0 && scaled != 0 ? "-" : "";
  absl::StrAppend(&out, whole.get_str());
  if (digits > 0) {
    std::string f = frac.get_str();
    out += '.';
    out.append(static_cast<size_t>(digits) - f.size(), '0');
    out += f;
  }
  return out;
}

}  // namespace mdistinct
