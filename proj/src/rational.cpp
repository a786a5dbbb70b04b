// Copyright 2026 The hybridea Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hybridea/rational.hpp"

#include <charconv>
#include <limits>

#include "hybridea/errors.hpp"

namespace hybridea {
namespace {

std::int64_t parse_integer(std::string_view digits, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
    throw DomainError("malformed rational '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  if (text.empty()) throw DomainError("empty rational");
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = parse_integer(text.substr(0, slash), whole);
    const auto den = parse_integer(text.substr(slash + 1), whole);
    if (den <= 0) throw DomainError("non-positive denominator in '" + std::string(whole) + "'");
    return Rational(num, den);
  }
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  std::string_view int_part = text.substr(0, dot);
  std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) throw DomainError("malformed rational '" + std::string(whole) + "'");
  if (frac_part.size() > 17) throw DomainError("too many decimals in '" + std::string(whole) + "'");

  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
  const std::int64_t ip = int_part.empty() ? 0 : parse_integer(int_part, whole);
  const std::int64_t fp = frac_part.empty() ? 0 : parse_integer(frac_part, whole);
  if (ip > (std::numeric_limits<std::int64_t>::max() - fp) / den) {
    throw DomainError("rational out of range '" + std::string(whole) + "'");
  }
  Rational value(ip * den + fp, den);
  return negative ? -value : value;
}

std::string format_rational(const Rational& value) {
  std::int64_t den = value.denominator();
  int twos = 0;
  int fives = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++twos;
  }
  while (den % 5 == 0) {
    den /= 5;
    ++fives;
  }
  if (den != 1) {
    return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
  }
  const int digits = std::max(twos, fives);
  std::int64_t scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const std::int64_t scaled = value.numerator() * (scale / value.denominator());
  const bool negative = scaled < 0;
  const std::uint64_t mag = negative ? static_cast<std::uint64_t>(-(scaled + 1)) + 1 : static_cast<std::uint64_t>(scaled);
  std::string out = std::to_string(mag / static_cast<std::uint64_t>(scale));
  if (digits > 0) {
    std::string frac = std::to_string(mag % static_cast<std::uint64_t>(scale));
    frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
    out += "." + frac;
  }
  return negative ? "-" + out : out;
}

double to_double(const Rational& value) {
  return static_cast<double>(value.numerator()) / static_cast<double>(value.denominator());
}

}  // namespace hybridea
