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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace hybridea {

/// Exact time value. Instance data, start times and lateness are all kept
/// exact so that the Jackson conditions compare delivery times by equality.
using Rational = boost::rational<std::int64_t>;

/// Parses "12", "3.25", "-0.5" or "7/3". Throws DomainError on malformed input.
Rational parse_rational(std::string_view text);

/// Shortest exact text for `value`: a decimal when the denominator has only the
/// prime factors 2 and 5, otherwise "num/den". parse_rational inverts it.
std::string format_rational(const Rational& value);

double to_double(const Rational& value);

}  // namespace hybridea
