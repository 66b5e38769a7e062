// Copyright 2026 The cachekit Authors
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

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace cachekit {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

double to_double(const Rational& value);

/// Decimal rendering rounded half away from zero, e.g. format_fixed(19/15, 6) == "1.266667".
std::string format_fixed(const Rational& value, int digits);

/// Exact parse of "3", "-2", "0.25", "1/3". Throws DomainError on anything else.
Rational parse_rational(std::string_view text);

/// "p" when integral, else "p/q" in lowest terms.
std::string to_string(const Rational& value);

}  // namespace cachekit
