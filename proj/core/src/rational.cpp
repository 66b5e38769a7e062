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

#include "cachekit/rational.hpp"

#include <cctype>

#include "cachekit/errors.hpp"

namespace cachekit {

namespace {

BigInt parse_integer(std::string_view text, std::string_view whole) {
  if (text.empty()) {
    throw DomainError("malformed number '" + std::string(whole) + "'");
  }
  BigInt out = 0;
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw DomainError("malformed number '" + std::string(whole) + "'");
    }
    out = out * 10 + (c - '0');
  }
  return out;
}

}  // namespace

double to_double(const Rational& value) { return value.convert_to<double>(); }

std::string format_fixed(const Rational& value, int digits) {
  BigInt scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const bool negative = value < 0;
  const Rational magnitude = negative ? Rational(-value) : value;
  const BigInt num = boost::multiprecision::numerator(magnitude) * scale;
  const BigInt den = boost::multiprecision::denominator(magnitude);
  BigInt scaled = num / den;
  if ((num % den) * 2 >= den) scaled += 1;

  std::string body = scaled.str();
  if (body.size() <= static_cast<std::size_t>(digits)) {
    body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
  }
  std::string out = body.substr(0, body.size() - static_cast<std::size_t>(digits));
  if (digits > 0) {
    out += '.';
    out += body.substr(body.size() - static_cast<std::size_t>(digits));
  }
  if (negative && scaled != 0) out.insert(0, 1, '-');
  return out;
}

Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Rational out;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const BigInt den = parse_integer(text.substr(slash + 1), whole);
    if (den == 0) {
      throw DomainError("zero denominator in '" + std::string(whole) + "'");
    }
    out = Rational(parse_integer(text.substr(0, slash), whole), den);
  } else if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto frac = text.substr(dot + 1);
    const auto intpart = text.substr(0, dot);
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const BigInt ip = intpart.empty() ? BigInt(0) : parse_integer(intpart, whole);
    const BigInt fp = frac.empty() ? BigInt(0) : parse_integer(frac, whole);
    if (intpart.empty() && frac.empty()) {
      throw DomainError("malformed number '" + std::string(whole) + "'");
    }
    out = Rational(ip * scale + fp, scale);
  } else {
    out = Rational(parse_integer(text, whole));
  }
  return negative ? Rational(-out) : out;
}

std::string to_string(const Rational& value) {
  if (boost::multiprecision::denominator(value) == 1) {
    return boost::multiprecision::numerator(value).str();
  }
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

}  // namespace cachekit
