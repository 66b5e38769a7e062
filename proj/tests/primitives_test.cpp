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

#include <gtest/gtest.h>

#include <random>

#include "cachekit/bitvector.hpp"
#include "cachekit/errors.hpp"
#include "cachekit/rational.hpp"

namespace cachekit {
namespace {

BitVector random_bits(std::size_t n, std::mt19937_64& rng) {
  BitVector v(n);
  for (std::size_t i = 0; i < n; ++i) v.set(i, (rng() & 1) != 0);
  return v;
}

TEST(BitVector, SliceWriteRoundTrip) {
  std::mt19937_64 rng(3);
  for (std::size_t n : {1u, 63u, 64u, 65u, 200u}) {
    const BitVector v = random_bits(n, rng);
    for (std::size_t begin = 0; begin < n; begin += 7) {
      const std::size_t len = std::min<std::size_t>(n - begin, 70);
      const BitVector s = v.slice(begin, len);
      for (std::size_t i = 0; i < len; ++i) ASSERT_EQ(s.get(i), v.get(begin + i));
      BitVector w(n);
      w.write(begin, s);
      for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(w.get(i), i >= begin && i < begin + len && v.get(i));
    }
  }
}

TEST(BitVector, XorPrefixEqualsZeroPadding) {
  std::mt19937_64 rng(5);
  const BitVector a = random_bits(130, rng);
  const BitVector b = random_bits(70, rng);
  BitVector padded = b;
  padded.resize(130);
  BitVector x = a;
  x.xor_prefix(b);
  EXPECT_EQ(x, a ^ padded);
}

TEST(BitVector, ResizeClearsTail) {
  BitVector v(10);
  for (std::size_t i = 0; i < 10; ++i) v.set(i, true);
  v.resize(3);
  v.resize(10);
  EXPECT_EQ(v.count(), 3u);
}

TEST(BitVector, HexIsMsbFirst) {
  BitVector v(12);
  v.set(0, true);
  v.set(11, true);
  EXPECT_EQ(v.to_hex(), "8010");
  EXPECT_EQ(BitVector::from_hex("8010", 12), v);
  EXPECT_EQ(BitVector(0).to_hex(), "");
}

TEST(BitVector, LengthMismatchThrows) {
  BitVector a(5);
  const BitVector b(6);
  EXPECT_THROW(a ^= b, DomainError);
  BitVector c(3);
  EXPECT_THROW(c.xor_prefix(b), DomainError);
}

TEST(Rational, ParseForms) {
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("1/3"), Rational(1, 3));
  EXPECT_EQ(parse_rational("-2"), Rational(-2));
  EXPECT_THROW(parse_rational("x"), DomainError);
  EXPECT_THROW(parse_rational("1/0"), DomainError);
  EXPECT_THROW(parse_rational(""), DomainError);
}

TEST(Rational, Formatting) {
  EXPECT_EQ(format_fixed(Rational(19, 15), 6), "1.266667");
  EXPECT_EQ(format_fixed(Rational(-1, 8), 2), "-0.13");
  EXPECT_EQ(format_fixed(Rational(5), 3), "5.000");
  EXPECT_EQ(to_string(Rational(6, 4)), "3/2");
  EXPECT_EQ(to_string(Rational(4)), "4");
  EXPECT_DOUBLE_EQ(to_double(Rational(1, 4)), 0.25);
}

}  // namespace
}  // namespace cachekit
