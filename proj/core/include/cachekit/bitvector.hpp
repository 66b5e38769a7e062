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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cachekit {

/// Fixed-length array of bits packed into 64-bit words.
///
/// Bit i lives in word i / 64 at position i % 64. Bits past size() in the
/// last word are always zero, so word-wise comparison and popcount are exact.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t nbits);

  std::size_t size() const noexcept { return nbits_; }
  bool empty() const noexcept { return nbits_ == 0; }

  bool get(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i, bool value) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }

  /// Copy of bits [begin, begin + length).
  BitVector slice(std::size_t begin, std::size_t length) const;

  /// Overwrites bits [begin, begin + src.size()) with src.
  void write(std::size_t begin, const BitVector& src);

  /// Grows with zero bits or truncates.
  void resize(std::size_t nbits);

  /// XOR of equal-length vectors.
  BitVector& operator^=(const BitVector& other);

  /// AND of equal-length vectors.
  BitVector& operator&=(const BitVector& other);

  /// XOR of `other` into the first other.size() bits; other.size() <= size().
  /// Equivalent to zero-padding `other` to this length first.
  void xor_prefix(const BitVector& other);

  /// XOR of src's bits [begin, begin + size()) into this vector.
  void xor_slice(const BitVector& src, std::size_t begin);
  std::size_t count() const noexcept;
  /// Set bits within [begin, begin + length).
  std::size_t count(std::size_t begin, std::size_t length) const;
  bool none() const noexcept;

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  /// Bits packed MSB-first into bytes (bit 0 is the high bit of byte 0),
  /// zero-padded to a whole byte, two lowercase hex digits per byte.
  std::string to_hex() const;
  static BitVector from_hex(std::string_view hex, std::size_t nbits);

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  void clear_tail() noexcept;

  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

BitVector operator^(BitVector lhs, const BitVector& rhs);

}  // namespace cachekit
