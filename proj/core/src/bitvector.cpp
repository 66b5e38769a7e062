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

#include "cachekit/bitvector.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "cachekit/errors.hpp"

namespace cachekit {

namespace {

constexpr std::size_t words_for(std::size_t nbits) { return (nbits + 63) / 64; }

// Up to 64 bits starting at `pos`, returned in the low bits.
std::uint64_t load_bits(std::span<const std::uint64_t> words, std::size_t pos, std::size_t count) {
  const std::size_t word = pos >> 6;
  const unsigned shift = pos & 63;
  std::uint64_t value = words[word] >> shift;
  if (shift != 0 && shift + count > 64) {
    value |= words[word + 1] << (64 - shift);
  }
  if (count < 64) {
    value &= (std::uint64_t{1} << count) - 1;
  }
  return value;
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

BitVector::BitVector(std::size_t nbits) : nbits_(nbits), words_(words_for(nbits), 0) {}

BitVector BitVector::slice(std::size_t begin, std::size_t length) const {
  if (begin + length > nbits_) {
    throw DomainError("bit slice out of range");
  }
  BitVector out(length);
  if ((begin & 63) == 0) {
    for (std::size_t w = 0; w < out.words_.size(); ++w) out.words_[w] = words_[(begin >> 6) + w];
  } else {
    for (std::size_t w = 0; w < out.words_.size(); ++w) {
      const std::size_t count = std::min<std::size_t>(64, length - w * 64);
      out.words_[w] = load_bits(words_, begin + w * 64, count);
    }
  }
  out.clear_tail();
  return out;
}

void BitVector::write(std::size_t begin, const BitVector& src) {
  if (begin + src.nbits_ > nbits_) {
    throw DomainError("bit write out of range");
  }
  if ((begin & 63) == 0) {
    const std::size_t base = begin >> 6;
    const std::size_t full = src.nbits_ / 64;
    for (std::size_t w = 0; w < full; ++w) words_[base + w] = src.words_[w];
    for (std::size_t i = full * 64; i < src.nbits_; ++i) set(begin + i, src.get(i));
    return;
  }
  for (std::size_t i = 0; i < src.nbits_; ++i) set(begin + i, src.get(i));
}

void BitVector::resize(std::size_t nbits) {
  words_.resize(words_for(nbits), 0);
  nbits_ = nbits;
  clear_tail();
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.nbits_ != nbits_) {
    throw DomainError("xor of bit vectors with different lengths");
  }
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

BitVector& BitVector::operator&=(const BitVector& other) {
  if (other.nbits_ != nbits_) {
    throw DomainError("and of bit vectors with different lengths");
  }
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
  return *this;
}

void BitVector::xor_prefix(const BitVector& other) {
  if (other.nbits_ > nbits_) {
    throw DomainError("xor_prefix operand longer than target");
  }
  for (std::size_t w = 0; w < other.words_.size(); ++w) words_[w] ^= other.words_[w];
}

void BitVector::xor_slice(const BitVector& src, std::size_t begin) {
  if (begin + nbits_ > src.nbits_) {
    throw DomainError("xor_slice source range out of range");
  }
  for (std::size_t w = 0; w < words_.size(); ++w) {
    const std::size_t n = std::min<std::size_t>(64, nbits_ - w * 64);
    words_[w] ^= load_bits(src.words_, begin + w * 64, n);
  }
}

std::size_t BitVector::count(std::size_t begin, std::size_t length) const {
  if (begin + length > nbits_) {
    throw DomainError("bit range out of range");
  }
  std::size_t total = 0;
  for (std::size_t done = 0; done < length; done += 64) {
    const std::size_t n = std::min<std::size_t>(64, length - done);
    total += static_cast<std::size_t>(std::popcount(load_bits(words_, begin + done, n)));
  }
  return total;
}

std::size_t BitVector::count() const noexcept {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool BitVector::none() const noexcept {
  for (auto w : words_) {
    if (w != 0) return false;
  }
  return true;
}

std::string BitVector::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t nbytes = (nbits_ + 7) / 8;
  std::string out;
  out.reserve(nbytes * 2);
  for (std::size_t byte = 0; byte < nbytes; ++byte) {
    unsigned value = 0;
    for (std::size_t b = 0; b < 8; ++b) {
      const std::size_t i = byte * 8 + b;
      value = (value << 1) | ((i < nbits_ && get(i)) ? 1U : 0U);
    }
    out.push_back(kDigits[value >> 4]);
    out.push_back(kDigits[value & 15]);
  }
  return out;
}

BitVector BitVector::from_hex(std::string_view hex, std::size_t nbits) {
  if (hex.size() != 2 * ((nbits + 7) / 8)) {
    throw DomainError("hex string length does not match bit count");
  }
  BitVector out(nbits);
  for (std::size_t byte = 0; byte * 2 < hex.size(); ++byte) {
    const int hi = hex_digit(hex[2 * byte]);
    const int lo = hex_digit(hex[2 * byte + 1]);
    if (hi < 0 || lo < 0) {
      throw DomainError("invalid hex digit");
    }
    const unsigned value = static_cast<unsigned>(hi * 16 + lo);
    for (std::size_t b = 0; b < 8; ++b) {
      const std::size_t i = byte * 8 + b;
      const bool bit = (value >> (7 - b)) & 1U;
      if (i < nbits) {
        out.set(i, bit);
      } else if (bit) {
        throw DomainError("nonzero padding bits in hex string");
      }
    }
  }
  return out;
}

void BitVector::clear_tail() noexcept {
  if (nbits_ % 64 != 0 && !words_.empty()) {
    words_.back() &= (std::uint64_t{1} << (nbits_ % 64)) - 1;
  }
}

BitVector operator^(BitVector lhs, const BitVector& rhs) {
  lhs ^= rhs;
  return lhs;
}

}  // namespace cachekit
