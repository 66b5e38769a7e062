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

#include "cachekit/combinatorics.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <numeric>

namespace cachekit {

namespace {

// Pascal table for n <= 64; C(64, 32) < 2^64 so every entry is exact.
using PascalTable = std::array<std::array<std::uint64_t, kMaxUsers + 1>, kMaxUsers + 1>;

constexpr PascalTable make_pascal() {
  PascalTable c{};
  for (int n = 0; n <= kMaxUsers; ++n) {
    c[n][0] = 1;
    for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + c[n - 1][k];
  }
  return c;
}

constexpr PascalTable kPascal = make_pascal();

constexpr const PascalTable& pascal() { return kPascal; }

void check_users(int K) {
  if (K < 0 || K > kMaxUsers) {
    throw DomainError("user count " + std::to_string(K) + " outside [0, 64]");
  }
}

}  // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (n <= static_cast<std::uint64_t>(kMaxUsers)) return pascal()[n][k];
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i is integral; cancel the gcd first so the
    // division is exact without a wider intermediate.
    const std::uint64_t g = std::gcd(result, i);
    const std::uint64_t factor = (n - k + i) / (i / g);
    if (__builtin_mul_overflow(result / g, factor, &result)) {
      throw RangeError("C(" + std::to_string(n) + "," + std::to_string(k) + ") exceeds 64 bits");
    }
  }
  return result;
}

BigInt binomial_exact(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

UserMask SubsetId::mask() const noexcept { return mask_of(members); }

bool SubsetId::contains(int user) const noexcept {
  return std::binary_search(members.begin(), members.end(), user);
}

std::string SubsetId::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(members[i]);
  }
  return out;
}

UserMask mask_of(std::span<const int> members) {
  UserMask mask = 0;
  for (int u : members) mask |= UserMask{1} << (u - 1);
  return mask;
}

std::vector<int> members_of(UserMask mask) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(std::popcount(mask)));
  while (mask != 0) {
    out.push_back(std::countr_zero(mask) + 1);
    mask &= mask - 1;
  }
  return out;
}

std::uint64_t subset_rank(int K, std::span<const int> members) {
  check_users(K);
  const auto& c = pascal();
  const int size = static_cast<int>(members.size());
  std::uint64_t rank = 0;
  int prev = 0;
  for (int i = 0; i < size; ++i) {
    const int m = members[static_cast<std::size_t>(i)];
    if (m <= prev || m > K) {
      throw DomainError("subset members must be strictly increasing within [1, K]");
    }
    // Skip every subset whose i-th element lies in (prev, m): by the hockey
    // stick identity that is C(K-prev, size-i) - C(K-m+1, size-i).
    rank += c[K - prev][size - i] - c[K - m + 1][size - i];
    prev = m;
  }
  return rank;
}

std::uint64_t subset_rank(int K, UserMask mask) {
  check_users(K);
  if (K < kMaxUsers && (mask >> K) != 0) {
    throw DomainError("subset members must lie within [1, K]");
  }
  const auto& c = pascal();
  const int size = std::popcount(mask);
  std::uint64_t rank = 0;
  int prev = 0;
  for (int i = 0; mask != 0; ++i, mask &= mask - 1) {
    const int m = std::countr_zero(mask) + 1;
    rank += c[K - prev][size - i] - c[K - m + 1][size - i];
    prev = m;
  }
  return rank;
}

SubsetId unrank_subset(int K, int size, std::uint64_t rank) {
  check_users(K);
  if (size < 0 || size > K) {
    throw DomainError("subset size outside [0, K]");
  }
  const auto& c = pascal();
  if (rank >= c[K][size]) {
    throw DomainError("subset rank out of range");
  }
  SubsetId out;
  out.rank = rank;
  out.members.reserve(static_cast<std::size_t>(size));
  int v = 1;
  for (int i = 0; i < size; ++i) {
    while (true) {
      const std::uint64_t block = c[K - v][size - i - 1];
      if (rank < block) break;
      rank -= block;
      ++v;
    }
    out.members.push_back(v);
    ++v;
  }
  return out;
}

SubsetId make_subset(int K, std::span<const int> members) {
  return SubsetId{std::vector<int>(members.begin(), members.end()), subset_rank(K, members)};
}

SubsetId make_subset(int K, UserMask mask) {
  auto members = members_of(mask);
  const auto rank = subset_rank(K, members);
  return SubsetId{std::move(members), rank};
}

std::vector<SubsetId> enumerate_subsets(int K, int size) {
  check_users(K);
  if (size < 0 || size > K) {
    throw DomainError("subset size outside [0, K]");
  }
  std::vector<SubsetId> out;
  out.reserve(pascal()[K][size]);
  std::vector<int> current(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) current[static_cast<std::size_t>(i)] = i + 1;
  std::uint64_t rank = 0;
  while (true) {
    out.push_back(SubsetId{current, rank++});
    // Advance to the lexicographic successor.
    int i = size - 1;
    while (i >= 0 && current[static_cast<std::size_t>(i)] == K - size + i + 1) --i;
    if (i < 0) break;
    ++current[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < size; ++j) {
      current[static_cast<std::size_t>(j)] = current[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

BigInt surjection_count_exact(int K, int e) {
  if (K < 0 || e < 0 || e > K) {
    if (K >= 0 && e > K) return 0;
    throw DomainError("surjection_count needs 0 <= e <= K");
  }
  BigInt total = 0;
  for (int i = 0; i <= e; ++i) {
    BigInt term = binomial_exact(static_cast<std::uint64_t>(e), static_cast<std::uint64_t>(i)) *
                  boost::multiprecision::pow(BigInt(e - i), static_cast<unsigned>(K));
    if (i % 2 == 0) {
      total += term;
    } else {
      total -= term;
    }
  }
  return total;
}

std::uint64_t surjection_count(int K, int e) {
  const BigInt exact = surjection_count_exact(K, e);
  if (exact > std::numeric_limits<std::uint64_t>::max()) {
    throw RangeError("surjection count for K=" + std::to_string(K) + ", e=" + std::to_string(e) +
                     " exceeds 64 bits");
  }
  return exact.convert_to<std::uint64_t>();
}

}  // namespace cachekit
