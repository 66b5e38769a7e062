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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cachekit/errors.hpp"
#include "cachekit/rational.hpp"

namespace cachekit {

/// Largest user count supported by subset masks and rank tables.
inline constexpr int kMaxUsers = 64;

/// Bitmask over users: bit (u - 1) set means user u is a member.
using UserMask = std::uint64_t;

/// C(n, k), with C(n, k) = 0 for k > n. Throws RangeError if the value
/// does not fit in 64 bits.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

BigInt binomial_exact(std::uint64_t n, std::uint64_t k);

/// A set of users (1-based, strictly increasing) together with its position
/// in the lexicographic enumeration of same-size subsets of {1..K}.
struct SubsetId {
  std::vector<int> members;
  std::uint64_t rank = 0;

  UserMask mask() const noexcept;
  bool contains(int user) const noexcept;
  std::string to_string() const;  // "1,2,3"; empty set renders as ""

  friend bool operator==(const SubsetId&, const SubsetId&) = default;
};

UserMask mask_of(std::span<const int> members);
std::vector<int> members_of(UserMask mask);

/// Lexicographic rank of a sorted member list among all subsets of {1..K}
/// with the same size.
std::uint64_t subset_rank(int K, std::span<const int> members);
std::uint64_t subset_rank(int K, UserMask mask);

SubsetId unrank_subset(int K, int size, std::uint64_t rank);
SubsetId make_subset(int K, std::span<const int> members);
SubsetId make_subset(int K, UserMask mask);

/// All C(K, size) subsets in lexicographic order of their member lists.
std::vector<SubsetId> enumerate_subsets(int K, int size);

/// Number of maps from {1..K} onto {1..e}. Throws RangeError on 64-bit overflow.
std::uint64_t surjection_count(int K, int e);
BigInt surjection_count_exact(int K, int e);

template <class T>
struct EnvelopePoint {
  int t = 0;
  T value{};
};

/// Vertices of the lower convex hull of `points` (t strictly increasing,
/// non-empty). Points on a hull edge are dropped.
template <class T>
std::vector<EnvelopePoint<T>> lower_hull(std::span<const EnvelopePoint<T>> points) {
  if (points.empty()) {
    throw DomainError("envelope needs at least one point");
  }
  std::vector<EnvelopePoint<T>> hull;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (i > 0 && p.t <= points[i - 1].t) {
      throw DomainError("envelope points must have strictly increasing t");
    }
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      // b is kept only if a -> b -> p turns counter-clockwise.
      const T cross = T(b.t - a.t) * (p.value - a.value) - (b.value - a.value) * T(p.t - a.t);
      if (cross > T(0)) break;
      hull.pop_back();
    }
    hull.push_back(p);
  }
  return hull;
}

/// Value at x of the lower convex envelope of `points`.
template <class T>
T lower_convex_envelope(std::span<const EnvelopePoint<T>> points, const T& x) {
  const auto hull = lower_hull(points);
  if (x < T(hull.front().t) || x > T(hull.back().t)) {
    throw DomainError("envelope evaluated outside [min t, max t]");
  }
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[i + 1];
    if (x <= T(b.t)) {
      return a.value + (b.value - a.value) * (x - T(a.t)) / T(b.t - a.t);
    }
  }
  return hull.back().value;
}

}  // namespace cachekit
