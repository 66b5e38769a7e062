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
#include <unordered_map>
#include <vector>

#include "cachekit/centralized.hpp"
#include "cachekit/model.hpp"
#include "cachekit/rational.hpp"

namespace cachekit {

/// Decentralized delivery enumerates every subset of users, so K is capped here.
inline constexpr int kMaxDecentralizedUsers = 20;

/// Each user independently caches a uniform floor(M * F / N)-subset of the
/// bits of every file. The sampler is std::mt19937_64(seed) with rejection
/// sampling for bounded integers, users outer and files inner.
Placement random_placement(int N, int K, const Rational& M, std::size_t F, std::uint64_t seed);

/// Bits of the database grouped by the exact set of users caching them.
class LevelPartition {
 public:
  using Positions = std::vector<std::uint32_t>;

  LevelPartition(int K, int N, std::size_t F);

  int users() const noexcept { return K_; }
  int files() const noexcept { return N_; }
  std::size_t file_bits() const noexcept { return F_; }

  /// Ascending bit positions of `file` cached by exactly the users in `holders`.
  const Positions& group(UserMask holders, int file) const;
  Positions& group(UserMask holders, int file);

  /// Number of database bits cached by exactly j users.
  std::size_t level_size(int j) const;

 private:
  int K_;
  int N_;
  std::size_t F_;
  std::unordered_map<UserMask, std::vector<Positions>> groups_;  // holders -> per-file positions
};

LevelPartition level_partition(const Placement& placement);

/// Per-level leader delivery over unequal groups. For every level j and every
/// (j+1)-subset A meeting the leaders, emits the XOR of the chunks
/// W_{d_x, A \ {x}}, each zero-padded to the longest. Subsets whose chunks are
/// all empty are skipped. Order: level ascending, then lexicographic.
std::vector<BroadcastMessage> encode_delivery_decentralized(const Database& db, const LevelPartition& partition,
                                                            const Demand& d);
std::vector<BroadcastMessage> encode_delivery_decentralized(const Database& db, const LevelPartition& partition,
                                                            const Demand& d, const LeaderSet& leaders);

/// Recovers W_{d_k} for k = cache.user(); padding is dropped using the group sizes.
BitVector decode_user_decentralized(const UserCache& cache, const LevelPartition& partition,
                                    std::span<const BroadcastMessage> messages, const Demand& d);
BitVector decode_user_decentralized(const UserCache& cache, const LevelPartition& partition,
                                    std::span<const BroadcastMessage> messages, const Demand& d,
                                    const LeaderSet& leaders);

/// Total transmitted bits divided by F.
Rational empirical_rate(std::span<const BroadcastMessage> messages, std::size_t F);

/// Zero bits inserted to align chunks: for every message, the sum over its
/// chunks of (payload length - chunk length).
std::size_t padding_bits(const LevelPartition& partition, const Demand& d, std::span<const BroadcastMessage> messages);

}  // namespace cachekit
