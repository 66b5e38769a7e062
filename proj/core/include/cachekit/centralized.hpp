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
#include <optional>
#include <span>
#include <vector>

#include "cachekit/bitvector.hpp"
#include "cachekit/combinatorics.hpp"
#include "cachekit/model.hpp"
#include "cachekit/rational.hpp"

namespace cachekit {

/// One coded multicast: the XOR exchanged inside `subset`.
struct BroadcastMessage {
  SubsetId subset;
  BitVector payload;

  friend bool operator==(const BroadcastMessage&, const BroadcastMessage&) = default;
};

/// One user per distinct requested file.
struct LeaderSet {
  std::vector<int> leaders;  // ascending

  UserMask mask() const noexcept { return mask_of(leaders); }
};

/// Symbolic subfile W_{file, subset}.
struct SubfileRef {
  int file = 0;
  UserMask subset = 0;

  friend auto operator<=>(const SubfileRef&, const SubfileRef&) = default;
};

/// Splits every file into C(K, t) subfiles of F / C(K, t) bits indexed by the
/// t-subsets in lexicographic order; user k caches the subfiles whose index
/// contains k. Throws PreconditionError unless C(K, t) divides F.
Placement batch_placement(int N, int K, int t, std::size_t F);

/// The batch layout `placement` matches exactly, if any.
std::optional<BatchView> detect_batch_view(const Placement& placement);

/// Lowest-indexed requester of each distinct file.
LeaderSet select_leaders(const Demand& d);

/// Terms of the exchange message for subset A: W_{d_x, A \ {x}} for x in A,
/// listed by descending x.
std::vector<SubfileRef> message_terms(const Demand& d, UserMask A);

/// Direct value of the exchange message for `subset` from the database.
/// Subsets of size zero give an empty vector of subfile length.
BitVector exchange_message(const Database& db, const BatchView& view, int K, const Demand& d,
                           UserMask subset);

/// Every (t+1)-subset that meets the leader set, in lexicographic order,
/// with its exchange message.
std::vector<BroadcastMessage> encode_delivery(const Database& db, const Placement& placement, const Demand& d);
std::vector<BroadcastMessage> encode_delivery(const Database& db, const Placement& placement, const Demand& d,
                                              const LeaderSet& leaders);

/// Rebuilds the message of a leader-free subset A as the XOR of
/// Y_{B \ V} over V in V_F \ {U}, with B = A u U and V_F the subsets of B
/// holding exactly one requester of each requested file.
BitVector reconstruct_message(std::span<const BroadcastMessage> messages, const Demand& d,
                              const LeaderSet& leaders, const SubsetId& A);

struct DecodeReport {
  BitVector file;
  std::size_t reconstructed = 0;  // messages rebuilt via reconstruct_message
};

/// Recovers W_{d_k} for k = cache.user() using only that user's cache and the broadcast.
BitVector decode_user(const UserCache& cache, const Placement& placement,
                      std::span<const BroadcastMessage> messages, const Demand& d, const LeaderSet& leaders);
DecodeReport decode_user_report(const UserCache& cache, const Placement& placement,
                                std::span<const BroadcastMessage> messages, const Demand& d,
                                const LeaderSet& leaders);

/// Checks that XOR over V in V_F of Y_{B \ V} cancels, expanding each Y
/// into symbolic subfiles. B must contain every leader.
bool verify_lemma1(const Demand& d, const LeaderSet& leaders, const SubsetId& B);

/// Same identity on real payloads; needs |B| = N_e + t + 1.
bool verify_lemma1(const Database& db, const Placement& placement, const Demand& d, const LeaderSet& leaders,
                   const SubsetId& B);

/// Total payload bits divided by F.
Rational delivered_rate(std::span<const BroadcastMessage> messages, std::size_t F);

/// "members : hexpayload" per message, one per line.
void write_transcript(std::ostream& out, std::span<const BroadcastMessage> messages);

}  // namespace cachekit
