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

#include "cachekit/decentralized.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <string>

#include "cachekit/errors.hpp"

namespace cachekit {

namespace {

void check_users(int K) {
  if (K < 1 || K > kMaxDecentralizedUsers) {
    throw DomainError("decentralized scheme supports 1 <= K <= " + std::to_string(kMaxDecentralizedUsers));
  }
}

BitVector gather(const BitVector& row, const LevelPartition::Positions& positions) {
  BitVector out(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) out.set(i, row.get(positions[i]));
  return out;
}

UserMask without(UserMask set, int user) { return set & ~(UserMask{1} << (user - 1)); }

// Longest chunk in the exchange for A: max over x in A of |group(A \ {x}, d_x)|.
std::size_t exchange_length(const LevelPartition& partition, const Demand& d, UserMask A) {
  std::size_t out = 0;
  for (int x : members_of(A)) out = std::max(out, partition.group(without(A, x), d.file_of(x)).size());
  return out;
}

std::string subset_text(UserMask mask) { return "{" + SubsetId{members_of(mask), 0}.to_string() + "}"; }

}  // namespace

Placement random_placement(int N, int K, const Rational& M, std::size_t F, std::uint64_t seed) {
  if (M < 0 || M > N) {
    throw DomainError("cache size M must lie in [0, N]");
  }
  const Rational share = M * Rational(F) / Rational(N);
  const auto quota = static_cast<std::size_t>(
      (boost::multiprecision::numerator(share) / boost::multiprecision::denominator(share)).convert_to<std::uint64_t>());
  Placement placement(K, N, F, M);
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> perm(F);
  for (int k = 1; k <= K; ++k) {
    for (int i = 1; i <= N; ++i) {
      std::iota(perm.begin(), perm.end(), 0U);
      for (std::size_t j = 0; j < quota; ++j) {
        const std::size_t pick = j + static_cast<std::size_t>(uniform_below(rng, F - j));
        std::swap(perm[j], perm[pick]);
        placement.cache(k, i, perm[j]);
      }
    }
  }
  return placement;
}

LevelPartition::LevelPartition(int K, int N, std::size_t F) : K_(K), N_(N), F_(F) {
  check_users(K);
  if (N < 1) {
    throw DomainError("partition needs N >= 1");
  }
}

const LevelPartition::Positions& LevelPartition::group(UserMask holders, int file) const {
  static const Positions kEmpty;
  if (file < 1 || file > N_) {
    throw DomainError("file index outside [1, N]");
  }
  const auto it = groups_.find(holders);
  return it == groups_.end() ? kEmpty : it->second[static_cast<std::size_t>(file - 1)];
}

LevelPartition::Positions& LevelPartition::group(UserMask holders, int file) {
  if (file < 1 || file > N_) {
    throw DomainError("file index outside [1, N]");
  }
  auto& per_file = groups_[holders];
  per_file.resize(static_cast<std::size_t>(N_));
  return per_file[static_cast<std::size_t>(file - 1)];
}

std::size_t LevelPartition::level_size(int j) const {
  std::size_t out = 0;
  for (const auto& [holders, per_file] : groups_) {
    if (std::popcount(holders) != j) continue;
    for (const auto& p : per_file) out += p.size();
  }
  return out;
}

LevelPartition level_partition(const Placement& placement) {
  const int K = placement.users();
  const int N = placement.files();
  const std::size_t F = placement.file_bits();
  LevelPartition out(K, N, F);
  for (int i = 1; i <= N; ++i) {
    std::vector<UserMask> holders(F, 0);
    for (int k = 1; k <= K; ++k) {
      const BitVector& m = placement.mask(k, i);
      for (std::size_t b = 0; b < F; ++b) {
        if (m.get(b)) holders[b] |= UserMask{1} << (k - 1);
      }
    }
    for (std::size_t b = 0; b < F; ++b) out.group(holders[b], i).push_back(static_cast<std::uint32_t>(b));
  }
  return out;
}

std::vector<BroadcastMessage> encode_delivery_decentralized(const Database& db, const LevelPartition& partition,
                                                            const Demand& d) {
  return encode_delivery_decentralized(db, partition, d, select_leaders(d));
}

std::vector<BroadcastMessage> encode_delivery_decentralized(const Database& db, const LevelPartition& partition,
                                                            const Demand& d, const LeaderSet& leaders) {
  const int K = partition.users();
  if (db.N != partition.files() || db.F != partition.file_bits()) {
    throw ContractError("database and partition disagree on N or F");
  }
  if (d.users() != K) {
    throw ContractError("demand size does not match the number of users");
  }
  d.validate(db.N);

  const UserMask U = leaders.mask();
  std::vector<BroadcastMessage> out;
  for (int j = 0; j < K; ++j) {
    for (auto& subset : enumerate_subsets(K, j + 1)) {
      const UserMask A = subset.mask();
      if ((A & U) == 0) continue;
      const std::size_t length = exchange_length(partition, d, A);
      if (length == 0) continue;
      BitVector payload(length);
      for (int x : subset.members) {
        payload.xor_prefix(gather(db.file(d.file_of(x)), partition.group(without(A, x), d.file_of(x))));
      }
      out.push_back({std::move(subset), std::move(payload)});
    }
  }
  return out;
}

BitVector decode_user_decentralized(const UserCache& cache, const LevelPartition& partition,
                                    std::span<const BroadcastMessage> messages, const Demand& d) {
  return decode_user_decentralized(cache, partition, messages, d, select_leaders(d));
}

BitVector decode_user_decentralized(const UserCache& cache, const LevelPartition& partition,
                                    std::span<const BroadcastMessage> messages, const Demand& d,
                                    const LeaderSet& leaders) {
  const int K = partition.users();
  if (d.users() != K) {
    throw ContractError("demand size does not match the number of users");
  }
  const int k = cache.user();
  const UserMask self = UserMask{1} << (k - 1);
  const UserMask U = leaders.mask();
  const int wanted = d.file_of(k);

  std::unordered_map<UserMask, const BitVector*> index;
  for (const auto& m : messages) index.emplace(m.subset.mask(), &m.payload);

  // Chunk of `file` held by exactly `holders`; k must be among the holders.
  auto cached_chunk = [&](UserMask holders, int file) {
    const auto& positions = partition.group(holders, file);
    BitVector out(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) out.set(i, cache.read_bit(file, positions[i]));
    return out;
  };

  // Broadcast value of Y_A at its own padded length; empty if nothing was sent.
  auto direct = [&](UserMask A) -> BitVector {
    const std::size_t length = exchange_length(partition, d, A);
    if (length == 0) return BitVector();
    const auto it = index.find(A);
    if (it == index.end()) {
      throw DecodeError("missing broadcast message for subset " + subset_text(A));
    }
    if (it->second->size() != length) {
      throw DecodeError("message for subset " + subset_text(A) + " has unexpected length");
    }
    return *it->second;
  };

  auto message = [&](UserMask A) -> BitVector {
    if ((A & U) != 0) return direct(A);
    const std::size_t length = exchange_length(partition, d, A);
    if (length == 0) return BitVector();
    // Same identity as the centralized case, on zero-extended payloads.
    const UserMask B = A | U;
    std::vector<BitVector> terms;
    std::size_t longest = length;
    std::vector<std::vector<int>> groups;
    for (int u : leaders.leaders) {
      std::vector<int> group;
      for (int x : members_of(B)) {
        if (d.file_of(x) == d.file_of(u)) group.push_back(x);
      }
      groups.push_back(std::move(group));
    }
    std::vector<std::size_t> pick(groups.size(), 0);
    while (true) {
      UserMask V = 0;
      for (std::size_t g = 0; g < groups.size(); ++g) V |= UserMask{1} << (groups[g][pick[g]] - 1);
      if (V != U) {
        terms.push_back(direct(B & ~V));
        longest = std::max(longest, terms.back().size());
      }
      std::size_t g = 0;
      while (g < groups.size() && ++pick[g] == groups[g].size()) pick[g++] = 0;
      if (g == groups.size()) break;
    }
    BitVector acc(longest);
    for (const auto& term : terms) acc.xor_prefix(term);
    return acc.slice(0, length);
  };

  BitVector out(partition.file_bits());
  for (int j = 0; j <= K; ++j) {
    for (const auto& subset : enumerate_subsets(K, j)) {
      const UserMask S = subset.mask();
      const auto& positions = partition.group(S, wanted);
      if (positions.empty()) continue;
      BitVector chunk;
      if ((S & self) != 0) {
        chunk = cached_chunk(S, wanted);
      } else {
        const UserMask A = S | self;
        BitVector value = message(A);
        for (int x : subset.members) value.xor_prefix(cached_chunk(without(A, x), d.file_of(x)));
        chunk = value.slice(0, positions.size());
      }
      for (std::size_t i = 0; i < positions.size(); ++i) out.set(positions[i], chunk.get(i));
    }
  }
  return out;
}

Rational empirical_rate(std::span<const BroadcastMessage> messages, std::size_t F) {
  return delivered_rate(messages, F);
}

std::size_t padding_bits(const LevelPartition& partition, const Demand& d,
                         std::span<const BroadcastMessage> messages) {
  std::size_t out = 0;
  for (const auto& m : messages) {
    const UserMask A = m.subset.mask();
    for (int x : m.subset.members) out += m.payload.size() - partition.group(without(A, x), d.file_of(x)).size();
  }
  return out;
}

}  // namespace cachekit
