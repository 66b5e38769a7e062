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

#include "cachekit/centralized.hpp"

#include <bit>
#include <map>
#include <ostream>
#include <string>

#include "cachekit/errors.hpp"

namespace cachekit {

namespace {

const BatchView& require_batch(const Placement& placement) {
  if (!placement.batch_view()) {
    throw ContractError("placement has no batch view; centralized delivery needs a batch placement");
  }
  return *placement.batch_view();
}

void require_users(const Demand& d, int K) {
  if (d.users() != K) {
    throw ContractError("demand names " + std::to_string(d.users()) + " users, placement has " +
                        std::to_string(K));
  }
}

std::string subset_text(UserMask mask) {
  const auto members = members_of(mask);
  return "{" + SubsetId{members, 0}.to_string() + "}";
}

// Messages of one subset size, addressed by subset rank. Messages of any
// other size are not indexed.
class MessageIndex {
 public:
  MessageIndex(std::span<const BroadcastMessage> messages, int K, int size)
      : K_(K), size_(size), by_rank_(binomial(static_cast<std::uint64_t>(K), static_cast<std::uint64_t>(size)), nullptr) {
    for (const auto& m : messages) {
      if (std::popcount(m.subset.mask()) == size) by_rank_[subset_rank(K, m.subset.mask())] = &m.payload;
    }
  }

  const BitVector* find(UserMask mask) const {
    if (std::popcount(mask) != size_) return nullptr;
    return by_rank_[subset_rank(K_, mask)];
  }

 private:
  int K_;
  int size_;
  std::vector<const BitVector*> by_rank_;
};

// Calls fn(S) for every size-`size` subset of {1..K}, in increasing mask order.
template <class Fn>
void for_each_subset_mask(int K, int size, Fn&& fn) {
  if (size == 0) {
    fn(UserMask{0});
    return;
  }
  const UserMask limit = K == kMaxUsers ? 0 : UserMask{1} << K;
  UserMask S = (size == kMaxUsers) ? ~UserMask{0} : (UserMask{1} << size) - 1;
  while (true) {
    fn(S);
    // Next mask with the same popcount.
    const UserMask low = S & (~S + 1);
    const UserMask ripple = S + low;
    if (ripple == 0) return;
    S = ripple | (((S ^ ripple) >> 2) / low);
    if (limit != 0 && S >= limit) return;
  }
}

// Calls fn(V) for every V in V_F: one requester of each requested file, drawn from B.
template <class Fn>
void for_each_exchange_family(const Demand& d, const LeaderSet& leaders, UserMask B, Fn&& fn) {
  std::vector<std::vector<int>> groups;
  groups.reserve(leaders.leaders.size());
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
    fn(V);
    std::size_t g = 0;
    while (g < groups.size() && ++pick[g] == groups[g].size()) pick[g++] = 0;
    if (g == groups.size()) return;
  }
}

BitVector reconstruct_with_index(const MessageIndex& index, const Demand& d, const LeaderSet& leaders,
                                 UserMask A, std::size_t payload_bits) {
  const UserMask U = leaders.mask();
  if ((A & U) != 0) {
    throw ContractError("subset " + subset_text(A) + " contains a leader; its message is broadcast directly");
  }
  const UserMask B = A | U;
  BitVector out(payload_bits);
  for_each_exchange_family(d, leaders, B, [&](UserMask V) {
    if (V == U) return;
    const UserMask part = B & ~V;
    const BitVector* y = index.find(part);
    if (y == nullptr) {
      throw DecodeError("missing broadcast message for subset " + subset_text(part));
    }
    out ^= *y;
  });
  return out;
}

}  // namespace

Placement batch_placement(int N, int K, int t, std::size_t F) {
  if (t < 0 || t > K) {
    throw DomainError("t must lie in [0, K]");
  }
  const std::uint64_t parts = binomial(static_cast<std::uint64_t>(K), static_cast<std::uint64_t>(t));
  if (F % parts != 0) {
    throw PreconditionError("F = " + std::to_string(F) + " must be a multiple of C(" + std::to_string(K) + "," +
                            std::to_string(t) + ") = " + std::to_string(parts));
  }
  Placement placement(K, N, F, Rational(N * t, K));
  const BatchView view{t, F / parts};
  for (const auto& subset : enumerate_subsets(K, t)) {
    for (int k : subset.members) {
      for (int i = 1; i <= N; ++i) placement.cache_range(k, i, view.begin(subset.rank), view.subfile_bits);
    }
  }
  placement.set_batch_view(view);
  return placement;
}

std::optional<BatchView> detect_batch_view(const Placement& placement) {
  const int K = placement.users();
  const std::size_t F = placement.file_bits();
  for (int t = 0; t <= K; ++t) {
    const std::uint64_t parts = binomial(static_cast<std::uint64_t>(K), static_cast<std::uint64_t>(t));
    if (F % parts != 0) continue;
    const Placement candidate = batch_placement(placement.files(), K, t, F);
    bool same = true;
    for (int k = 1; k <= K && same; ++k) {
      for (int i = 1; i <= placement.files() && same; ++i) same = candidate.mask(k, i) == placement.mask(k, i);
    }
    if (same) return candidate.batch_view();
  }
  return std::nullopt;
}

LeaderSet select_leaders(const Demand& d) {
  LeaderSet out;
  std::vector<int> seen;
  for (int k = 1; k <= d.users(); ++k) {
    const int f = d.file_of(k);
    if (std::find(seen.begin(), seen.end(), f) == seen.end()) {
      seen.push_back(f);
      out.leaders.push_back(k);
    }
  }
  return out;
}

std::vector<SubfileRef> message_terms(const Demand& d, UserMask A) {
  std::vector<SubfileRef> out;
  auto members = members_of(A);
  for (auto it = members.rbegin(); it != members.rend(); ++it) {
    out.push_back({d.file_of(*it), A & ~(UserMask{1} << (*it - 1))});
  }
  return out;
}

BitVector exchange_message(const Database& db, const BatchView& view, int K, const Demand& d, UserMask subset) {
  BitVector out(view.subfile_bits);
  for (int x : members_of(subset)) {
    const UserMask rest = subset & ~(UserMask{1} << (x - 1));
    if (std::popcount(rest) != view.t) {
      throw DomainError("subset " + subset_text(subset) + " does not have size t + 1");
    }
    out ^= db.file(d.file_of(x)).slice(view.begin(subset_rank(K, rest)), view.subfile_bits);
  }
  return out;
}

std::vector<BroadcastMessage> encode_delivery(const Database& db, const Placement& placement, const Demand& d) {
  return encode_delivery(db, placement, d, select_leaders(d));
}

std::vector<BroadcastMessage> encode_delivery(const Database& db, const Placement& placement, const Demand& d,
                                              const LeaderSet& leaders) {
  const BatchView& view = require_batch(placement);
  const int K = placement.users();
  require_users(d, K);
  d.validate(placement.files());
  std::vector<BroadcastMessage> out;
  if (view.t == K) return out;
  const UserMask U = leaders.mask();
  for (auto& subset : enumerate_subsets(K, view.t + 1)) {
    const UserMask A = subset.mask();
    if ((A & U) == 0) continue;
    BitVector payload = exchange_message(db, view, K, d, A);
    out.push_back({std::move(subset), std::move(payload)});
  }
  return out;
}

BitVector reconstruct_message(std::span<const BroadcastMessage> messages, const Demand& d,
                              const LeaderSet& leaders, const SubsetId& A) {
  const MessageIndex index(messages, d.users(), static_cast<int>(A.members.size()));
  const std::size_t bits = messages.empty() ? 0 : messages.front().payload.size();
  return reconstruct_with_index(index, d, leaders, A.mask(), bits);
}

BitVector decode_user(const UserCache& cache, const Placement& placement,
                      std::span<const BroadcastMessage> messages, const Demand& d, const LeaderSet& leaders) {
  return decode_user_report(cache, placement, messages, d, leaders).file;
}

DecodeReport decode_user_report(const UserCache& cache, const Placement& placement,
                                std::span<const BroadcastMessage> messages, const Demand& d,
                                const LeaderSet& leaders) {
  const BatchView& view = require_batch(placement);
  const int K = placement.users();
  require_users(d, K);
  const int k = cache.user();
  const int wanted = d.file_of(k);
  const UserMask self = UserMask{1} << (k - 1);
  const std::size_t L = view.subfile_bits;
  const MessageIndex index(messages, K, view.t + 1);

  DecodeReport report{BitVector(placement.file_bits()), 0};
  BitVector value(L);
  for_each_subset_mask(K, view.t, [&](UserMask S) {
    const std::size_t begin = view.begin(subset_rank(K, S));
    if ((S & self) != 0) {
      report.file.write(begin, cache.read(wanted, begin, L));
      return;
    }
    // W_{d_k, S} = Y_{S u {k}} xor (xor over x in S of W_{d_x, (S u {k}) \ {x}}).
    const UserMask A = S | self;
    if (const BitVector* y = index.find(A)) {
      value = *y;
    } else if ((A & leaders.mask()) != 0) {
      throw DecodeError("missing broadcast message for subset " + subset_text(A));
    } else {
      value = reconstruct_with_index(index, d, leaders, A, L);
      ++report.reconstructed;
    }
    for (UserMask rest = S; rest != 0; rest &= rest - 1) {
      const int x = std::countr_zero(rest) + 1;
      const UserMask other = A & ~(UserMask{1} << (x - 1));
      cache.xor_into(value, d.file_of(x), view.begin(subset_rank(K, other)));
    }
    report.file.write(begin, value);
  });
  return report;
}

bool verify_lemma1(const Demand& d, const LeaderSet& leaders, const SubsetId& B) {
  const UserMask b = B.mask();
  const UserMask U = leaders.mask();
  if ((b & U) != U) {
    throw PreconditionError("B must contain every leader");
  }
  std::map<SubfileRef, bool> odd;
  for_each_exchange_family(d, leaders, b, [&](UserMask V) {
    for (const auto& term : message_terms(d, b & ~V)) odd[term] = !odd[term];
  });
  for (const auto& [term, flag] : odd) {
    if (flag) return false;
  }
  return true;
}

bool verify_lemma1(const Database& db, const Placement& placement, const Demand& d, const LeaderSet& leaders,
                   const SubsetId& B) {
  const BatchView& view = require_batch(placement);
  const UserMask b = B.mask();
  const UserMask U = leaders.mask();
  if ((b & U) != U) {
    throw PreconditionError("B must contain every leader");
  }
  if (std::popcount(b) != static_cast<int>(leaders.leaders.size()) + view.t + 1) {
    throw PreconditionError("payload check needs |B| = N_e + t + 1");
  }
  BitVector acc(view.subfile_bits);
  for_each_exchange_family(d, leaders, b, [&](UserMask V) {
    acc ^= exchange_message(db, view, placement.users(), d, b & ~V);
  });
  return acc.none();
}

Rational delivered_rate(std::span<const BroadcastMessage> messages, std::size_t F) {
  if (F == 0) {
    throw DomainError("F must be positive");
  }
  std::size_t bits = 0;
  for (const auto& m : messages) bits += m.payload.size();
  return Rational(bits, F);
}

void write_transcript(std::ostream& out, std::span<const BroadcastMessage> messages) {
  for (const auto& m : messages) out << m.subset.to_string() << " : " << m.payload.to_hex() << '\n';
}

}  // namespace cachekit
