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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "cachekit/errors.hpp"
#include "oracles.hpp"

namespace cachekit {
namespace {

// Six users, three files, t = 2, demand (A,A,B,B,C,C), one-bit subfiles.
struct SixUserFixture {
  Database db = make_database(3, 15, 2024);
  Placement placement = batch_placement(3, 6, 2, 15);
  Demand d{{1, 1, 2, 2, 3, 3}};
  LeaderSet leaders = select_leaders(d);
  std::vector<BroadcastMessage> messages = encode_delivery(db, placement, d, leaders);
};

std::string render_terms(const Demand& d, UserMask A) {
  std::string out;
  for (const auto& term : message_terms(d, A)) {
    if (!out.empty()) out += "+";
    out += static_cast<char>('A' + term.file - 1);
    for (int u : members_of(term.subset)) out += std::to_string(u);
  }
  return out;
}

std::vector<std::uint64_t> sorted_masks(const std::vector<BroadcastMessage>& messages) {
  std::vector<std::uint64_t> out;
  for (const auto& m : messages) out.push_back(m.subset.mask());
  std::sort(out.begin(), out.end());
  return out;
}

TEST(BatchPlacement, SixUserExample) {
  const Placement p = batch_placement(3, 6, 2, 15);
  ASSERT_TRUE(p.batch_view());
  EXPECT_EQ(p.batch_view()->subfile_bits, 1u);
  EXPECT_EQ(p.memory(), Rational(1));
  for (int file = 1; file <= 3; ++file) {
    for (std::size_t bit = 0; bit < 15; ++bit) {
      // Ranks 0..4 are {1,2},...,{1,6}.
      EXPECT_EQ(p.cached(1, file, bit), bit < 5);
    }
  }
  for (int k = 1; k <= 6; ++k) EXPECT_EQ(p.cached_bits(k), 15u);
}

TEST(BatchPlacement, SubfilesHeldByExactlyTheirIndexSet) {
  for (int K = 1; K <= 6; ++K) {
    for (int t = 0; t <= K; ++t) {
      const std::size_t parts = oracle::pascal(K, t);
      const Placement p = batch_placement(2, K, t, 3 * parts);
      const auto sets = oracle::subsets(K, t);
      for (std::size_t r = 0; r < sets.size(); ++r) {
        const UserMask want = mask_of(sets[r]);
        for (std::size_t b = 3 * r; b < 3 * r + 3; ++b) ASSERT_EQ(p.holders(2, b), want);
      }
      for (int k = 1; k <= K; ++k) EXPECT_EQ(Rational(p.cached_bits(k)), Rational(2 * t * 3 * parts, K));
    }
  }
}

TEST(BatchPlacement, Extremes) {
  const Placement empty = batch_placement(2, 4, 0, 6);
  ASSERT_TRUE(empty.batch_view());
  EXPECT_EQ(empty.batch_view()->subfile_bits, 6u);
  for (int k = 1; k <= 4; ++k) EXPECT_EQ(empty.cached_bits(k), 0u);

  const Placement full = batch_placement(2, 4, 4, 6);
  for (int k = 1; k <= 4; ++k) EXPECT_EQ(full.cached_bits(k), 12u);
}

TEST(BatchPlacement, DivisibilityError) {
  try {
    batch_placement(3, 6, 2, 16);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("= 15"), std::string::npos) << e.what();
  }
  EXPECT_THROW(batch_placement(3, 6, 7, 15), DomainError);
}

TEST(BatchPlacement, DetectedFromBitsAlone) {
  const Placement p = batch_placement(2, 5, 2, 20);
  std::stringstream buf;
  write_placement(buf, p);
  const Placement reread = read_placement(buf);
  EXPECT_FALSE(reread.batch_view());
  const auto view = detect_batch_view(reread);
  ASSERT_TRUE(view);
  EXPECT_EQ(view->t, 2);
  EXPECT_EQ(view->subfile_bits, 2u);

  Placement broken = reread;
  broken.cache(1, 1, 19);
  EXPECT_FALSE(detect_batch_view(broken));
}

TEST(Leaders, LowestIndexPerFile) {
  EXPECT_EQ(select_leaders(Demand{{1, 1, 2, 2, 3, 3}}).leaders, (std::vector<int>{1, 3, 5}));
  EXPECT_EQ(select_leaders(Demand{{4, 2, 3, 1}}).leaders, (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(select_leaders(Demand{{2, 2, 2}}).leaders, (std::vector<int>{1}));
  EXPECT_EQ(select_leaders(Demand{{3, 1, 3, 2, 1}}).leaders, (std::vector<int>{1, 2, 4}));
}

TEST(Encode, SixUserTable) {
  const SixUserFixture f;
  ASSERT_EQ(f.messages.size(), 19u);
  const std::map<std::string, std::string> table{
      {"1,2,3", "B12+A13+A23"}, {"1,2,4", "B12+A14+A24"}, {"1,2,5", "C12+A15+A25"}, {"1,2,6", "C12+A16+A26"},
      {"1,3,4", "B13+B14+A34"}, {"1,3,5", "C13+B15+A35"}, {"1,3,6", "C13+B16+A36"}, {"1,4,5", "C14+B15+A45"},
      {"1,4,6", "C14+B16+A46"}, {"1,5,6", "C15+C16+A56"}, {"2,3,4", "B23+B24+A34"}, {"2,3,5", "C23+B25+A35"},
      {"2,3,6", "C23+B26+A36"}, {"2,4,5", "C24+B25+A45"}, {"2,5,6", "C25+C26+A56"}, {"3,4,5", "C34+B35+B45"},
      {"3,4,6", "C34+B36+B46"}, {"3,5,6", "C35+C36+B56"}, {"4,5,6", "C45+C46+B56"},
  };
  for (const auto& m : f.messages) {
    const auto it = table.find(m.subset.to_string());
    ASSERT_NE(it, table.end()) << "unexpected message " << m.subset.to_string();
    EXPECT_EQ(render_terms(f.d, m.subset.mask()), it->second);
    EXPECT_EQ(m.payload.size(), 1u);
  }
  for (const auto& m : f.messages) EXPECT_NE(m.subset.to_string(), "2,4,6");
  EXPECT_EQ(delivered_rate(f.messages, 15), Rational(19, 15));
}

TEST(Encode, BroadcastOrderIsSubsetOrder) {
  const SixUserFixture f;
  for (std::size_t i = 1; i < f.messages.size(); ++i) {
    EXPECT_LT(f.messages[i - 1].subset.rank, f.messages[i].subset.rank);
  }
}

TEST(Encode, PayloadsMatchDirectXor) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const int K = 2 + static_cast<int>(rng() % 5);
    const int N = 1 + static_cast<int>(rng() % 4);
    const int t = static_cast<int>(rng() % (K + 1));
    const std::size_t F = oracle::pascal(K, t) * (1 + rng() % 3);
    const Database db = make_database(N, F, rng());
    const Placement p = batch_placement(N, K, t, F);
    const Demand d = random_demand(N, K, rng());
    const auto messages = encode_delivery(db, p, d);
    const UserMask U = select_leaders(d).mask();
    std::size_t expected = 0;
    for (const auto& A : oracle::subsets(K, t + 1)) {
      if ((mask_of(A) & U) == 0) continue;
      ++expected;
      const auto it = std::find_if(messages.begin(), messages.end(),
                                   [&](const BroadcastMessage& m) { return m.subset.members == A; });
      ASSERT_NE(it, messages.end());
      EXPECT_EQ(it->payload, oracle::exchange(db, K, t, d.files, A));
    }
    EXPECT_EQ(messages.size(), expected);
  }
}

TEST(Encode, AllDistinctDemand) {
  for (int K = 1; K <= 6; ++K) {
    for (int t = 0; t <= K; ++t) {
      Demand d;
      for (int k = 1; k <= K; ++k) d.files.push_back(k);
      const std::size_t F = oracle::pascal(K, t);
      const auto messages = encode_delivery(make_database(K, F, 1), batch_placement(K, K, t, F), d);
      EXPECT_EQ(messages.size(), oracle::pascal(K, t + 1));
      EXPECT_EQ(delivered_rate(messages, F), Rational(K - t, t + 1));
    }
  }
}

TEST(Encode, TwoUsersSameFile) {
  const Database db = make_database(2, 2, 9);
  const Demand d{{1, 1}};
  const auto messages = encode_delivery(db, batch_placement(2, 2, 1, 2), d);
  ASSERT_EQ(messages.size(), 1u);
  EXPECT_EQ(messages[0].subset.to_string(), "1,2");
  // W_{1,{2}} is bit 1 and W_{1,{1}} is bit 0.
  EXPECT_EQ(messages[0].payload.get(0), db.file(1).get(0) != db.file(1).get(1));
  EXPECT_EQ(delivered_rate(messages, 2), Rational(1, 2));
}

TEST(Encode, RequiresBatchView) {
  const Database db = make_database(2, 4, 1);
  const Placement p(2, 2, 4, Rational(0));
  EXPECT_THROW(encode_delivery(db, p, Demand{{1, 2}}), ContractError);
}

TEST(Reconstruct, OmittedSixUserMessage) {
  const SixUserFixture f;
  const SubsetId A = make_subset(6, std::vector<int>{2, 4, 6});
  EXPECT_EQ(reconstruct_message(f.messages, f.d, f.leaders, A), oracle::exchange(f.db, 6, 2, f.d.files, A.members));
}

TEST(Reconstruct, RandomFiveUserInstances) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Database db = make_database(2, 5 * 3, seed);
    const Placement p = batch_placement(2, 5, 1, 15);
    const Demand d = random_demand(2, 5, seed * 31);
    const LeaderSet leaders = select_leaders(d);
    const auto messages = encode_delivery(db, p, d, leaders);
    for (const auto& A : enumerate_subsets(5, 2)) {
      if ((A.mask() & leaders.mask()) != 0) {
        EXPECT_THROW(reconstruct_message(messages, d, leaders, A), ContractError);
      } else {
        EXPECT_EQ(reconstruct_message(messages, d, leaders, A), oracle::exchange(db, 5, 1, d.files, A.members));
      }
    }
  }
}

TEST(Decode, SixUserExample) {
  const SixUserFixture f;
  for (int k = 1; k <= 6; ++k) {
    const UserCache cache(f.db, f.placement, k);
    const DecodeReport report = decode_user_report(cache, f.placement, f.messages, f.d, f.leaders);
    EXPECT_EQ(report.file, f.db.file(f.d.file_of(k))) << "user " << k;
    const bool leader = std::count(f.leaders.leaders.begin(), f.leaders.leaders.end(), k) > 0;
    if (leader) EXPECT_EQ(report.reconstructed, 0u) << "user " << k;
  }
  // User 2 needs the omitted message to recover A_{4,6}.
  const UserCache cache(f.db, f.placement, 2);
  EXPECT_EQ(decode_user_report(cache, f.placement, f.messages, f.d, f.leaders).reconstructed, 1u);
}

TEST(Decode, FullCacheNeedsNothing) {
  const Database db = make_database(2, 3, 5);
  const Placement p = batch_placement(2, 3, 3, 3);
  const Demand d{{2, 1, 2}};
  const auto messages = encode_delivery(db, p, d);
  EXPECT_TRUE(messages.empty());
  EXPECT_EQ(delivered_rate(messages, 3), 0);
  for (int k = 1; k <= 3; ++k) {
    EXPECT_EQ(decode_user(UserCache(db, p, k), p, messages, d, select_leaders(d)), db.file(d.file_of(k)));
  }
}

TEST(Decode, ExhaustiveThreeFilesFourUsers) {
  const std::size_t F = 2 * oracle::pascal(4, 2);
  const Database db = make_database(3, F, 12);
  const Placement p = batch_placement(3, 4, 2, F);
  for (const auto& files : oracle::all_demands(3, 4)) {
    const Demand d{files};
    const LeaderSet leaders = select_leaders(d);
    const auto messages = encode_delivery(db, p, d, leaders);
    for (int k = 1; k <= 4; ++k) {
      ASSERT_EQ(decode_user(UserCache(db, p, k), p, messages, d, leaders), db.file(files[k - 1]));
    }
  }
}

TEST(Decode, MissingMessageIsReported) {
  SixUserFixture f;
  f.messages.erase(std::remove_if(f.messages.begin(), f.messages.end(),
                                  [](const BroadcastMessage& m) { return m.subset.to_string() == "1,4,6"; }),
                   f.messages.end());
  EXPECT_THROW(decode_user(UserCache(f.db, f.placement, 1), f.placement, f.messages, f.d, f.leaders), DecodeError);
  try {
    decode_user(UserCache(f.db, f.placement, 2), f.placement, f.messages, f.d, f.leaders);
    FAIL() << "expected DecodeError";
  } catch (const DecodeError& e) {
    EXPECT_NE(std::string(e.what()).find("{1,4,6}"), std::string::npos) << e.what();
  }
}

TEST(ZeroSumIdentity, Examples) {
  const Demand d{{1, 1, 2, 2, 3, 3}};
  const LeaderSet leaders = select_leaders(d);
  EXPECT_TRUE(verify_lemma1(d, leaders, make_subset(6, std::vector<int>{1, 2, 3, 4, 5, 6})));

  const Demand distinct{{3, 1, 2}};
  const LeaderSet all = select_leaders(distinct);
  EXPECT_TRUE(verify_lemma1(distinct, all, make_subset(3, all.mask())));

  EXPECT_THROW(verify_lemma1(d, leaders, make_subset(6, std::vector<int>{1, 2, 3})), PreconditionError);
}

TEST(ZeroSumIdentity, PayloadIdentityOnSixUserExample) {
  const SixUserFixture f;
  EXPECT_TRUE(verify_lemma1(f.db, f.placement, f.d, f.leaders, make_subset(6, UserMask{0b111111})));
}

TEST(ZeroSumIdentity, RandomConfigurations) {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 200; ++trial) {
    const int K = 1 + static_cast<int>(rng() % 6);
    const int N = 1 + static_cast<int>(rng() % 6);
    const Demand d = random_demand(N, K, rng());
    const LeaderSet leaders = select_leaders(d);
    const UserMask extra = rng() & ((UserMask{1} << K) - 1);
    const SubsetId B = make_subset(K, extra | leaders.mask());
    ASSERT_TRUE(verify_lemma1(d, leaders, B)) << "K=" << K << " B={" << B.to_string() << "}";

    // Payload-level check through the direct XOR oracle.
    const int t = static_cast<int>(B.members.size()) - static_cast<int>(leaders.leaders.size()) - 1;
    if (t < 0) continue;
    const Database db = make_database(N, oracle::pascal(K, t), rng());
    BitVector acc(1);
    std::vector<std::vector<int>> groups;
    for (int u : leaders.leaders) {
      std::vector<int> g;
      for (int x : B.members) {
        if (d.file_of(x) == d.file_of(u)) g.push_back(x);
      }
      groups.push_back(g);
    }
    std::vector<std::size_t> pick(groups.size(), 0);
    while (true) {
      std::vector<int> rest = B.members;
      for (std::size_t g = 0; g < groups.size(); ++g) {
        rest.erase(std::find(rest.begin(), rest.end(), groups[g][pick[g]]));
      }
      acc ^= oracle::exchange(db, K, t, d.files, rest);
      std::size_t g = 0;
      while (g < groups.size() && ++pick[g] == groups[g].size()) pick[g++] = 0;
      if (g == groups.size()) break;
    }
    EXPECT_TRUE(acc.none());
  }
}

TEST(Rate, InvariantWithinType) {
  for (int t = 0; t <= 4; ++t) {
    const std::size_t F = oracle::pascal(4, t);
    const Database db = make_database(3, F, 3);
    const Placement p = batch_placement(3, 4, t, F);
    std::map<DemandStats, Rational> by_type;
    for_each_demand(3, 4, [&](const Demand& d) {
      const Rational r = delivered_rate(encode_delivery(db, p, d), F);
      const auto [it, fresh] = by_type.emplace(demand_stats(d, 3), r);
      if (!fresh) EXPECT_EQ(it->second, r);
    });
  }
}

TEST(Rate, Examples) {
  const auto messages = encode_delivery(make_database(2, 2, 1), batch_placement(2, 2, 1, 2), Demand{{1, 2}});
  EXPECT_EQ(delivered_rate(messages, 2), Rational(1, 2));
  EXPECT_EQ(delivered_rate({}, 7), 0);
  EXPECT_THROW(delivered_rate({}, 0), DomainError);
}

// Relabel users by p and files by sigma; with leaders mapped alongside, each
// message Y_A reappears as Y_{p(A)} with the same payload.
TEST(Symmetry, PermutationEquivariance) {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 20; ++trial) {
    const int K = 3 + static_cast<int>(rng() % 3);
    const int N = 2 + static_cast<int>(rng() % 2);
    const int t = static_cast<int>(rng() % K);
    const std::size_t parts = oracle::pascal(K, t);
    const std::size_t F = 2 * parts;
    std::vector<int> p(K + 1), sigma(N + 1);
    std::iota(p.begin(), p.end(), 0);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::shuffle(p.begin() + 1, p.end(), rng);
    std::shuffle(sigma.begin() + 1, sigma.end(), rng);
    const auto map_mask = [&](UserMask m) {
      UserMask out = 0;
      for (int u : members_of(m)) out |= UserMask{1} << (p[u] - 1);
      return out;
    };

    const Database db = make_database(N, F, rng());
    Database moved{N, F, std::vector<BitVector>(N, BitVector(F))};
    for (int i = 1; i <= N; ++i) {
      for (const auto& S : enumerate_subsets(K, t)) {
        const std::size_t dst = subset_rank(K, map_mask(S.mask())) * 2;
        moved.rows[sigma[i] - 1].write(dst, db.file(i).slice(S.rank * 2, 2));
      }
    }
    const Demand d = random_demand(N, K, rng());
    Demand d2{std::vector<int>(K)};
    for (int k = 1; k <= K; ++k) d2.files[p[k] - 1] = sigma[d.file_of(k)];
    const LeaderSet leaders = select_leaders(d);
    LeaderSet leaders2;
    for (int u : leaders.leaders) leaders2.leaders.push_back(p[u]);
    std::sort(leaders2.leaders.begin(), leaders2.leaders.end());

    const Placement placement = batch_placement(N, K, t, F);
    const auto a = encode_delivery(db, placement, d, leaders);
    const auto b = encode_delivery(moved, placement, d2, leaders2);
    ASSERT_EQ(a.size(), b.size());
    for (const auto& m : a) {
      const UserMask target = map_mask(m.subset.mask());
      const auto it = std::find_if(b.begin(), b.end(),
                                   [&](const BroadcastMessage& x) { return x.subset.mask() == target; });
      ASSERT_NE(it, b.end());
      EXPECT_EQ(it->payload, m.payload);
    }
  }
}

TEST(Transcript, OneLinePerMessage) {
  const Database db = make_database(2, 4, 1);
  const auto messages = encode_delivery(db, batch_placement(2, 2, 1, 4), Demand{{1, 2}});
  std::ostringstream out;
  write_transcript(out, messages);
  ASSERT_EQ(messages.size(), 1u);
  EXPECT_EQ(out.str(), "1,2 : " + messages[0].payload.to_hex() + "\n");
  EXPECT_EQ(messages[0].payload, oracle::exchange(db, 2, 1, {1, 2}, {1, 2}));
}

TEST(Encode, MessageCountIdentity) {
  for (int K = 1; K <= 5; ++K) {
    for (int t = 0; t <= K; ++t) {
      const std::size_t F = oracle::pascal(K, t);
      const Database db = make_database(4, F, 8);
      const Placement p = batch_placement(4, K, t, F);
      for (const auto& files : oracle::all_demands(4, K)) {
        const int e = oracle::distinct(files);
        ASSERT_EQ(encode_delivery(db, p, Demand{files}).size(),
                  oracle::pascal(K, t + 1) - oracle::pascal(K - e, t + 1));
      }
    }
  }
}

}  // namespace
}  // namespace cachekit
