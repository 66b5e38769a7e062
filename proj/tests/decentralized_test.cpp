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

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "cachekit/centralized.hpp"
#include "cachekit/errors.hpp"
#include "oracles.hpp"

namespace cachekit {
namespace {

Rational integrand(int N, const Rational& M, int n_e) {
  Rational miss = 1;
  for (int i = 0; i < n_e; ++i) miss *= (N - M) / N;
  return (N - M) / M * (1 - miss);
}

TEST(RandomPlacement, Extremes) {
  const Placement full = random_placement(2, 3, Rational(2), 50, 1);
  for (int k = 1; k <= 3; ++k) EXPECT_EQ(full.cached_bits(k), 100u);
  const Placement none = random_placement(2, 3, Rational(0), 50, 1);
  for (int k = 1; k <= 3; ++k) EXPECT_EQ(none.cached_bits(k), 0u);
}

TEST(RandomPlacement, QuotaAndFrequency) {
  const Placement p = random_placement(2, 3, Rational(1), 10000, 6);
  for (int k = 1; k <= 3; ++k) {
    for (int i = 1; i <= 2; ++i) EXPECT_EQ(p.mask(k, i).count(), 5000u);
  }
  // Each bit should be cached by each user with probability 1/2.
  std::size_t held = 0;
  for (std::size_t b = 0; b < 1000; ++b) held += p.cached(1, 1, b) ? 1 : 0;
  EXPECT_NEAR(static_cast<double>(held) / 1000.0, 0.5, 0.06);
  EXPECT_EQ(p, random_placement(2, 3, Rational(1), 10000, 6));
}

TEST(RandomPlacement, BudgetWithFractionalShare) {
  for (int M4 = 0; M4 <= 12; ++M4) {
    const Rational M(M4, 4);
    const Placement p = random_placement(3, 4, M, 101, 3);
    const auto quota = static_cast<std::size_t>(std::floor(to_double(M) * 101 / 3 + 1e-9));
    for (int k = 1; k <= 4; ++k) {
      EXPECT_EQ(p.cached_bits(k), 3 * quota);
      EXPECT_LE(Rational(p.cached_bits(k)), M * 101);
    }
    EXPECT_NO_THROW(p.validate());
  }
}

TEST(LevelPartition, ExactGroupsByHolders) {
  const Placement p = random_placement(3, 4, Rational(3, 2), 97, 21);
  const LevelPartition part = level_partition(p);
  std::size_t total = 0;
  for (int j = 0; j <= 4; ++j) total += part.level_size(j);
  EXPECT_EQ(total, 3u * 97u);
  for (int i = 1; i <= 3; ++i) {
    std::vector<int> seen(97, 0);
    for (UserMask h = 0; h < 16; ++h) {
      for (std::uint32_t b : part.group(h, i)) {
        ++seen[b];
        EXPECT_EQ(p.holders(i, b), h);
      }
    }
    for (int c : seen) EXPECT_EQ(c, 1);
  }
}

TEST(LevelPartition, BatchAndEmpty) {
  const Placement batch = batch_placement(2, 4, 2, 12);
  const LevelPartition part = level_partition(batch);
  for (int j = 0; j <= 4; ++j) EXPECT_EQ(part.level_size(j), j == 2 ? 24u : 0u);
  for (const auto& S : enumerate_subsets(4, 2)) {
    const auto& g = part.group(S.mask(), 1);
    ASSERT_EQ(g.size(), 2u);
    EXPECT_EQ(g[0], 2 * S.rank);
  }
  const LevelPartition empty = level_partition(Placement(3, 2, 40, Rational(0)));
  EXPECT_EQ(empty.level_size(0), 80u);
}

TEST(LevelPartition, LevelSizesConcentrate) {
  const LevelPartition part = level_partition(random_placement(2, 3, Rational(1), 300, 13));
  const double n = 600;
  for (int j = 0; j <= 3; ++j) {
    const double p = static_cast<double>(oracle::pascal(3, j)) / 8.0;
    EXPECT_NEAR(static_cast<double>(part.level_size(j)), n * p, 3 * std::sqrt(n * p * (1 - p))) << "j=" << j;
  }
}

TEST(LevelPartition, RejectsLargeK) {
  EXPECT_THROW(LevelPartition(kMaxDecentralizedUsers + 1, 2, 4), DomainError);
}

TEST(Reduction, BatchPlacementMatchesCentralized) {
  for (int K = 1; K <= 5; ++K) {
    for (int t = 0; t <= K; ++t) {
      const std::size_t F = 2 * oracle::pascal(K, t);
      const Database db = make_database(3, F, 40 + K);
      const Placement p = batch_placement(3, K, t, F);
      const LevelPartition part = level_partition(p);
      for_each_demand(3, K, [&](const Demand& d) {
        const auto central = encode_delivery(db, p, d);
        const auto dec = encode_delivery_decentralized(db, part, d);
        ASSERT_EQ(dec, central);
        for (int k = 1; k <= K; ++k) {
          const UserCache cache(db, p, k);
          ASSERT_EQ(decode_user_decentralized(cache, part, dec, d), decode_user(cache, p, central, d, select_leaders(d)));
        }
      });
    }
  }
}

TEST(Encode, FullCacheSendsNothing) {
  const Database db = make_database(2, 30, 1);
  const Placement p = random_placement(2, 3, Rational(2), 30, 1);
  const LevelPartition part = level_partition(p);
  const Demand d{{1, 2, 1}};
  const auto messages = encode_delivery_decentralized(db, part, d);
  EXPECT_TRUE(messages.empty());
  EXPECT_EQ(empirical_rate(messages, 30), 0);
  for (int k = 1; k <= 3; ++k) EXPECT_EQ(decode_user_decentralized(UserCache(db, p, k), part, messages, d), db.file(d.file_of(k)));
}

TEST(Encode, EmptyCacheSendsDistinctFiles) {
  const Database db = make_database(4, 64, 2);
  const Placement p = random_placement(4, 5, Rational(0), 64, 2);
  const LevelPartition part = level_partition(p);
  const Demand d{{2, 4, 2, 2, 1}};
  const auto messages = encode_delivery_decentralized(db, part, d);
  EXPECT_EQ(empirical_rate(messages, 64), 3);
}

TEST(Encode, PayloadLengthIsLongestChunk) {
  const Database db = make_database(3, 157, 9);
  const Placement p = random_placement(3, 4, Rational(1), 157, 9);
  const LevelPartition part = level_partition(p);
  const Demand d{{1, 2, 1, 3}};
  const auto messages = encode_delivery_decentralized(db, part, d);
  std::size_t padding = 0;
  for (const auto& m : messages) {
    std::size_t longest = 0;
    std::size_t sum = 0;
    BitVector acc;
    for (int x : m.subset.members) {
      const auto& g = part.group(m.subset.mask() & ~(UserMask{1} << (x - 1)), d.file_of(x));
      longest = std::max(longest, g.size());
      sum += g.size();
    }
    acc = BitVector(longest);
    for (int x : m.subset.members) {
      const auto& g = part.group(m.subset.mask() & ~(UserMask{1} << (x - 1)), d.file_of(x));
      for (std::size_t i = 0; i < g.size(); ++i) acc.set(i, acc.get(i) != db.file(d.file_of(x)).get(g[i]));
    }
    EXPECT_EQ(m.payload, acc) << m.subset.to_string();
    padding += longest * m.subset.members.size() - sum;
  }
  EXPECT_EQ(padding_bits(part, d, messages), padding);
}

TEST(Decode, ExhaustiveSmallInstance) {
  const Database db = make_database(2, 600, 77);
  const Placement p = random_placement(2, 3, Rational(1), 600, 78);
  const LevelPartition part = level_partition(p);
  for (const auto& files : oracle::all_demands(2, 3)) {
    const Demand d{files};
    const auto messages = encode_delivery_decentralized(db, part, d);
    for (int k = 1; k <= 3; ++k) {
      ASSERT_EQ(decode_user_decentralized(UserCache(db, p, k), part, messages, d), db.file(files[k - 1]));
    }
  }
}

TEST(Decode, AllDemandsSeveralSeeds) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (int N = 1; N <= 3; ++N) {
      for (int K = 1; K <= 4; ++K) {
        const Rational M(static_cast<long long>(seed % 4) * N, 4);
        const Database db = make_database(N, 500, seed);
        const Placement p = random_placement(N, K, M, 500, seed * 7);
        const LevelPartition part = level_partition(p);
        for (const auto& files : oracle::all_demands(N, K)) {
          const Demand d{files};
          const auto messages = encode_delivery_decentralized(db, part, d);
          for (int k = 1; k <= K; ++k) {
            ASSERT_EQ(decode_user_decentralized(UserCache(db, p, k), part, messages, d), db.file(files[k - 1]))
                << "seed " << seed << " N=" << N << " K=" << K << " user " << k;
          }
        }
      }
    }
  }
}

TEST(Decode, MissingLeaderMessageIsReported) {
  const Database db = make_database(2, 200, 4);
  const Placement p = random_placement(2, 3, Rational(1), 200, 4);
  const LevelPartition part = level_partition(p);
  const Demand d{{1, 2, 1}};
  auto messages = encode_delivery_decentralized(db, part, d);
  ASSERT_FALSE(messages.empty());
  messages.erase(messages.begin());
  bool thrown = false;
  for (int k = 1; k <= 3; ++k) {
    try {
      decode_user_decentralized(UserCache(db, p, k), part, messages, d);
    } catch (const DecodeError&) {
      thrown = true;
    }
  }
  EXPECT_TRUE(thrown);
}

TEST(Rate, ConcentratesAroundIntegrand) {
  const std::size_t F = 100000;
  const Database db = make_database(3, F, 5);
  const Placement p = random_placement(3, 4, Rational(1), F, 5);
  const LevelPartition part = level_partition(p);
  const Demand d{{1, 2, 2, 3}};
  const double rate = to_double(empirical_rate(encode_delivery_decentralized(db, part, d), F));
  const double want = to_double(integrand(3, Rational(1), 3));
  EXPECT_NEAR(rate / want, 1.0, 0.05);
}

TEST(Rate, TwoUsersTwoFilesAverage) {
  const std::size_t F = 40000;
  const Database db = make_database(2, F, 8);
  const Placement p = random_placement(2, 2, Rational(1), F, 8);
  const LevelPartition part = level_partition(p);
  Rational total = 0;
  for (const auto& files : oracle::all_demands(2, 2)) {
    total += empirical_rate(encode_delivery_decentralized(db, part, Demand{files}), F);
  }
  EXPECT_NEAR(to_double(total / 4), 0.625, 0.01);
}

TEST(Rate, EmptyCacheEqualsDistinctCount) {
  const Database db = make_database(3, 10, 1);
  const LevelPartition part = level_partition(random_placement(3, 4, Rational(0), 10, 1));
  for (const auto& files : oracle::all_demands(3, 4)) {
    EXPECT_EQ(empirical_rate(encode_delivery_decentralized(db, part, Demand{files}), 10), oracle::distinct(files));
  }
}

}  // namespace
}  // namespace cachekit
