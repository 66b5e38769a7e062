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

#include <benchmark/benchmark.h>

#include "cachekit/centralized.hpp"
#include "cachekit/decentralized.hpp"
#include "cachekit/rate_analysis.hpp"

namespace {

using namespace cachekit;

// Centralized encode at N = 3, t = 2, 64-bit subfiles, growing K.
void BM_EncodeCentralized(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const std::size_t F = 64 * binomial(K, 2);
  const Database db = make_database(3, F, 1);
  const Placement p = batch_placement(3, K, 2, F);
  const Demand d = random_demand(3, K, 2);
  for (auto _ : state) benchmark::DoNotOptimize(encode_delivery(db, p, d));
}
BENCHMARK(BM_EncodeCentralized)->DenseRange(4, 12, 2);

// Decoding for a non-leader, which has to rebuild omitted messages.
void BM_DecodeNonLeader(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const std::size_t F = 64 * binomial(K, 2);
  const Database db = make_database(3, F, 1);
  const Placement p = batch_placement(3, K, 2, F);
  Demand d;
  for (int k = 0; k < K; ++k) d.files.push_back(1 + k % 3);
  const LeaderSet leaders = select_leaders(d);
  const auto messages = encode_delivery(db, p, d, leaders);
  const UserCache cache(db, p, K);
  for (auto _ : state) benchmark::DoNotOptimize(decode_user(cache, p, messages, d, leaders));
}
BENCHMARK(BM_DecodeNonLeader)->DenseRange(4, 12, 2);

void BM_EncodeDecentralized(benchmark::State& state) {
  const std::size_t F = static_cast<std::size_t>(state.range(0));
  const Database db = make_database(3, F, 1);
  const Placement p = random_placement(3, 4, Rational(1), F, 2);
  const LevelPartition part = level_partition(p);
  const Demand d{{1, 2, 3, 1}};
  for (auto _ : state) benchmark::DoNotOptimize(encode_delivery_decentralized(db, part, d));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * F * 3 / 8));
}
BENCHMARK(BM_EncodeDecentralized)->Arg(20000)->Arg(200000);

void BM_AvgRateOptimal(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(avg_rate_optimal(n, n, Rational(1)));
}
BENCHMARK(BM_AvgRateOptimal)->Arg(10)->Arg(30)->Arg(40);

void BM_RateCurve(benchmark::State& state) {
  const auto grid = parse_grid("0:30:0.5");
  for (auto _ : state) benchmark::DoNotOptimize(rate_curve("man-dec-avg", 30, 30, grid));
}
BENCHMARK(BM_RateCurve);

}  // namespace

BENCHMARK_MAIN();
