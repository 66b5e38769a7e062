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
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cachekit/combinatorics.hpp"
#include "cachekit/model.hpp"
#include "cachekit/rational.hpp"

namespace cachekit {

/// (C(K, t+1) - C(K - n_e, t+1)) / C(K, t): per-demand rate of leader-based
/// delivery over a batch placement with parameter t.
Rational leader_delivery_rate(int K, int t, int n_e);

/// Optimal average rate at integer t = 0..K (before memory sharing).
std::vector<EnvelopePoint<Rational>> optimal_avg_points(int N, int K);
std::vector<EnvelopePoint<Rational>> optimal_peak_points(int N, int K);

/// Centralized optimum for uniform demands; M in [0, N]. At non-integer
/// t = KM/N the value is the lower convex envelope of the integer points.
Rational avg_rate_optimal(int N, int K, const Rational& M);
Rational peak_rate_optimal(int N, int K, const Rational& M);

/// How the prior-art centralized curve is convexified.
enum class BaselineEnvelope {
  kEnvelopeOfMin,   // envelope of min{(K-t)/(t+1), E[N_e](1-t/K)} at integer t
  kMinOfEnvelopes,  // min of the two terms, each convexified separately
};

Rational man_centralized_avg(int N, int K, const Rational& M,
                             BaselineEnvelope mode = BaselineEnvelope::kEnvelopeOfMin);

/// Decentralized optimum E[(N-M)/M * (1 - ((N-M)/N)^N_e)]; M = 0 gives E[N_e].
Rational dec_avg_rate(int N, const Rational& M, int K);
/// (N-M)/M * (1 - ((N-M)/N)^min(N,K)); M = 0 gives min(N,K).
Rational dec_peak_rate(int N, const Rational& M, int K);

/// Prior-art decentralized rate (N-M)/N * min{(N/M)(1 - (1-M/N)^K), E[N_e]},
/// evaluated pointwise; M = 0 takes the limit E[N_e].
Rational man_decentralized_avg(int N, const Rational& M, int K);

/// Lower convex envelope of man_decentralized_avg over M in [0, N], i.e. the
/// rate reachable by memory sharing between its operating points. Computed
/// as the lower hull of `samples` + 1 uniformly spaced memory values, so
/// between samples it may sit above the exact envelope by the chord error.
double man_decentralized_avg_shared(int N, const Rational& M, int K, int samples = 2048);

/// a_n = number of database bits cached by exactly n users, n = 0..K.
struct CacheProfile {
  std::vector<std::uint64_t> a;
};

CacheProfile cache_profile(const Placement& placement);

/// Lower bound on the average rate within the type of `stats` for any
/// delivery over a placement with profile `profile`:
///   sum_n a_n / (N F) * c_n - (1/F + N_e^2 eps).
/// N is stats.s.size(); throws ContractError if sum a_n != N F.
Rational converse_bound(const CacheProfile& profile, const DemandStats& stats, int K, std::size_t F,
                        const Rational& eps = Rational(0));

struct RatePoint {
  Rational M;
  Rational R;
};

struct RateCurve {
  std::string scheme;
  int N = 0;
  int K = 0;
  std::vector<RatePoint> points;
};

/// Labels accepted by rate_curve, in canonical column order.
std::span<const std::string_view> known_schemes();

/// Throws DomainError for an unknown label or a grid point outside [0, N].
RateCurve rate_curve(std::string_view scheme, int N, int K, std::span<const Rational> grid);

/// "start:stop:step", inclusive of stop when step divides the range.
std::vector<Rational> parse_grid(std::string_view spec);

/// Header "M,R,scheme,N,K"; rows ordered by grid point, then by curve order
/// within a grid point. Numbers rendered with 6 decimals. Curves must share
/// one grid.
void write_rate_csv(std::ostream& out, std::span<const RateCurve> curves);

}  // namespace cachekit
