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

#include "cachekit/rate_analysis.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <ostream>

#include "cachekit/errors.hpp"

namespace cachekit {

namespace {

void check_params(int N, int K, const Rational& M) {
  if (N < 1 || K < 1 || K > kMaxUsers) {
    throw DomainError("need N >= 1 and 1 <= K <= 64");
  }
  if (M < 0 || M > N) {
    throw DomainError("cache size M = " + to_string(M) + " outside [0, " + std::to_string(N) + "]");
  }
}

Rational binom(int n, int k) {
  if (n < 0 || k < 0) return 0;
  return Rational(binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k)));
}

Rational power(const Rational& base, int exponent) {
  Rational out = 1;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

Rational cache_parameter(int N, int K, const Rational& M) { return M * K / N; }

Rational envelope_at(const std::vector<EnvelopePoint<Rational>>& points, int N, int K, const Rational& M) {
  return lower_convex_envelope<Rational>(points, cache_parameter(N, K, M));
}

std::vector<EnvelopePoint<Rational>> baseline_min_points(int N, int K) {
  const Rational e = expected_ne(ne_distribution(N, K));
  std::vector<EnvelopePoint<Rational>> out;
  for (int t = 0; t <= K; ++t) {
    const Rational coded(K - t, t + 1);
    const Rational uncoded = e * (1 - Rational(t, K));
    out.push_back({t, std::min(coded, uncoded)});
  }
  return out;
}

double man_dec_pointwise(double N, double M, double K, double expected) {
  if (M <= 0) return expected;
  const double coded = (N / M) * (1 - std::pow(1 - M / N, K));
  return (N - M) / N * std::min(coded, expected);
}

struct Point2 {
  double x;
  double y;
};

double hull_value(std::vector<Point2> pts, double x) {
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) { return a.x < b.x; });
  std::vector<Point2> hull;
  for (const auto& p : pts) {
    if (!hull.empty() && p.x == hull.back().x) {
      hull.back().y = std::min(hull.back().y, p.y);
      continue;
    }
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      if ((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) > 0) break;
      hull.pop_back();
    }
    hull.push_back(p);
  }
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    if (x <= hull[i + 1].x) {
      const auto& a = hull[i];
      const auto& b = hull[i + 1];
      return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
    }
  }
  return hull.back().y;
}

constexpr std::array<std::string_view, 8> kSchemes = {
    "optimal-avg", "optimal-peak", "man-avg", "man-avg-split",
    "dec-avg",     "dec-peak",     "man-dec-avg", "man-dec-avg-pointwise",
};

}  // namespace

Rational leader_delivery_rate(int K, int t, int n_e) {
  if (t < 0 || t > K || n_e < 0 || n_e > K) {
    throw DomainError("need 0 <= t <= K and 0 <= n_e <= K");
  }
  return (binom(K, t + 1) - binom(K - n_e, t + 1)) / binom(K, t);
}

std::vector<EnvelopePoint<Rational>> optimal_avg_points(int N, int K) {
  check_params(N, K, 0);
  const auto dist = ne_distribution(N, K);
  std::vector<EnvelopePoint<Rational>> out;
  for (int t = 0; t <= K; ++t) {
    Rational value = 0;
    for (const auto& [e, p] : dist) value += p * leader_delivery_rate(K, t, e);
    out.push_back({t, value});
  }
  return out;
}

std::vector<EnvelopePoint<Rational>> optimal_peak_points(int N, int K) {
  check_params(N, K, 0);
  std::vector<EnvelopePoint<Rational>> out;
  for (int t = 0; t <= K; ++t) out.push_back({t, leader_delivery_rate(K, t, std::min(N, K))});
  return out;
}

Rational avg_rate_optimal(int N, int K, const Rational& M) {
  check_params(N, K, M);
  return envelope_at(optimal_avg_points(N, K), N, K, M);
}

Rational peak_rate_optimal(int N, int K, const Rational& M) {
  check_params(N, K, M);
  return envelope_at(optimal_peak_points(N, K), N, K, M);
}

Rational man_centralized_avg(int N, int K, const Rational& M, BaselineEnvelope mode) {
  check_params(N, K, M);
  if (mode == BaselineEnvelope::kEnvelopeOfMin) {
    return envelope_at(baseline_min_points(N, K), N, K, M);
  }
  std::vector<EnvelopePoint<Rational>> coded;
  for (int t = 0; t <= K; ++t) coded.push_back({t, Rational(K - t, t + 1)});
  const Rational t = cache_parameter(N, K, M);
  const Rational uncoded = expected_ne(ne_distribution(N, K)) * (1 - t / K);
  return std::min(lower_convex_envelope<Rational>(coded, t), uncoded);
}

Rational dec_avg_rate(int N, const Rational& M, int K) {
  check_params(N, K, M);
  const auto dist = ne_distribution(N, K);
  if (M == 0) return expected_ne(dist);
  const Rational miss = (N - M) / N;
  Rational out = 0;
  for (const auto& [e, p] : dist) out += p * (N - M) / M * (1 - power(miss, e));
  return out;
}

Rational dec_peak_rate(int N, const Rational& M, int K) {
  check_params(N, K, M);
  if (M == 0) return Rational(std::min(N, K));
  return (N - M) / M * (1 - power((N - M) / N, std::min(N, K)));
}

Rational man_decentralized_avg(int N, const Rational& M, int K) {
  check_params(N, K, M);
  const Rational expected = expected_ne(ne_distribution(N, K));
  if (M == 0) return expected;
  const Rational coded = Rational(N) / M * (1 - power(1 - M / N, K));
  return (N - M) / N * std::min(coded, expected);
}

double man_decentralized_avg_shared(int N, const Rational& M, int K, int samples) {
  check_params(N, K, M);
  if (samples < 1) {
    throw DomainError("need at least one sample interval");
  }
  const double expected = to_double(expected_ne(ne_distribution(N, K)));
  const double n = N;
  const double k = K;
  const double x = to_double(M);
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(samples) + 1);
  for (int i = 0; i <= samples; ++i) {
    const double m = n * i / samples;
    pts.push_back({m, man_dec_pointwise(n, m, k, expected)});
  }
  // One fixed sample set for every query keeps the result convex in M.
  return hull_value(std::move(pts), x);
}

CacheProfile cache_profile(const Placement& placement) {
  CacheProfile out;
  out.a.assign(static_cast<std::size_t>(placement.users()) + 1, 0);
  for (int i = 1; i <= placement.files(); ++i) {
    for (std::size_t b = 0; b < placement.file_bits(); ++b) {
      ++out.a[static_cast<std::size_t>(std::popcount(placement.holders(i, b)))];
    }
  }
  return out;
}

Rational converse_bound(const CacheProfile& profile, const DemandStats& stats, int K, std::size_t F,
                        const Rational& eps) {
  if (profile.a.size() != static_cast<std::size_t>(K) + 1) {
    throw ContractError("profile must have K + 1 entries");
  }
  if (F == 0) {
    throw DomainError("F must be positive");
  }
  const std::size_t N = stats.s.size();
  std::uint64_t total = 0;
  for (auto a : profile.a) total += a;
  if (total != N * F) {
    throw ContractError("profile counts " + std::to_string(total) + " bits, expected N*F = " +
                        std::to_string(N * F));
  }
  Rational bound = 0;
  for (int n = 0; n <= K; ++n) {
    const auto a = profile.a[static_cast<std::size_t>(n)];
    if (a == 0) continue;
    bound += Rational(a, N * F) * leader_delivery_rate(K, n, stats.n_e);
  }
  return bound - (Rational(1, F) + Rational(stats.n_e) * stats.n_e * eps);
}

std::span<const std::string_view> known_schemes() { return kSchemes; }

RateCurve rate_curve(std::string_view scheme, int N, int K, std::span<const Rational> grid) {
  if (std::find(kSchemes.begin(), kSchemes.end(), scheme) == kSchemes.end()) {
    throw DomainError("unknown scheme '" + std::string(scheme) + "'");
  }
  for (const auto& M : grid) check_params(N, K, M);
  RateCurve curve{std::string(scheme), N, K, {}};
  curve.points.reserve(grid.size());

  std::vector<EnvelopePoint<Rational>> points;
  if (scheme == "optimal-avg") points = optimal_avg_points(N, K);
  if (scheme == "optimal-peak") points = optimal_peak_points(N, K);
  if (scheme == "man-avg") points = baseline_min_points(N, K);

  for (const auto& M : grid) {
    Rational R;
    if (!points.empty()) {
      R = envelope_at(points, N, K, M);
    } else if (scheme == "man-avg-split") {
      R = man_centralized_avg(N, K, M, BaselineEnvelope::kMinOfEnvelopes);
    } else if (scheme == "dec-avg") {
      R = dec_avg_rate(N, M, K);
    } else if (scheme == "dec-peak") {
      R = dec_peak_rate(N, M, K);
    } else if (scheme == "man-dec-avg") {
      R = Rational(man_decentralized_avg_shared(N, M, K));
    } else {
      R = man_decentralized_avg(N, M, K);
    }
    curve.points.push_back({M, std::move(R)});
  }
  return curve;
}

std::vector<Rational> parse_grid(std::string_view spec) {
  const auto first = spec.find(':');
  const auto second = first == std::string_view::npos ? first : spec.find(':', first + 1);
  if (second == std::string_view::npos || spec.find(':', second + 1) != std::string_view::npos) {
    throw DomainError("grid must be start:stop:step, got '" + std::string(spec) + "'");
  }
  const Rational start = parse_rational(spec.substr(0, first));
  const Rational stop = parse_rational(spec.substr(first + 1, second - first - 1));
  const Rational step = parse_rational(spec.substr(second + 1));
  if (step <= 0 || stop < start) {
    throw DomainError("grid needs step > 0 and start <= stop");
  }
  std::vector<Rational> out;
  for (Rational m = start; m <= stop; m += step) out.push_back(m);
  return out;
}

void write_rate_csv(std::ostream& out, std::span<const RateCurve> curves) {
  out << "M,R,scheme,N,K\n";
  if (curves.empty()) return;
  const std::size_t rows = curves.front().points.size();
  for (const auto& c : curves) {
    if (c.points.size() != rows) {
      throw ContractError("curves written to one CSV must share a grid");
    }
  }
  for (std::size_t i = 0; i < rows; ++i) {
    for (const auto& c : curves) {
      out << format_fixed(c.points[i].M, 6) << ',' << format_fixed(c.points[i].R, 6) << ',' << c.scheme << ','
          << c.N << ',' << c.K << '\n';
    }
  }
}

}  // namespace cachekit
