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

#include "cachekit/model.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "cachekit/errors.hpp"

namespace cachekit {

Database make_database(int N, std::size_t F, std::uint64_t seed) {
  if (N < 1 || F < 1) {
    throw DomainError("database needs N >= 1 and F >= 1");
  }
  std::mt19937_64 rng(seed);
  Database db{N, F, {}};
  db.rows.reserve(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    BitVector row(F);
    for (std::size_t w = 0; w * 64 < F; ++w) {
      const std::uint64_t word = rng();
      const std::size_t limit = std::min<std::size_t>(64, F - w * 64);
      for (std::size_t b = 0; b < limit; ++b) row.set(w * 64 + b, (word >> b) & 1U);
    }
    db.rows.push_back(std::move(row));
  }
  return db;
}

Placement::Placement(int K, int N, std::size_t F, Rational M) : K_(K), N_(N), F_(F), M_(std::move(M)) {
  if (K < 1 || K > kMaxUsers || N < 1) {
    throw DomainError("placement needs 1 <= K <= 64 and N >= 1");
  }
  if (M_ < 0 || M_ > N) {
    throw DomainError("cache size M must lie in [0, N]");
  }
  masks_.assign(static_cast<std::size_t>(K), std::vector<BitVector>(static_cast<std::size_t>(N), BitVector(F)));
}

void Placement::cache_range(int user, int file, std::size_t begin, std::size_t length) {
  auto& m = masks_[index(user)][index_file(file)];
  for (std::size_t b = begin; b < begin + length; ++b) m.set(b, true);
}

std::size_t Placement::cached_bits(int user) const {
  std::size_t total = 0;
  for (const auto& m : masks_[index(user)]) total += m.count();
  return total;
}

UserMask Placement::holders(int file, std::size_t bit) const {
  const std::size_t f = index_file(file);
  UserMask out = 0;
  for (int k = 0; k < K_; ++k) {
    if (masks_[static_cast<std::size_t>(k)][f].get(bit)) out |= UserMask{1} << k;
  }
  return out;
}

void Placement::validate() const {
  const Rational budget = M_ * Rational(F_);
  for (int k = 1; k <= K_; ++k) {
    if (Rational(cached_bits(k)) > budget) {
      throw ContractError("user " + std::to_string(k) + " caches " + std::to_string(cached_bits(k)) +
                          " bits, above the M*F budget of " + to_string(budget));
    }
  }
}

std::size_t Placement::index(int user) const {
  if (user < 1 || user > K_) {
    throw DomainError("user index " + std::to_string(user) + " outside [1, K]");
  }
  return static_cast<std::size_t>(user - 1);
}

std::size_t Placement::index_file(int file) const {
  if (file < 1 || file > N_) {
    throw DomainError("file index " + std::to_string(file) + " outside [1, N]");
  }
  return static_cast<std::size_t>(file - 1);
}

void Demand::validate(int N) const {
  if (files.empty()) {
    throw DomainError("demand must name at least one user");
  }
  if (files.size() > static_cast<std::size_t>(kMaxUsers)) {
    throw DomainError("demand has more than 64 users");
  }
  for (int f : files) {
    if (f < 1 || f > N) {
      throw DomainError("requested file " + std::to_string(f) + " outside [1, " + std::to_string(N) + "]");
    }
  }
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) {
    throw DomainError("uniform_below needs a positive bound");
  }
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

Demand random_demand(int N, int K, std::uint64_t seed) {
  if (N < 1 || K < 1 || K > kMaxUsers) {
    throw DomainError("random_demand needs N >= 1 and 1 <= K <= 64");
  }
  std::mt19937_64 rng(seed);
  Demand d;
  for (int k = 0; k < K; ++k) d.files.push_back(1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(N))));
  return d;
}

void for_each_demand(int N, int K, const std::function<void(const Demand&)>& fn) {
  if (N < 1 || K < 1) {
    throw DomainError("demand enumeration needs N, K >= 1");
  }
  Demand d{std::vector<int>(static_cast<std::size_t>(K), 1)};
  while (true) {
    fn(d);
    int k = K - 1;
    while (k >= 0 && d.files[static_cast<std::size_t>(k)] == N) {
      d.files[static_cast<std::size_t>(k)] = 1;
      --k;
    }
    if (k < 0) return;
    ++d.files[static_cast<std::size_t>(k)];
  }
}

DemandStats demand_stats(const Demand& d, int N) {
  d.validate(N);
  DemandStats out;
  out.s.assign(static_cast<std::size_t>(N), 0);
  for (int f : d.files) ++out.s[static_cast<std::size_t>(f - 1)];
  std::sort(out.s.begin(), out.s.end(), std::greater<>());
  out.n_e = static_cast<int>(std::count_if(out.s.begin(), out.s.end(), [](int c) { return c > 0; }));
  return out;
}

namespace {

void partitions(int remaining, int max_part, std::vector<int>& prefix, int slots,
                std::vector<DemandStats>& out) {
  if (remaining == 0) {
    DemandStats st;
    st.s = prefix;
    st.n_e = static_cast<int>(prefix.size());
    st.s.resize(static_cast<std::size_t>(slots), 0);
    out.push_back(std::move(st));
    return;
  }
  if (static_cast<int>(prefix.size()) == slots) return;
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    prefix.push_back(part);
    partitions(remaining - part, part, prefix, slots, out);
    prefix.pop_back();
  }
}

BigInt factorial(int n) {
  BigInt out = 1;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

}  // namespace

std::vector<DemandStats> enumerate_types(int N, int K) {
  if (N < 1 || K < 1) {
    throw DomainError("enumerate_types needs N, K >= 1");
  }
  std::vector<DemandStats> out;
  std::vector<int> prefix;
  partitions(K, K, prefix, N, out);
  return out;
}

BigInt type_size(const DemandStats& stats) {
  int K = 0;
  BigInt users = 1;
  std::map<int, int> multiplicity;
  for (int c : stats.s) {
    K += c;
    users *= factorial(c);
    ++multiplicity[c];
  }
  BigInt files = 1;
  for (const auto& [count, times] : multiplicity) files *= factorial(times);
  // Ways to split users into labelled groups times ways to assign files to group sizes.
  return factorial(K) / users * (factorial(static_cast<int>(stats.s.size())) / files);
}

Demand representative_demand(const DemandStats& stats) {
  Demand d;
  for (std::size_t i = 0; i < stats.s.size(); ++i) {
    d.files.insert(d.files.end(), static_cast<std::size_t>(stats.s[i]), static_cast<int>(i + 1));
  }
  return d;
}

NeDistribution ne_distribution(int N, int K) {
  if (N < 1 || K < 1) {
    throw DomainError("ne_distribution needs N, K >= 1");
  }
  const BigInt total = boost::multiprecision::pow(BigInt(N), static_cast<unsigned>(K));
  NeDistribution out;
  for (int e = 1; e <= std::min(N, K); ++e) {
    const BigInt ways = binomial_exact(static_cast<std::uint64_t>(N), static_cast<std::uint64_t>(e)) *
                        surjection_count_exact(K, e);
    out.push_back({e, Rational(ways, total)});
  }
  return out;
}

Rational expected_ne(const NeDistribution& dist) {
  Rational out = 0;
  for (const auto& [e, p] : dist) out += p * e;
  return out;
}

UserCache::UserCache(const Database& db, const Placement& placement, int user) : user_(user) {
  if (db.N != placement.files() || db.F != placement.file_bits()) {
    throw ContractError("database and placement disagree on N or F");
  }
  for (int i = 1; i <= db.N; ++i) {
    const BitVector& m = placement.mask(user, i);
    BitVector v = db.file(i);
    v &= m;
    mask_.push_back(m);
    values_.push_back(std::move(v));
  }
}

bool UserCache::holds(int file, std::size_t begin, std::size_t length) const {
  const auto& m = mask_.at(static_cast<std::size_t>(file - 1));
  return m.count(begin, length) == length;
}

BitVector UserCache::read(int file, std::size_t begin, std::size_t length) const {
  if (!holds(file, begin, length)) {
    throw ContractError("user " + std::to_string(user_) + " does not cache bits [" + std::to_string(begin) +
                        ", " + std::to_string(begin + length) + ") of file " + std::to_string(file));
  }
  return values_[static_cast<std::size_t>(file - 1)].slice(begin, length);
}

void UserCache::xor_into(BitVector& acc, int file, std::size_t begin) const {
  if (!holds(file, begin, acc.size())) {
    throw ContractError("user " + std::to_string(user_) + " does not cache bits [" + std::to_string(begin) +
                        ", " + std::to_string(begin + acc.size()) + ") of file " + std::to_string(file));
  }
  acc.xor_slice(values_[static_cast<std::size_t>(file - 1)], begin);
}

bool UserCache::read_bit(int file, std::size_t bit) const {
  const auto f = static_cast<std::size_t>(file - 1);
  if (!mask_.at(f).get(bit)) {
    throw ContractError("user " + std::to_string(user_) + " does not cache bit " + std::to_string(bit) +
                        " of file " + std::to_string(file));
  }
  return values_[f].get(bit);
}

void write_placement(std::ostream& out, const Placement& placement) {
  out << placement.users() << ' ' << placement.files() << ' ' << placement.file_bits() << ' '
      << to_string(placement.memory()) << '\n';
  for (int k = 1; k <= placement.users(); ++k) {
    out << k;
    for (int i = 1; i <= placement.files(); ++i) {
      const BitVector& m = placement.mask(k, i);
      for (std::size_t b = 0; b < placement.file_bits(); ++b) {
        if (m.get(b)) out << ' ' << i << ':' << b;
      }
    }
    out << '\n';
  }
}

namespace {

long long parse_count(const std::string& token, std::size_t line, const char* what) {
  if (token.empty() || !std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw ParseError(line, std::string("expected non-negative integer for ") + what + ", got '" + token + "'");
  }
  try {
    return std::stoll(token);
  } catch (const std::out_of_range&) {
    throw ParseError(line, std::string(what) + " out of range");
  }
}

}  // namespace

Placement read_placement(std::istream& in) {
  std::string text;
  std::size_t line_no = 0;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++line_no;
      if (out.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_line(text)) {
    throw ParseError(line_no + 1, "missing header 'K N F M'");
  }
  std::istringstream header(text);
  std::string ks, ns, fs, ms, extra;
  if (!(header >> ks >> ns >> fs >> ms) || (header >> extra)) {
    throw ParseError(line_no, "header must be exactly 'K N F M'");
  }
  const auto K = parse_count(ks, line_no, "K");
  const auto N = parse_count(ns, line_no, "N");
  const auto F = parse_count(fs, line_no, "F");
  Rational M;
  try {
    M = parse_rational(ms);
  } catch (const DomainError& e) {
    throw ParseError(line_no, e.what());
  }
  if (K < 1 || K > kMaxUsers || N < 1 || F < 1 || M < 0 || M > N) {
    throw ParseError(line_no, "header values out of range");
  }

  Placement placement(static_cast<int>(K), static_cast<int>(N), static_cast<std::size_t>(F), M);
  for (long long k = 1; k <= K; ++k) {
    if (!next_line(text)) {
      throw ParseError(line_no + 1, "missing line for user " + std::to_string(k));
    }
    std::istringstream row(text);
    std::string token;
    row >> token;
    if (parse_count(token, line_no, "user index") != k) {
      throw ParseError(line_no, "expected user index " + std::to_string(k));
    }
    while (row >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) {
        throw ParseError(line_no, "expected file:bit, got '" + token + "'");
      }
      const auto file = parse_count(token.substr(0, colon), line_no, "file index");
      const auto bit = parse_count(token.substr(colon + 1), line_no, "bit index");
      if (file < 1 || file > N || bit >= F) {
        throw ParseError(line_no, "pair '" + token + "' outside the database");
      }
      placement.cache(static_cast<int>(k), static_cast<int>(file), static_cast<std::size_t>(bit));
    }
    if (Rational(placement.cached_bits(static_cast<int>(k))) > M * F) {
      throw ParseError(line_no, "user " + std::to_string(k) + " caches more than M*F = " + to_string(M * F) +
                                    " bits");
    }
  }
  if (next_line(text)) {
    throw ParseError(line_no, "unexpected content after the last user line");
  }
  return placement;
}

}  // namespace cachekit
