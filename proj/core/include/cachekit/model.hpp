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
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "cachekit/bitvector.hpp"
#include "cachekit/combinatorics.hpp"
#include "cachekit/rational.hpp"

namespace cachekit {

/// N files of F bits each. Files are 1-based.
struct Database {
  int N = 0;
  std::size_t F = 0;
  std::vector<BitVector> rows;

  const BitVector& file(int i) const { return rows.at(static_cast<std::size_t>(i - 1)); }
};

/// Fills the database from std::mt19937_64 seeded with `seed`: file 1 takes the
/// first ceil(F/64) outputs as its words (bit j = bit j%64 of word j/64), then
/// file 2, and so on. Tail bits beyond F are discarded.
Database make_database(int N, std::size_t F, std::uint64_t seed);

/// Symmetric batch layout: subfile of rank r (among t-subsets of users) is
/// bits [r * subfile_bits, (r + 1) * subfile_bits) of every file.
struct BatchView {
  int t = 0;
  std::size_t subfile_bits = 0;

  std::size_t begin(std::uint64_t rank) const { return static_cast<std::size_t>(rank) * subfile_bits; }
};

/// Uncoded prefetching: which bits of which file each user holds.
class Placement {
 public:
  Placement(int K, int N, std::size_t F, Rational M);

  int users() const noexcept { return K_; }
  int files() const noexcept { return N_; }
  std::size_t file_bits() const noexcept { return F_; }
  const Rational& memory() const noexcept { return M_; }

  bool cached(int user, int file, std::size_t bit) const { return mask(user, file).get(bit); }
  void cache(int user, int file, std::size_t bit) { masks_[index(user)][index_file(file)].set(bit, true); }
  void cache_range(int user, int file, std::size_t begin, std::size_t length);

  /// Cached-bit indicator for one (user, file) pair, length F.
  const BitVector& mask(int user, int file) const { return masks_[index(user)][index_file(file)]; }

  std::size_t cached_bits(int user) const;

  /// Users holding bit `bit` of `file`, as a mask.
  UserMask holders(int file, std::size_t bit) const;

  const std::optional<BatchView>& batch_view() const noexcept { return batch_; }
  void set_batch_view(BatchView view) { batch_ = view; }

  /// Throws ContractError when some user exceeds M * F cached bits.
  void validate() const;

  friend bool operator==(const Placement& a, const Placement& b) {
    return a.K_ == b.K_ && a.N_ == b.N_ && a.F_ == b.F_ && a.M_ == b.M_ && a.masks_ == b.masks_;
  }

 private:
  std::size_t index(int user) const;
  std::size_t index_file(int file) const;

  int K_;
  int N_;
  std::size_t F_;
  Rational M_;
  std::vector<std::vector<BitVector>> masks_;  // [user][file]
  std::optional<BatchView> batch_;
};

/// Request vector; files[k - 1] is the 1-based file requested by user k.
struct Demand {
  std::vector<int> files;

  int users() const noexcept { return static_cast<int>(files.size()); }
  int file_of(int user) const { return files.at(static_cast<std::size_t>(user - 1)); }

  /// Throws DomainError if any entry lies outside [1, N].
  void validate(int N) const;

  friend bool operator==(const Demand&, const Demand&) = default;
};

/// Unbiased draw from [0, bound) by rejection on raw generator output, so the
/// sequence is identical on every standard library.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// K independent uniform file indices drawn with uniform_below.
Demand random_demand(int N, int K, std::uint64_t seed);

/// Calls `fn` for each of the N^K demands, in lexicographic order.
void for_each_demand(int N, int K, const std::function<void(const Demand&)>& fn);

struct DemandStats {
  std::vector<int> s;  // request counts sorted descending, length N
  int n_e = 0;         // number of distinct requested files

  friend bool operator==(const DemandStats&, const DemandStats&) = default;
  friend auto operator<=>(const DemandStats& a, const DemandStats& b) { return a.s <=> b.s; }
};

DemandStats demand_stats(const Demand& d, int N);

/// Every statistics vector for N files and K users (partitions of K into at
/// most N parts), in descending lexicographic order.
std::vector<DemandStats> enumerate_types(int N, int K);

/// Number of demands with statistics `stats`.
BigInt type_size(const DemandStats& stats);

/// A demand whose statistics equal `stats`: the s_1 lowest users request file 1,
/// the next s_2 request file 2, and so on.
Demand representative_demand(const DemandStats& stats);

struct NeProbability {
  int e = 0;
  Rational prob;
};

using NeDistribution = std::vector<NeProbability>;

/// Exact law of the number of distinct requests under uniform demands.
NeDistribution ne_distribution(int N, int K);
Rational expected_ne(const NeDistribution& dist);

/// What user k actually stores: database values at its cached positions.
/// Reads of positions the user does not hold throw ContractError.
class UserCache {
 public:
  UserCache(const Database& db, const Placement& placement, int user);

  int user() const noexcept { return user_; }
  bool holds(int file, std::size_t begin, std::size_t length) const;
  BitVector read(int file, std::size_t begin, std::size_t length) const;
  bool read_bit(int file, std::size_t bit) const;
  /// acc ^= read(file, begin, acc.size()), without the intermediate copy.
  void xor_into(BitVector& acc, int file, std::size_t begin) const;

 private:
  int user_;
  std::vector<BitVector> mask_;
  std::vector<BitVector> values_;
};

/// Placement text format:
///   K N F M
///   1 f:b f:b ...
///   ...
///   K f:b ...
/// One line per user in order; files 1-based, bits 0-based, pairs ascending.
/// M is an integer or p/q fraction.
void write_placement(std::ostream& out, const Placement& placement);
Placement read_placement(std::istream& in);

}  // namespace cachekit
