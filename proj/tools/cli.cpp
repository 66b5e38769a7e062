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

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cachekit/centralized.hpp"
#include "cachekit/decentralized.hpp"
#include "cachekit/errors.hpp"
#include "cachekit/model.hpp"
#include "cachekit/rate_analysis.hpp"

namespace cachekit::cli {

namespace {

// Invalid combination of arguments detected after CLI11 parsing.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  int n = 0;
  int k = 0;
  std::string m;
  std::optional<int> t;
  std::optional<std::size_t> f;
  std::optional<std::uint64_t> seed;
  std::string grid;
  std::string schemes;
  std::string out;
  std::string dump;
  std::string demand;
  std::string placement;
  std::string save_placement;
  std::string eps = "0";
  bool decentralized = false;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t resolve_seed(const RunConfig& cfg) {
  if (cfg.seed) return *cfg.seed;
  if (const char* env = std::getenv("CACHEKIT_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const auto value = std::stoull(env, &used);
      if (used == std::string(env).size()) return value;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("CACHEKIT_SEED is not an unsigned integer: '") + env + "'");
  }
  return kDefaultSeed;
}

void require_nk(const RunConfig& cfg) {
  if (cfg.n < 1 || cfg.k < 1) {
    throw UsageError("--n and --k must be positive");
  }
}

Rational memory_of(const RunConfig& cfg) {
  if (cfg.m.empty()) {
    if (!cfg.t) throw UsageError("one of --m or --t is required");
    return Rational(cfg.n) * *cfg.t / cfg.k;
  }
  const Rational M = parse_rational(cfg.m);
  if (M < 0 || M > cfg.n) throw UsageError("--m must lie in [0, N]");
  return M;
}

int integer_t(const RunConfig& cfg) {
  if (cfg.t) {
    if (*cfg.t < 0 || *cfg.t > cfg.k) throw UsageError("--t must lie in [0, K]");
    if (!cfg.m.empty() && memory_of(cfg) * cfg.k / cfg.n != *cfg.t) {
      throw UsageError("--m and --t disagree (t = K*M/N)");
    }
    return *cfg.t;
  }
  const Rational t = memory_of(cfg) * cfg.k / cfg.n;
  if (boost::multiprecision::denominator(t) != 1) {
    throw UsageError("centralized simulation needs integer t = K*M/N, got " + to_string(t));
  }
  return boost::multiprecision::numerator(t).convert_to<int>();
}

Demand demand_of(const RunConfig& cfg, std::uint64_t seed) {
  if (cfg.demand.empty()) return random_demand(cfg.n, cfg.k, seed ^ 0x5bd1e995ULL);
  Demand d;
  for (const auto& item : split(cfg.demand, ',')) {
    try {
      std::size_t used = 0;
      d.files.push_back(std::stoi(item, &used));
      if (used != item.size()) throw UsageError("bad demand entry '" + item + "'");
    } catch (const std::logic_error&) {
      throw UsageError("bad demand entry '" + item + "'");
    }
  }
  if (d.users() != cfg.k) {
    throw UsageError("--demand lists " + std::to_string(d.users()) + " files but K = " + std::to_string(cfg.k));
  }
  d.validate(cfg.n);
  return d;
}

std::string demand_text(const Demand& d) {
  std::string out = "(";
  for (std::size_t i = 0; i < d.files.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(d.files[i]);
  }
  return out + ")";
}

std::string stats_text(const DemandStats& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.s.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(s.s[i]);
  }
  return out + ")";
}

std::uint64_t demand_count(int N, int K, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (int i = 0; i < K; ++i) {
    if (total > cap / static_cast<std::uint64_t>(N)) return cap + 1;
    total *= static_cast<std::uint64_t>(N);
  }
  return total;
}

// Writes to `path`, or to `fallback` when path is empty or "-".
template <class Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw UsageError("cannot open '" + path + "' for writing");
  fn(file);
}

std::vector<std::string> scheme_list(const RunConfig& cfg) {
  auto schemes = split(cfg.schemes, ',');
  if (schemes.empty()) throw UsageError("--schemes must name at least one scheme");
  const auto known = known_schemes();
  for (const auto& s : schemes) {
    if (std::find(known.begin(), known.end(), s) == known.end()) {
      std::string all;
      for (auto k : known) all += (all.empty() ? "" : ", ") + std::string(k);
      throw UsageError("unknown scheme '" + s + "' (known: " + all + ")");
    }
  }
  return schemes;
}

std::vector<Rational> grid_of(const RunConfig& cfg) {
  if (cfg.grid.empty()) throw UsageError("--grid start:stop:step is required");
  auto grid = parse_grid(cfg.grid);
  for (const auto& m : grid) {
    if (m < 0 || m > cfg.n) throw UsageError("grid point " + to_string(m) + " outside [0, N]");
  }
  return grid;
}

int cmd_rates(const RunConfig& cfg, std::ostream& out) {
  require_nk(cfg);
  const auto schemes = scheme_list(cfg);
  const auto grid = grid_of(cfg);
  std::vector<RateCurve> curves;
  for (const auto& s : schemes) curves.push_back(rate_curve(s, cfg.n, cfg.k, grid));
  emit(cfg.out, out, [&](std::ostream& os) { write_rate_csv(os, curves); });
  if (!cfg.out.empty() && cfg.out != "-") {
    out << "wrote " << grid.size() * curves.size() << " rows to " << cfg.out << '\n';
  }
  return kExitOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_nk(cfg);
  RunConfig with_defaults = cfg;
  if (with_defaults.schemes.empty()) {
    with_defaults.schemes = "optimal-avg,man-avg,optimal-peak,dec-avg,man-dec-avg,dec-peak";
  }
  const auto schemes = scheme_list(with_defaults);
  const auto grid = grid_of(cfg);
  std::map<std::string, RateCurve> curves;
  for (const auto& s : schemes) curves.emplace(s, rate_curve(s, cfg.n, cfg.k, grid));

  emit(cfg.out, out, [&](std::ostream& os) {
    os << "M";
    for (const auto& s : schemes) os << ',' << s;
    os << ",N,K\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      os << format_fixed(grid[i], 6);
      for (const auto& s : schemes) os << ',' << format_fixed(curves.at(s).points[i].R, 6);
      os << ',' << cfg.n << ',' << cfg.k << '\n';
    }
  });

  // Dominance summary: lower curve first.
  static const std::pair<const char*, const char*> kPairs[] = {
      {"optimal-avg", "man-avg"},   {"dec-avg", "man-dec-avg"},
      {"optimal-avg", "optimal-peak"}, {"dec-avg", "dec-peak"},
  };
  std::ostream& report = (cfg.out.empty() || cfg.out == "-") ? err : out;
  bool ok = true;
  for (const auto& [low, high] : kPairs) {
    if (!curves.count(low) || !curves.count(high)) continue;
    std::size_t strict = 0;
    bool holds = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto& a = curves.at(low).points[i].R;
      const auto& b = curves.at(high).points[i].R;
      // Sampled baselines carry double rounding; allow 1e-9.
      if (a > b + Rational(1, 1'000'000'000)) holds = false;
      if (a < b) ++strict;
    }
    ok = ok && holds;
    report << low << (holds ? " <= " : " !<= ") << high << " on all " << grid.size() << " points, strict at "
           << strict << '\n';
  }
  return ok ? kExitOk : kExitFailure;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  require_nk(cfg);
  const int t = integer_t(cfg);
  if (demand_count(cfg.n, cfg.k, kVerifyGuard) > kVerifyGuard) {
    throw UsageError("refusing to verify: N^K exceeds " + std::to_string(kVerifyGuard) +
                     " demands; choose smaller N or K");
  }
  const std::uint64_t parts = binomial(static_cast<std::uint64_t>(cfg.k), static_cast<std::uint64_t>(t));
  const std::size_t F = cfg.f.value_or(static_cast<std::size_t>(2 * parts));
  if (F % parts != 0) {
    throw UsageError("--f must be a multiple of C(K,t) = " + std::to_string(parts));
  }
  const std::uint64_t seed = resolve_seed(cfg);
  const Database db = make_database(cfg.n, F, seed);
  const Placement placement = batch_placement(cfg.n, cfg.k, t, F);
  std::vector<UserCache> caches;
  for (int k = 1; k <= cfg.k; ++k) caches.emplace_back(db, placement, k);

  out << "verify N=" << cfg.n << " K=" << cfg.k << " t=" << t << " F=" << F << " seed=" << seed << '\n';

  std::uint64_t demands = 0;
  std::uint64_t identity_checks = 0;
  std::optional<std::string> failure;
  std::map<DemandStats, std::pair<Rational, std::uint64_t>> by_type;
  Rational total = 0;
  Rational peak = 0;

  for_each_demand(cfg.n, cfg.k, [&](const Demand& d) {
    if (failure) return;
    ++demands;
    const DemandStats stats = demand_stats(d, cfg.n);
    const LeaderSet leaders = select_leaders(d);
    const auto messages = encode_delivery(db, placement, d, leaders);
    const auto expected = binomial(static_cast<std::uint64_t>(cfg.k), static_cast<std::uint64_t>(t) + 1) -
                          binomial(static_cast<std::uint64_t>(cfg.k - stats.n_e), static_cast<std::uint64_t>(t) + 1);
    if (messages.size() != expected) {
      failure = "demand " + demand_text(d) + ": " + std::to_string(messages.size()) + " messages, expected " +
                std::to_string(expected);
      return;
    }
    for (int k = 1; k <= cfg.k; ++k) {
      const BitVector got = decode_user(caches[static_cast<std::size_t>(k - 1)], placement, messages, d, leaders);
      if (got != db.file(d.file_of(k))) {
        failure = "demand " + demand_text(d) + ": user " + std::to_string(k) + " decoded a wrong file";
        return;
      }
    }
    if (t < cfg.k) {
      const UserMask U = leaders.mask();
      for (const auto& A : enumerate_subsets(cfg.k, t + 1)) {
        if ((A.mask() & U) != 0) continue;
        const SubsetId B = make_subset(cfg.k, A.mask() | U);
        ++identity_checks;
        if (!verify_lemma1(d, leaders, B) || !verify_lemma1(db, placement, d, leaders, B)) {
          failure = "demand " + demand_text(d) + ": zero-sum identity fails for B = {" + B.to_string() + "}";
          return;
        }
      }
    }
    const Rational rate = delivered_rate(messages, F);
    total += rate;
    peak = std::max(peak, rate);
    auto& slot = by_type[stats];
    if (slot.second == 0) {
      slot.first = rate;
    } else if (slot.first != rate) {
      failure = "demand " + demand_text(d) + ": rate differs from other demands of type " + stats_text(stats);
    }
    ++slot.second;
  });

  if (failure) {
    out << "FAIL: " << *failure << '\n';
    return kExitFailure;
  }

  const Rational average = total / demands;
  const Rational M = Rational(cfg.n) * t / cfg.k;
  const Rational formula_avg = avg_rate_optimal(cfg.n, cfg.k, M);
  const Rational formula_peak = peak_rate_optimal(cfg.n, cfg.k, M);
  out << "demands: " << demands << "  types: " << by_type.size() << '\n';
  out << "message count = C(K,t+1) - C(K-N_e,t+1) for every demand\n";
  out << "every user decoded its file exactly\n";
  out << "zero-sum identity: " << identity_checks << " sets checked\n";
  out << "average rate: " << to_string(average) << " (formula " << to_string(formula_avg) << ")\n";
  out << "peak rate: " << to_string(peak) << " (formula " << to_string(formula_peak) << ")\n";
  if (average != formula_avg || peak != formula_peak) {
    out << "FAIL: measured rates differ from the closed form\n";
    return kExitFailure;
  }
  out << "PASS\n";
  return kExitOk;
}

int simulate_centralized(const RunConfig& cfg, std::ostream& out, std::uint64_t seed) {
  const int t = integer_t(cfg);
  if (!cfg.f) throw UsageError("--f is required");
  const std::size_t F = *cfg.f;
  const std::uint64_t parts = binomial(static_cast<std::uint64_t>(cfg.k), static_cast<std::uint64_t>(t));
  const std::size_t padded = (F + parts - 1) / parts * parts;

  const Database db = make_database(cfg.n, padded, seed);
  const Placement placement = batch_placement(cfg.n, cfg.k, t, padded);
  const Demand d = demand_of(cfg, seed);
  const LeaderSet leaders = select_leaders(d);
  const auto messages = encode_delivery(db, placement, d, leaders);
  const DemandStats stats = demand_stats(d, cfg.n);

  out << "centralized N=" << cfg.n << " K=" << cfg.k << " t=" << t << " F=" << F << " seed=" << seed << '\n';
  if (padded != F) {
    out << "padded F to " << padded << " (" << padded - F << " zero bits per file)\n";
  }
  out << "demand " << demand_text(d) << "  N_e=" << stats.n_e << "\n";
  out << "messages: " << messages.size() << '\n';
  const Rational rate = delivered_rate(messages, padded);
  const Rational formula = leader_delivery_rate(cfg.k, t, stats.n_e);
  out << "rate: " << to_string(rate) << " = " << format_fixed(rate, 6) << " (formula " << to_string(formula)
      << ")\n";
  if (padded != F) {
    out << "rate per original file size: " << format_fixed(delivered_rate(messages, F), 6) << '\n';
  }

  if (!cfg.save_placement.empty()) {
    emit(cfg.save_placement, out, [&](std::ostream& os) { write_placement(os, placement); });
  }
  if (!cfg.dump.empty()) {
    emit(cfg.dump, out, [&](std::ostream& os) { write_transcript(os, messages); });
  }

  int failures = 0;
  for (int k = 1; k <= cfg.k; ++k) {
    const UserCache cache(db, placement, k);
    const BitVector got = decode_user(cache, placement, messages, d, leaders);
    if (got != db.file(d.file_of(k))) {
      BitVector diff = got ^ db.file(d.file_of(k));
      out << "user " << k << ": decode mismatch in " << diff.count() << " bits\n";
      ++failures;
    }
  }
  out << (failures == 0 ? "decode OK for all users\n" : "decode FAILED\n");
  return failures == 0 && rate == formula ? kExitOk : kExitFailure;
}

int simulate_decentralized(const RunConfig& cfg, std::ostream& out, std::uint64_t seed) {
  if (cfg.k > kMaxDecentralizedUsers) {
    throw UsageError("decentralized simulation supports K <= " + std::to_string(kMaxDecentralizedUsers));
  }
  const Rational M = memory_of(cfg);
  if (!cfg.f) throw UsageError("--f is required");
  const std::size_t F = *cfg.f;
  const Database db = make_database(cfg.n, F, seed);
  const Placement placement = random_placement(cfg.n, cfg.k, M, F, seed + 1);
  const LevelPartition partition = level_partition(placement);
  const Demand d = demand_of(cfg, seed);
  const DemandStats stats = demand_stats(d, cfg.n);
  const auto messages = encode_delivery_decentralized(db, partition, d);

  out << "decentralized N=" << cfg.n << " K=" << cfg.k << " M=" << to_string(M) << " F=" << F << " seed=" << seed
      << '\n';
  out << "demand " << demand_text(d) << "  N_e=" << stats.n_e << "\n";
  out << "levels:";
  for (int j = 0; j <= cfg.k; ++j) out << ' ' << partition.level_size(j);
  out << "\nmessages: " << messages.size() << "  zero-fill bits: " << padding_bits(partition, d, messages) << '\n';

  const Rational rate = empirical_rate(messages, F);
  Rational formula;
  if (M == 0) {
    formula = stats.n_e;
  } else {
    Rational miss = 1;
    for (int i = 0; i < stats.n_e; ++i) miss *= (cfg.n - M) / cfg.n;
    formula = (cfg.n - M) / M * (1 - miss);
  }
  out << "rate: " << format_fixed(rate, 6) << " (formula " << format_fixed(formula, 6) << ")";
  if (formula != 0) {
    out << "  relative error " << format_fixed((rate - formula) / formula * 100, 3) << "%";
  }
  out << '\n';

  if (!cfg.save_placement.empty()) {
    emit(cfg.save_placement, out, [&](std::ostream& os) { write_placement(os, placement); });
  }
  if (!cfg.dump.empty()) {
    emit(cfg.dump, out, [&](std::ostream& os) { write_transcript(os, messages); });
  }

  int failures = 0;
  for (int k = 1; k <= cfg.k; ++k) {
    const UserCache cache(db, placement, k);
    const BitVector got = decode_user_decentralized(cache, partition, messages, d);
    if (got != db.file(d.file_of(k))) {
      BitVector diff = got ^ db.file(d.file_of(k));
      out << "user " << k << ": decode mismatch in " << diff.count() << " bits\n";
      ++failures;
    }
  }
  out << (failures == 0 ? "decode OK for all users\n" : "decode FAILED\n");
  return failures == 0 ? kExitOk : kExitFailure;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  require_nk(cfg);
  const std::uint64_t seed = resolve_seed(cfg);
  return cfg.decentralized ? simulate_decentralized(cfg, out, seed) : simulate_centralized(cfg, out, seed);
}

int cmd_bound(const RunConfig& cfg, std::ostream& out) {
  if (cfg.placement.empty()) throw UsageError("--placement FILE is required");
  std::ifstream in(cfg.placement);
  if (!in) throw UsageError("cannot open '" + cfg.placement + "'");
  Placement placement = [&] {
    try {
      return read_placement(in);
    } catch (const ParseError& e) {
      throw UsageError(cfg.placement + ": " + e.what());
    }
  }();
  const Rational eps = parse_rational(cfg.eps);
  if (eps < 0) throw UsageError("--eps must be non-negative");

  const int K = placement.users();
  const int N = placement.files();
  const std::size_t F = placement.file_bits();
  const CacheProfile profile = cache_profile(placement);
  const auto view = detect_batch_view(placement);
  if (view) placement.set_batch_view(*view);

  out << "placement K=" << K << " N=" << N << " F=" << F << " M=" << to_string(placement.memory()) << '\n';
  out << "profile a_n:";
  for (std::size_t n = 0; n < profile.a.size(); ++n) out << ' ' << profile.a[n];
  out << '\n';
  if (view) {
    out << "batch placement with t=" << view->t << " (" << view->subfile_bits << "-bit subfiles)\n";
  } else {
    out << "not a batch placement\n";
  }

  // Exhaustive per-type average of the level-partitioned delivery, when small enough.
  std::map<DemandStats, std::pair<Rational, std::uint64_t>> achieved;
  const bool exhaustive = K <= kMaxDecentralizedUsers && demand_count(N, K, 4096) <= 4096;
  if (exhaustive) {
    const Database db = make_database(N, F, resolve_seed(cfg));
    const LevelPartition partition = level_partition(placement);
    for_each_demand(N, K, [&](const Demand& d) {
      const auto messages = encode_delivery_decentralized(db, partition, d);
      auto& slot = achieved[demand_stats(d, N)];
      slot.first += empirical_rate(messages, F);
      ++slot.second;
    });
  }

  out << "type            N_e  bound       achieved\n";
  bool sandwich = true;
  for (const auto& stats : enumerate_types(N, K)) {
    const Rational bound = converse_bound(profile, stats, K, F, eps);
    std::string label = stats_text(stats);
    label.resize(std::max<std::size_t>(label.size(), 16), ' ');
    out << label << std::to_string(stats.n_e);
    out << std::string(5 - std::min<std::size_t>(4, std::to_string(stats.n_e).size()), ' ');
    out << format_fixed(bound, 6) << "    ";
    if (exhaustive) {
      const auto& [sum, count] = achieved.at(stats);
      const Rational avg = sum / count;
      out << format_fixed(avg, 6);
      if (avg < bound) {
        out << "  (below bound!)";
        sandwich = false;
      }
    } else {
      out << "-";
    }
    out << '\n';
  }
  return sandwich ? kExitOk : kExitFailure;
}

void add_nk(CLI::App* sub, RunConfig& cfg, bool required) {
  auto* n = sub->add_option("--n", cfg.n, "number of files N")->check(CLI::PositiveNumber);
  auto* k = sub->add_option("--k", cfg.k, "number of users K")->check(CLI::Range(1, 64));
  if (required) {
    n->required();
    k->required();
  }
}

void add_seed(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--seed", cfg.seed, "random seed (overrides CACHEKIT_SEED; default 1)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"cachekit: coded caching with uncoded prefetching"};
  app.name("cachekit");
  app.require_subcommand(1);
  RunConfig cfg;

  auto* rates = app.add_subcommand("rates", "write rate-memory curves as CSV");
  add_nk(rates, cfg, true);
  rates->add_option("--grid", cfg.grid, "memory grid start:stop:step")->required();
  rates->add_option("--schemes", cfg.schemes, "comma-separated scheme labels")->required();
  rates->add_option("--out", cfg.out, "CSV path (default stdout)");

  auto* compare = app.add_subcommand("compare", "side-by-side table of optimal and baseline rates");
  add_nk(compare, cfg, true);
  compare->add_option("--grid", cfg.grid, "memory grid start:stop:step")->required();
  compare->add_option("--schemes", cfg.schemes, "comma-separated scheme labels");
  compare->add_option("--out", cfg.out, "CSV path (default stdout)");

  auto* verify = app.add_subcommand("verify", "exhaustively check centralized delivery over all demands");
  add_nk(verify, cfg, true);
  verify->add_option("--t", cfg.t, "integer cache parameter t = KM/N");
  verify->add_option("--m", cfg.m, "cache size M (alternative to --t)");
  verify->add_option("--f", cfg.f, "file size in bits (default 2*C(K,t))");
  add_seed(verify, cfg);

  auto* simulate = app.add_subcommand("simulate", "run one placement and delivery end to end");
  add_nk(simulate, cfg, true);
  simulate->add_option("--t", cfg.t, "integer cache parameter t = KM/N");
  simulate->add_option("--m", cfg.m, "cache size M");
  simulate->add_option("--f", cfg.f, "file size in bits")->required();
  simulate->add_option("--demand", cfg.demand, "comma-separated file indices, one per user");
  simulate->add_flag("--decentralized", cfg.decentralized, "use uniformly random prefetching");
  simulate->add_option("--dump", cfg.dump, "write the delivery transcript ('-' for stdout)");
  simulate->add_option("--save-placement", cfg.save_placement, "write the placement file");
  add_seed(simulate, cfg);

  auto* bound = app.add_subcommand("bound", "evaluate the converse bound for a placement file");
  bound->add_option("--placement", cfg.placement, "placement file")->required();
  bound->add_option("--eps", cfg.eps, "decoding error probability (default 0)");
  add_seed(bound, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (rates->parsed()) return cmd_rates(cfg, out);
    if (compare->parsed()) return cmd_compare(cfg, out, err);
    if (verify->parsed()) return cmd_verify(cfg, out);
    if (simulate->parsed()) return cmd_simulate(cfg, out);
    if (bound->parsed()) return cmd_bound(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace cachekit::cli
