// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <thread>

#include "eds/cli.hpp"
#include "eds/error.hpp"
#include "eds/obstruction.hpp"
#include "eds/relation.hpp"
#include "eds/report.hpp"
#include "fixtures.hpp"

using namespace eds;
using namespace eds::testing;
namespace fs = std::filesystem;

namespace {

// Time limits in seconds, per criterion.
constexpr double kLimitFixture = 1.0;
constexpr double kLimitDivisibility = 60.0;
constexpr double kLimitLaw = 300.0;
constexpr double kLimitSoundness = 600.0;
constexpr double kLimitPowerOracle = 30.0;
constexpr double kNoLimit = 0.0;

constexpr std::uint64_t kDivisibilityN = 60;
constexpr std::uint64_t kLawN = 60;
constexpr std::uint64_t kLawPMax = 10'000;
constexpr std::uint64_t kEllMax = 31;
constexpr std::uint64_t kSweepN = 12;
constexpr std::size_t kSweepK = 3;
constexpr std::uint64_t kPowerXMax = 1'000'000;
// Same budget as the unit tests; D_ell for prime ell <= 12 factors completely within it.
constexpr const char* kSweepEffort = "rho=200000,seconds=5";

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fixture_file(const char* name) { return std::string(EDS_FIXTURE_DIR) + "/" + name; }

std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p <= n; ++p) {
    if (is_prime_u64(p)) out.push_back(p);
  }
  return out;
}

// Independent of is_rho_power: GMP's own root with remainder.
bool gmp_is_power(const Nat& x, unsigned rho) {
  Nat root, rem;
  mpz_rootrem(root.get_mpz_t(), rem.get_mpz_t(), x.get_mpz_t(), rho);
  return rem == 0;
}

void all_multisets(std::size_t k, std::uint64_t N, IndexTuple& cur, std::vector<IndexTuple>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::uint64_t j = cur.empty() ? 1 : cur.back(); j <= N; ++j) {
    cur.push_back(j);
    all_multisets(k, N, cur, out);
    cur.pop_back();
  }
}

std::vector<IndexTuple> sweep_tuples() {
  std::vector<IndexTuple> out;
  for (std::size_t k = 1; k <= kSweepK; ++k) {
    IndexTuple cur;
    all_multisets(k, kSweepN, cur, out);
  }
  return out;
}

struct FixtureFile {
  const char* file;
  Fixture fx;
};

std::vector<FixtureFile> fixture_files() {
  const auto fx = all_fixtures();
  return {{"37a1.json", fx[0]}, {"37a1_5P.json", fx[1]}, {"389a1.json", fx[2]}};
}

// 1. The tool's D_1..D_8 against the frozen oracle output.
Outcome fixture_eds() {
  const std::vector<std::string> expected = {"1", "1", "1", "1", "2", "1", "3", "5"};
  const fs::path out = fs::temp_directory_path() / "eds_acceptance_gen.jsonl";
  std::ostringstream sout, serr;
  const int code = run_cli(
      {"gen", "--curve", fixture_file("37a1.json"), "--n-max", "8", "--out", out.string(), "--format", "json"}, sout,
      serr);
  if (code != kExitOk) return {false, "gen exited " + std::to_string(code) + ": " + serr.str()};
  const Json j = Json::parse(sout.str());
  std::vector<std::string> got;
  for (const auto& d : j["D"]) got.push_back(d.get<std::string>());
  std::string shown;
  for (const auto& d : got) shown += (shown.empty() ? "" : ",") + d;
  return {got == expected, "D_1..D_8 = " + shown};
}

// 2. m | n implies D_m | D_n.
Outcome divisibility() {
  std::size_t violations = 0, pairs = 0;
  for (const auto& fx : all_fixtures()) {
    const EdsTable t = eds_range(fx.E, fx.P, kDivisibilityN);
    for (std::uint64_t n = 1; n <= kDivisibilityN; ++n) {
      for (std::uint64_t m = 1; m <= n; ++m) {
        if (n % m != 0) continue;
        ++pairs;
        if (!mpz_divisible_p(t.D(n).get_mpz_t(), t.D(m).get_mpz_t())) ++violations;
      }
    }
  }
  return {violations == 0, std::to_string(pairs) + " pairs, " + std::to_string(violations) + " violations"};
}

// 3. Both clauses of the law for p outside S, p <= 10^4, n <= 60.
Outcome valuation_law_suite() {
  const auto primes = primes_up_to(kLawPMax);
  std::size_t checked = 0, violating = 0, skipped = 0;
  for (const auto& fx : all_fixtures()) {
    const EdsContext ctx = make_context(fx.E, fx.P, kLawN, true);
    std::vector<std::uint64_t> todo;
    for (auto p : primes) {
      if (ctx.exceptional().contains(p)) {
        ++skipped;
      } else {
        todo.push_back(p);
      }
    }
    std::vector<char> bad(todo.size(), 0);
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < todo.size(); i += workers) bad[i] = !check_valuation_law(ctx, todo[i], kLawN).holds();
      });
    }
    for (auto& th : pool) th.join();
    checked += todo.size();
    violating += std::count(bad.begin(), bad.end(), 1);
  }
  return {violating == 0, std::to_string(checked) + " (curve, p) checks, " + std::to_string(skipped) +
                              " skipped in S, " + std::to_string(violating) + " violating"};
}

// 4. r_2, r_3, r_5 on the main fixture, with naive point counts.
Outcome reduction_orders() {
  const auto E = curve_37a();
  const auto P = point_37a();
  const std::vector<std::array<std::uint64_t, 3>> frozen = {{2, 5, 5}, {3, 7, 7}, {5, 8, 8}};
  std::string detail;
  bool pass = true;
  for (const auto& [p, r, count] : frozen) {
    const std::uint64_t got_r = reduction_order(E, P, p);
    const std::uint64_t got_count = group_order_naive(E, p);
    pass = pass && got_r == r && got_count == count;
    detail += "r_" + std::to_string(p) + "=" + std::to_string(got_r) + " #E(F_" + std::to_string(p) +
              ")=" + std::to_string(got_count) + " ";
  }
  return {pass, detail};
}

// 5. Every prime p outside S dividing D_ell (ell prime <= 31) has ell <= p + 1 + 2 sqrt(p).
Outcome hasse_containment() {
  std::size_t primes_seen = 0, violations = 0, partial = 0;
  for (const auto& fx : all_fixtures()) {
    for (bool guard : {true, false}) {
      const EdsContext ctx = make_context(fx.E, fx.P, kEllMax, guard);
      for (auto ell : primes_up_to(kEllMax)) {
        const auto f = ctx.factorization_of_D(ell);
        if (f->cofactor != 1) ++partial;
        for (const auto& pp : f->factors) {
          if (ctx.exceptional().contains(pp.prime)) continue;
          ++primes_seen;
          // ell <= p + 1 + 2 sqrt(p)  iff  ell <= p + 1 or (ell - p - 1)^2 <= 4p
          const Nat excess = Nat(from_u64(ell)) - pp.prime - 1;
          if (excess > 0 && excess * excess > 4 * pp.prime) ++violations;
        }
      }
    }
  }
  std::string detail = std::to_string(primes_seen) + " (ell, p) pairs, " + std::to_string(violations) + " violations";
  if (partial) detail += ", " + std::to_string(partial) + " D_ell only partially factored";
  return {violations == 0, detail};
}

// 6. Detecting parts of rad_{S,2}(D_ell) for distinct ell are coprime.
Outcome radical_coprimality() {
  std::size_t pairs = 0, shared = 0;
  for (const auto& fx : all_fixtures()) {
    for (bool guard : {true, false}) {
      const EdsContext ctx = make_context(fx.E, fx.P, kEllMax, guard);
      std::vector<Nat> parts;
      for (auto ell : primes_up_to(kEllMax)) {
        Nat part = 1;
        for (const auto& dp : detecting_primes(ctx, ell, 2).primes) part *= dp.p;
        parts.push_back(part);
      }
      for (std::size_t i = 0; i < parts.size(); ++i) {
        for (std::size_t j = i + 1; j < parts.size(); ++j) {
          ++pairs;
          Nat g;
          mpz_gcd(g.get_mpz_t(), parts[i].get_mpz_t(), parts[j].get_mpz_t());
          if (g != 1) ++shared;
        }
      }
    }
  }
  return {shared == 0, std::to_string(pairs) + " pairs, " + std::to_string(shared) + " sharing a prime"};
}

// 7. No checker certifies an exclusion for a tuple whose product is a rho-th power.
Outcome soundness_sweep() {
  const auto tuples = sweep_tuples();
  const fs::path file = fs::temp_directory_path() / "eds_acceptance_tuples.txt";
  {
    std::ofstream out(file);
    for (const auto& t : tuples) {
      for (std::size_t i = 0; i < t.size(); ++i) out << (i ? "," : "") << t[i];
      out << '\n';
    }
  }
  std::size_t runs = 0, exclusions = 0, contradictions = 0, exit4 = 0;
  std::string errors;
  for (const auto& ff : fixture_files()) {
    const EdsTable table = eds_range(ff.fx.E, ff.fx.P, kSweepN);
    for (unsigned rho : {2u, 3u}) {
      for (bool guard : {true, false}) {
        std::vector<std::string> args = {"obstruct",         "--curve", fixture_file(ff.file), "--tuple-file",
                                         file.string(),      "--rho",   std::to_string(rho),   "--format",
                                         "json",             "--n-max", std::to_string(kSweepN),
                                         "--effort",         kSweepEffort};
        if (!guard) args.push_back("--no-small-prime-guard");
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        ++runs;
        if (code == kExitUnsound) ++exit4;
        if (code != kExitOk && code != kExitUnsound) {
          errors += std::string(ff.file) + " exited " + std::to_string(code) + ": " + err.str();
          continue;
        }
        const Json j = Json::parse(out.str());
        for (const auto& t : j["tuples"]) {
          Nat product = 1;
          for (const auto& m : t["n"]) product *= table.D(m.get<std::uint64_t>());
          const bool power = gmp_is_power(product, rho);
          std::vector<Json> verdicts(t["verdicts"].begin(), t["verdicts"].end());
          verdicts.push_back(t["cluster_packing"]["verdict"]);
          for (const auto& v : verdicts) {
            if (v["verdict"] != "fails") continue;
            const bool verified = std::all_of(v["hypotheses"].begin(), v["hypotheses"].end(),
                                              [](const Json& h) { return h["satisfied"].get<bool>(); });
            if (!verified) continue;
            ++exclusions;
            if (power) ++contradictions;
          }
        }
      }
    }
  }
  std::string detail = std::to_string(tuples.size()) + " tuples x " + std::to_string(runs) + " configurations, " +
                       std::to_string(exclusions) + " certified exclusions, " + std::to_string(contradictions) +
                       " contradictions, exit 4 seen " + std::to_string(exit4) + " times";
  if (!errors.empty()) detail += "; " + errors;
  return {contradictions == 0 && exit4 == 0 && errors.empty(), detail};
}

// 8. Every relation found passes the absorption congruence at every detecting prime.
Outcome positive_relations() {
  std::size_t relations = 0, checks = 0, violations = 0, inconclusive = 0;
  for (const auto& fx : all_fixtures()) {
    for (bool guard : {true, false}) {
      const EdsContext ctx = make_context(fx.E, fx.P, kSweepN, guard);
      for (unsigned rho : {2u, 3u}) {
        for (std::size_t k = 1; k <= kSweepK; ++k) {
          for (const auto& rel : search_relations(ctx.table(), k, kSweepN, rho)) {
            ++relations;
            std::vector<std::uint64_t> ells;
            for (auto m : rel.n) {
              for (auto ell : primes_up_to(m)) {
                if (m % ell == 0) ells.push_back(ell);
              }
            }
            std::sort(ells.begin(), ells.end());
            ells.erase(std::unique(ells.begin(), ells.end()), ells.end());
            for (auto ell : ells) {
              for (const auto& dp : detecting_primes(ctx, ell, rho).primes) {
                const auto v = absorption_congruence(ctx, rel.n, ell, dp.p, rho);
                ++checks;
                if (v.verdict == Verdict::fails) ++violations;
                if (v.verdict == Verdict::inconclusive) ++inconclusive;
              }
            }
          }
        }
      }
    }
  }
  return {violations == 0, std::to_string(relations) + " relations, " + std::to_string(checks) +
                               " congruences, " + std::to_string(violations) + " violations, " +
                               std::to_string(inconclusive) + " inconclusive"};
}

// 9. The balanced two-block fixture and the weight-one fixture.
Outcome cluster_fixture() {
  const auto& ctx = ctx37();
  Thresholds t;
  t.B = 3.0;
  const unsigned rho = 2;
  const IndexTuple balanced = {22, 33, 26, 39};
  const auto good = cluster_packing(ctx, balanced, {11, 13}, rho, t);
  const bool all_five = std::all_of(good.conclusions.begin(), good.conclusions.end(), [](bool c) { return c; });
  const bool rank_ok = good.rank == good.lambda_star.size();
  const bool size_ok = good.lambda_star.size() == balanced.size() / rho;

  const IndexTuple weight_one = {22, 26, 6};
  const auto bad = cluster_packing(ctx, weight_one, {11, 13}, rho, t);
  const bool oracle_power = gmp_is_power(test_relation(ctx.table(), weight_one, rho).product, rho);
  const bool excluded = !bad.conclusions[0] && bad.verdict.certifies_exclusion() && !oracle_power;

  std::ostringstream detail;
  detail << "balanced: conclusions " << (all_five ? "all hold" : "incomplete") << ", rank " << good.rank
         << ", |Lambda*| " << good.lambda_star.size() << "; weight-one: conclusion 1 "
         << (bad.conclusions[0] ? "holds" : "fails") << ", exclusion "
         << (bad.verdict.certifies_exclusion() ? "certified" : "not certified") << ", oracle power "
         << (oracle_power ? "yes" : "no");
  return {all_five && rank_ok && size_ok && excluded, detail.str()};
}

// 10. is_rho_power against a table of exact powers.
Outcome power_oracle() {
  std::size_t mismatches = 0;
  for (unsigned rho : {2u, 3u, 5u}) {
    std::vector<char> is_power(kPowerXMax + 1, 0);
    for (std::uint64_t y = 1;; ++y) {
      std::uint64_t v = 1;
      for (unsigned i = 0; i < rho; ++i) v *= y;
      if (v > kPowerXMax) break;
      is_power[v] = 1;
    }
    for (std::uint64_t x = 1; x <= kPowerXMax; ++x) {
      if (is_rho_power(from_u64(x), rho) != static_cast<bool>(is_power[x])) ++mismatches;
    }
  }
  return {mismatches == 0, "x <= 10^6, rho in {2,3,5}: " + std::to_string(mismatches) + " mismatches"};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "fixture EDS D_1..D_8", kLimitFixture, fixture_eds},
      {2, "divisibility m | n => D_m | D_n", kLimitDivisibility, divisibility},
      {3, "valuation law, p <= 10^4", kLimitLaw, valuation_law_suite},
      {4, "reduction orders r_2, r_3, r_5", kNoLimit, reduction_orders},
      {5, "Hasse interval for detecting primes", kNoLimit, hasse_containment},
      {6, "radical coprimality", kNoLimit, radical_coprimality},
      {7, "soundness sweep", kLimitSoundness, soundness_sweep},
      {8, "positive-relation consistency", kNoLimit, positive_relations},
      {9, "cluster-packing fixture", kNoLimit, cluster_fixture},
      {10, "perfect-power oracle", kLimitPowerOracle, power_oracle},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.limit_seconds == kNoLimit || seconds < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s criterion %d: %s (%.2fs", pass ? "PASS" : "FAIL", c.id, c.name, seconds);
    if (c.limit_seconds != kNoLimit) std::printf(", limit %.0fs", c.limit_seconds);
    std::printf(") %s\n", o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
