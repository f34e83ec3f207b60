#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "eds/factor.hpp"
#include "eds/fp_curve.hpp"
#include "eds/sequence.hpp"

namespace eds {

enum class Provenance : unsigned {
  bad_reduction = 1,
  divides_D1 = 2,
  small_prime_guard = 4,
  user_added = 8,
};

std::string_view to_string(Provenance why);

/// The finite prime set S_{E,P} outside which the valuation law is used.
/// A prime may carry several provenance tags.
class ExceptionalSet {
 public:
  void add(const Nat& p, Provenance why);
  bool contains(const Nat& p) const { return entries_.contains(p); }
  bool contains(std::uint64_t p) const { return contains(from_u64(p)); }
  std::vector<Provenance> reasons(const Nat& p) const;
  PrimeSet primes() const;
  const std::map<Nat, unsigned>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<Nat, unsigned> entries_;
};

struct ExceptionalSetOptions {
  /// Always adjoin {2, 3}. Turning it off leaves S = bad primes + Supp(D_1) + extra.
  bool small_prime_guard = true;
  std::vector<Nat> extra;
  Effort effort;
};

/// Bad-reduction primes, Supp(D_1), the guard, and `extra`. Throws
/// BudgetExceeded if the discriminant or D_1 cannot be fully factored.
ExceptionalSet build_exceptional_set(const WeierstrassCurve& E, const RatPoint& P,
                                     const ExceptionalSetOptions& options = {});

/// Everything the law and obstruction checks share for one (E, P): the
/// table, S, budgets, and the memoized point counts and factorizations.
/// Copies share the memos.
class EdsContext {
 public:
  EdsContext(EdsTable table, ExceptionalSet S, Effort effort = {}, CountingLimits limits = {},
             std::uint64_t sieve_bound = 10'000);

  const EdsTable& table() const { return *table_; }
  const WeierstrassCurve& curve() const { return table_->curve(); }
  const RatPoint& point() const { return table_->point(); }
  const ExceptionalSet& exceptional() const { return exceptional_; }
  const Effort& effort() const { return effort_; }
  const CountingLimits& limits() const { return orders_->limits(); }
  std::uint64_t sieve_bound() const { return sieve_bound_; }
  GroupOrderMemo& orders() const { return *orders_; }

  std::uint64_t reduction_order(std::uint64_t p) const;

  /// Primes p <= sieve bound outside S whose reduction of P has order
  /// exactly ell (ell prime), i.e. [ell]P = O mod p with P nonzero mod p.
  std::vector<Nat> sieve_order_primes(std::uint64_t ell) const;

  /// Factorization of D_n, memoized; sieve-assisted when n is prime.
  std::shared_ptr<const Factorization> factorization_of_D(std::uint64_t n) const;

  /// rad_{S,rho}(D_n) from the memoized factorization.
  Bounded detecting_radical(std::uint64_t n, unsigned rho) const;

  /// Returns a copy with p adjoined to S (provenance user_added).
  EdsContext with_added_prime(const Nat& p) const;

 private:
  std::shared_ptr<const EdsTable> table_;
  ExceptionalSet exceptional_;
  Effort effort_;
  std::uint64_t sieve_bound_;
  std::shared_ptr<GroupOrderMemo> orders_;
  struct FactorMemo {
    std::mutex mutex;
    std::map<std::uint64_t, std::shared_ptr<const Factorization>> entries;
  };
  std::shared_ptr<FactorMemo> factor_memo_;
};

struct LawViolation {
  std::uint64_t n = 0;
  int clause = 0;  // 1: p | D_n iff r_p | n; 2: the valuation formula
  unsigned observed = 0;
  unsigned predicted = 0;
};

struct LawReport {
  std::uint64_t p = 0;
  std::uint64_t r_p = 0;
  std::uint64_t n_max = 0;
  std::vector<LawViolation> violations;

  bool holds() const { return violations.empty(); }
};

/// Checks both clauses of the valuation law at p for n = 1..n_max against
/// directly computed valuations. A violation means S is too small for this
/// model (or the model is not minimal).
LawReport check_valuation_law(const EdsContext& ctx, std::uint64_t p, std::uint64_t n_max);

/// v_p(D_n) from the law, needing only D_{r_p} from the table.
unsigned valuation_via_law(const EdsContext& ctx, std::uint64_t p, std::uint64_t n);

/// Primes from violated reports, adjoined to S as user_added.
ExceptionalSet absorb_violations(const ExceptionalSet& S, const std::vector<LawReport>& reports);

struct DetectingPrime {
  Nat p;
  unsigned valuation = 0;  // v_p(D_ell)
  bool found_by_sieve = false;
  bool order_verified = false;  // reduction of P mod p has order exactly ell
  bool primitive = false;       // p divides no D_m, m < ell
};

struct DetectingResult {
  std::uint64_t ell = 0;
  unsigned rho = 0;
  std::vector<DetectingPrime> primes;  // sorted by p
  bool complete = true;                // D_ell fully factored
  std::vector<std::string> notes;
};

/// All p outside S with p | D_ell and rho not dividing v_p(D_ell).
DetectingResult detecting_primes(const EdsContext& ctx, std::uint64_t ell, unsigned rho);

struct ProbeReport {
  unsigned rho = 0;
  std::vector<DetectingResult> results;
  /// Largest prime ell in range with no detecting prime found. This is an
  /// observation within budget, not a proven value of L_rho.
  std::optional<std::uint64_t> largest_without;
};

ProbeReport probe_detecting(const EdsContext& ctx, std::uint64_t ell_min, std::uint64_t ell_max, unsigned rho);

}  // namespace eds
