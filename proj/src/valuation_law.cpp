#include "eds/valuation_law.hpp"

#include <algorithm>

#include "eds/error.hpp"

namespace eds {
namespace {

// ell <= q + 1 + 2 sqrt(q), evaluated exactly.
bool within_hasse_scale(std::uint64_t ell, std::uint64_t q) {
  if (ell <= q + 1) return true;
  const unsigned __int128 gap = ell - q - 1;
  return gap * gap <= static_cast<unsigned __int128>(4) * q;
}

constexpr std::uint64_t kFieldLimit = std::uint64_t{1} << 63;

}  // namespace

std::string_view to_string(Provenance why) {
  switch (why) {
    case Provenance::bad_reduction: return "bad_reduction";
    case Provenance::divides_D1: return "divides_D1";
    case Provenance::small_prime_guard: return "small_prime_guard";
    case Provenance::user_added: return "user_added";
  }
  return "unknown";
}

void ExceptionalSet::add(const Nat& p, Provenance why) { entries_[p] |= static_cast<unsigned>(why); }

std::vector<Provenance> ExceptionalSet::reasons(const Nat& p) const {
  std::vector<Provenance> out;
  auto it = entries_.find(p);
  if (it == entries_.end()) return out;
  for (Provenance why : {Provenance::bad_reduction, Provenance::divides_D1, Provenance::small_prime_guard,
                         Provenance::user_added}) {
    if (it->second & static_cast<unsigned>(why)) out.push_back(why);
  }
  return out;
}

PrimeSet ExceptionalSet::primes() const {
  PrimeSet out;
  for (const auto& [p, mask] : entries_) out.insert(p);
  return out;
}

ExceptionalSet build_exceptional_set(const WeierstrassCurve& E, const RatPoint& P,
                                     const ExceptionalSetOptions& options) {
  if (P.is_infinity()) throw Error(ErrorKind::InvalidInput, "exceptional set needs an affine point");
  ExceptionalSet S;

  const Factorization disc = factorize(abs(E.discriminant()), options.effort);
  if (!disc.complete()) throw Error(ErrorKind::BudgetExceeded, "discriminant not fully factored");
  for (const auto& pp : disc.factors) S.add(pp.prime, Provenance::bad_reduction);

  const Nat D1 = term_from_x(1, P.x()).D;
  const Factorization d1 = factorize(D1, options.effort);
  if (!d1.complete()) throw Error(ErrorKind::BudgetExceeded, "D_1 not fully factored");
  for (const auto& pp : d1.factors) S.add(pp.prime, Provenance::divides_D1);

  if (options.small_prime_guard) {
    S.add(2, Provenance::small_prime_guard);
    S.add(3, Provenance::small_prime_guard);
  }
  for (const Nat& p : options.extra) {
    if (!is_prime(p)) throw Error(ErrorKind::InvalidInput, to_decimal(p) + " is not prime");
    S.add(p, Provenance::user_added);
  }
  return S;
}

EdsContext::EdsContext(EdsTable table, ExceptionalSet S, Effort effort, CountingLimits limits,
                       std::uint64_t sieve_bound)
    : table_(std::make_shared<const EdsTable>(std::move(table))),
      exceptional_(std::move(S)),
      effort_(effort),
      sieve_bound_(sieve_bound),
      orders_(std::make_shared<GroupOrderMemo>(table_->curve(), limits)),
      factor_memo_(std::make_shared<FactorMemo>()) {}

std::uint64_t EdsContext::reduction_order(std::uint64_t p) const {
  return eds::reduction_order(*orders_, point(), p);
}

std::vector<Nat> EdsContext::sieve_order_primes(std::uint64_t ell) const {
  std::vector<Nat> out;
  for (std::uint32_t p : small_primes()) {
    if (p > sieve_bound_) break;
    if (!within_hasse_scale(ell, p)) continue;
    if (exceptional_.contains(std::uint64_t{p})) continue;
    if (mpz_divisible_ui_p(curve().discriminant().get_mpz_t(), p)) continue;
    const FpPoint reduced = reduce_point(curve(), point(), p);
    if (reduced.infinity) continue;
    if (ReducedCurve(curve(), p).multiply(reduced, ell).infinity) out.emplace_back(p);
  }
  return out;
}

std::shared_ptr<const Factorization> EdsContext::factorization_of_D(std::uint64_t n) const {
  {
    std::lock_guard lock(factor_memo_->mutex);
    if (auto it = factor_memo_->entries.find(n); it != factor_memo_->entries.end()) return it->second;
  }
  const Nat& D = table().D(n);
  std::vector<Nat> hints;
  if (is_prime_u64(n)) hints = sieve_order_primes(n);
  auto f = std::make_shared<const Factorization>(factorize_with_hints(D, hints, effort_));
  std::lock_guard lock(factor_memo_->mutex);
  return factor_memo_->entries.emplace(n, std::move(f)).first->second;
}

Bounded EdsContext::detecting_radical(std::uint64_t n, unsigned rho) const {
  return rad_S_rho(*factorization_of_D(n), exceptional_.primes(), rho);
}

EdsContext EdsContext::with_added_prime(const Nat& p) const {
  EdsContext copy = *this;
  copy.exceptional_.add(p, Provenance::user_added);
  return copy;
}

LawReport check_valuation_law(const EdsContext& ctx, std::uint64_t p, std::uint64_t n_max) {
  if (ctx.exceptional().contains(p)) {
    throw Error(ErrorKind::PreconditionFailed, "p=" + std::to_string(p) + " lies in the exceptional set");
  }
  if (!is_prime_u64(p)) throw Error(ErrorKind::InvalidInput, std::to_string(p) + " is not prime");
  if (n_max > ctx.table().size()) ctx.table().term(n_max);  // TableMiss

  LawReport report;
  report.p = p;
  report.n_max = n_max;
  report.r_p = ctx.reduction_order(p);
  const Nat pz = from_u64(p);
  const std::uint64_t r = report.r_p;

  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const unsigned observed = valuation(ctx.table().D(n), pz);
    const bool divisible = n % r == 0;
    if ((observed > 0) != divisible) {
      report.violations.push_back({n, 1, observed, divisible ? 1u : 0u});
      continue;
    }
    if (divisible) {
      const unsigned predicted = valuation(ctx.table().D(r), pz) + valuation(n / r, p);
      if (observed != predicted) report.violations.push_back({n, 2, observed, predicted});
    }
  }
  return report;
}

unsigned valuation_via_law(const EdsContext& ctx, std::uint64_t p, std::uint64_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidInput, "EDS index must be positive");
  if (ctx.exceptional().contains(p)) {
    throw Error(ErrorKind::PreconditionFailed, "p=" + std::to_string(p) + " lies in the exceptional set");
  }
  const std::uint64_t r = ctx.reduction_order(p);
  if (n % r != 0) return 0;
  const Nat& D_r = ctx.table().D(r);
  return valuation(D_r, from_u64(p)) + valuation(n / r, p);
}

ExceptionalSet absorb_violations(const ExceptionalSet& S, const std::vector<LawReport>& reports) {
  ExceptionalSet out = S;
  for (const LawReport& r : reports) {
    if (!r.holds()) out.add(from_u64(r.p), Provenance::user_added);
  }
  return out;
}

DetectingResult detecting_primes(const EdsContext& ctx, std::uint64_t ell, unsigned rho) {
  if (!is_prime_u64(ell)) throw Error(ErrorKind::InvalidInput, "detecting primes need a prime index");
  if (rho < 2 || !is_prime_u64(rho)) throw Error(ErrorKind::InvalidInput, "rho must be prime");

  DetectingResult result;
  result.ell = ell;
  result.rho = rho;
  const Nat& D = ctx.table().D(ell);
  const std::vector<Nat> sieved = ctx.sieve_order_primes(ell);
  const auto factorization = ctx.factorization_of_D(ell);
  result.complete = factorization->complete();

  for (const Nat& p : sieved) {
    if (!mpz_divisible_p(D.get_mpz_t(), p.get_mpz_t())) {
      result.notes.push_back("p=" + to_decimal(p) + " has reduction order " + std::to_string(ell) +
                             " but does not divide D_ell: valuation law fails, S too small");
    }
  }

  for (const auto& [p, e] : factorization->factors) {
    if (ctx.exceptional().contains(p) || e % rho == 0) continue;
    DetectingPrime dp;
    dp.p = p;
    dp.valuation = e;
    dp.found_by_sieve = std::find(sieved.begin(), sieved.end(), p) != sieved.end();

    dp.primitive = true;
    for (std::uint64_t m = 1; m < ell; ++m) {
      if (mpz_divisible_p(ctx.table().D(m).get_mpz_t(), p.get_mpz_t())) {
        dp.primitive = false;
        break;
      }
    }

    if (auto small = to_u64(p); small && *small < kFieldLimit) {
      const FpPoint reduced = reduce_point(ctx.curve(), ctx.point(), *small);
      dp.order_verified =
          !reduced.infinity && ReducedCurve(ctx.curve(), *small).multiply(reduced, ell).infinity;
      if (dp.order_verified && *small < ctx.limits().naive_below) {
        dp.order_verified = ctx.reduction_order(*small) == ell;
      }
    } else {
      // [ell]P reduces to O exactly when p | D_ell, and P does not when p does not divide D_1.
      dp.order_verified = !mpz_divisible_p(ctx.table().D(1).get_mpz_t(), p.get_mpz_t());
      result.notes.push_back("order of P mod " + to_decimal(p) + " read from the table (beyond field arithmetic)");
    }
    if (!dp.primitive || !dp.order_verified) {
      result.notes.push_back("p=" + to_decimal(p) + " fails the order/primitivity check: S too small or model not minimal");
    }
    result.primes.push_back(std::move(dp));
  }
  if (!result.complete) {
    result.notes.push_back("D_ell only partially factored; cofactor " + to_decimal(factorization->cofactor) +
                           " may hide further detecting primes");
  }
  return result;
}

ProbeReport probe_detecting(const EdsContext& ctx, std::uint64_t ell_min, std::uint64_t ell_max, unsigned rho) {
  ProbeReport report;
  report.rho = rho;
  for (std::uint64_t ell = std::max<std::uint64_t>(ell_min, 2); ell <= ell_max; ++ell) {
    if (!is_prime_u64(ell)) continue;
    DetectingResult r = detecting_primes(ctx, ell, rho);
    if (r.primes.empty()) report.largest_without = ell;
    report.results.push_back(std::move(r));
  }
  return report;
}

}  // namespace eds
