#include "eds/obstruction.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

#include "eds/error.hpp"

namespace eds {
namespace {

std::string dec(std::uint64_t v) { return std::to_string(v); }

std::string positions(const std::vector<std::size_t>& I) {
  std::string out = "[";
  for (std::size_t j = 0; j < I.size(); ++j) out += (j ? "," : "") + std::to_string(I[j]);
  return out + "]";
}

void require_rho(unsigned rho) {
  if (rho < 2 || !is_prime_u64(rho)) throw Error(ErrorKind::InvalidInput, "rho must be prime");
}

void require_prime_index(std::uint64_t ell) {
  if (!is_prime_u64(ell)) throw Error(ErrorKind::InvalidInput, "ell=" + dec(ell) + " is not prime");
}

unsigned valuation_of(std::uint64_t x, const Nat& p) {
  const auto small = to_u64(p);
  return small ? valuation(x, *small) : 0;
}

unsigned mod_rho(long long x, unsigned rho) {
  const long long r = x % static_cast<long long>(rho);
  return static_cast<unsigned>(r < 0 ? r + rho : r);
}

void finalize(ObstructionVerdict& v) {
  if (v.verdict != Verdict::inconclusive && !v.hypotheses_verified()) {
    v.notes.push_back("verdict withheld: not every hypothesis was verified");
    v.verdict = Verdict::inconclusive;
  }
}

Nat quotient_product(const IndexTuple& n, const std::vector<std::size_t>& I, std::uint64_t ell) {
  Nat q = 1;
  for (std::size_t i : I) q *= from_u64(n[i] / ell);
  return q;
}

// The valuation law at p with r_p = ell, checked on D_ell and the tuple.
// nullopt when an index lies beyond the table.
std::optional<bool> law_on_tuple(const EdsContext& ctx, const Nat& p, std::uint64_t ell, const IndexTuple& n) {
  const EdsTable& table = ctx.table();
  const unsigned base = valuation(table.D(ell), p);
  for (std::uint64_t m : n) {
    if (!table.covers(m)) return std::nullopt;
    const unsigned observed = valuation(table.D(m), p);
    const unsigned predicted = m % ell == 0 ? base + valuation_of(m / ell, p) : 0;
    if (observed != predicted) return false;
  }
  return true;
}

bool add_law_hypothesis(const EdsContext& ctx, ObstructionVerdict& v, const Nat& p, std::uint64_t ell,
                        const IndexTuple& n) {
  const std::string name = "valuation law at " + to_decimal(p) + " on the tuple";
  const auto law = law_on_tuple(ctx, p, ell, n);
  if (!law) {
    v.hypotheses.push_back({name, true});
    v.notes.push_back(name + ": indices beyond the table, taken from p outside S");
    return true;
  }
  v.hypotheses.push_back({name, *law});
  if (!*law) v.notes.push_back(name + " fails: S too small for this model");
  return *law;
}

// rad_{S,rho}(D_ell) > 1. Strict mode takes it from ell > L_rho; exploration
// mode needs a detecting prime of order ell, primitive, obeying the law on n.
bool detecting_input(const EdsContext& ctx, std::uint64_t ell, unsigned rho, const Thresholds& t,
                     const IndexTuple& n, ObstructionVerdict& v) {
  if (t.strict) {
    const bool ok = ell > t.L_rho;
    v.hypotheses.push_back({"ell=" + dec(ell) + " > L_rho=" + dec(t.L_rho), ok});
    return ok;
  }
  const DetectingResult r = detecting_primes(ctx, ell, rho);
  for (const DetectingPrime& dp : r.primes) {
    if (!dp.order_verified || !dp.primitive) continue;
    if (law_on_tuple(ctx, dp.p, ell, n) == false) continue;
    v.hypotheses.push_back({"detecting prime for ell=" + dec(ell) + " verified", true});
    v.witnesses.emplace_back("detecting prime for " + dec(ell), to_decimal(dp.p));
    return true;
  }
  v.hypotheses.push_back({"detecting prime for ell=" + dec(ell) + " verified", false});
  v.notes.push_back("no verified detecting prime for ell=" + dec(ell));
  return false;
}

struct TopPrime {
  std::uint64_t ell = 0;
  unsigned exponent = 0;
  std::uint64_t cofactor = 1;  // m / ell
};

TopPrime top_prime(std::uint64_t m) {
  TopPrime out;
  if (m < 2) return out;
  const Factorization f = factorize(from_u64(m));
  out.ell = *to_u64(f.factors.back().prime);
  out.exponent = f.factors.back().exponent;
  out.cofactor = m / out.ell;
  return out;
}

bool smooth(std::uint64_t x, double B) { return is_B_smooth(from_u64(x), B) == Smoothness::yes; }

// v_ell(n_i) = 1 and ell = P^+(n_i) for i in I; throws otherwise.
void require_top_prime(const IndexTuple& n, const std::vector<std::size_t>& I, std::uint64_t ell,
                       std::optional<double> smooth_bound) {
  for (std::size_t i : I) {
    const TopPrime tp = top_prime(n[i]);
    const std::string at = "n[" + std::to_string(i) + "]=" + dec(n[i]);
    if (valuation(n[i], ell) != 1) throw Error(ErrorKind::HypothesisViolated, at + ": v_ell(n_i) != 1");
    if (tp.ell != ell) throw Error(ErrorKind::HypothesisViolated, at + ": ell is not the largest prime factor");
    if (smooth_bound && !smooth(n[i] / ell, *smooth_bound)) {
      throw Error(ErrorKind::HypothesisViolated, at + ": n_i/ell is not B-smooth");
    }
  }
}

void require_pair(const EdsContext& ctx, const Nat& p, std::uint64_t ell, const char* what) {
  if (!is_prime(p)) throw Error(ErrorKind::InvalidInput, to_decimal(p) + " is not prime");
  if (ctx.exceptional().contains(p)) {
    throw Error(ErrorKind::PreconditionFailed, std::string(what) + "=" + to_decimal(p) + " lies in S");
  }
  if (!mpz_divisible_p(ctx.table().D(ell).get_mpz_t(), p.get_mpz_t())) {
    throw Error(ErrorKind::PreconditionFailed, std::string(what) + "=" + to_decimal(p) + " does not divide D_" + dec(ell));
  }
}

void attach_oracle(const EdsContext& ctx, ObstructionVerdict& v, std::uint64_t m, std::optional<std::uint64_t> n,
                   unsigned rho) {
  if (!n || !ctx.table().covers(m) || !ctx.table().covers(*n)) return;
  v.oracle_is_power = is_rho_power(ctx.table().D(m) * ctx.table().D(*n), rho);
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

bool ObstructionVerdict::hypotheses_verified() const {
  return std::all_of(hypotheses.begin(), hypotheses.end(), [](const Hypothesis& h) { return h.satisfied; });
}

void Thresholds::validate() const {
  if (!(B >= 2.0) || !std::isfinite(B)) throw Error(ErrorKind::InvalidInput, "B must be at least 2");
}

bool hasse_admissible(std::uint64_t ell, const Nat& q) {
  const Nat l = from_u64(ell);
  if (l <= q + 1) return true;
  const Nat gap = l - q - 1;
  return gap * gap <= 4 * q;
}

bool exceeds_smooth_threshold(std::uint64_t ell, double B) {
  const long double gap = static_cast<long double>(ell) - B - 1;
  return gap > 0 && gap * gap > 4 * static_cast<long double>(B);
}

bool exceeds_cluster_threshold(std::uint64_t ell, const Thresholds& t) {
  return ell > t.L_rho && exceeds_smooth_threshold(ell, t.B);
}

bool below_gap_bound(const Nat& x, std::uint64_t ell) {
  // x < ell + 1 - 2 sqrt(ell)  <=>  s = ell + 1 - x > 0 and s^2 > 4 ell
  const Nat s = from_u64(ell) + 1 - x;
  return s > 0 && s * s > 4 * from_u64(ell);
}

ObstructionVerdict absorption_congruence(const EdsContext& ctx, const IndexTuple& n, std::uint64_t ell,
                                         const Nat& p, unsigned rho) {
  validate_tuple(n);
  require_rho(rho);
  require_prime_index(ell);
  require_pair(ctx, p, ell, "p");

  ObstructionVerdict v;
  v.statement = "absorption_congruence";
  v.hypotheses.push_back({"p outside S, p | D_ell", true});
  add_law_hypothesis(ctx, v, p, ell, n);

  const auto I = incidence_set(n, ell);
  const unsigned vD = valuation(ctx.table().D(ell), p);
  unsigned long long sum = static_cast<unsigned long long>(I.size()) * vD;
  for (std::size_t i : I) sum += valuation_of(n[i] / ell, p);

  v.witnesses = {{"ell", dec(ell)}, {"p", to_decimal(p)}, {"I_ell", positions(I)},
                 {"v_p(D_ell)", std::to_string(vD)}, {"sum", std::to_string(sum)},
                 {"sum mod rho", std::to_string(sum % rho)}};
  v.verdict = sum % rho == 0 ? Verdict::holds : Verdict::fails;
  finalize(v);
  return v;
}

ObstructionVerdict incidence_pairing(const EdsContext& ctx, const IndexTuple& n, std::uint64_t ell,
                                     const Nat& q, unsigned rho) {
  validate_tuple(n);
  require_rho(rho);
  require_prime_index(ell);
  require_pair(ctx, q, ell, "q");

  ObstructionVerdict v;
  v.statement = "incidence_pairing";
  v.hypotheses.push_back({"q outside S, q | D_ell", true});
  add_law_hypothesis(ctx, v, q, ell, n);

  const auto I = incidence_set(n, ell);
  long long lhs = 0;
  for (std::size_t i : I) lhs += valuation_of(n[i], q);
  const long long vq_ell = valuation_of(ell, q);
  const long long vq_D = valuation(ctx.table().D(ell), q);
  const long long rhs = static_cast<long long>(I.size()) * (vq_ell - vq_D);

  v.witnesses = {{"ell", dec(ell)}, {"q", to_decimal(q)}, {"I_ell", positions(I)},
                 {"lhs", std::to_string(mod_rho(lhs, rho))}, {"rhs", std::to_string(mod_rho(rhs, rho))}};
  v.verdict = mod_rho(lhs, rho) == mod_rho(rhs, rho) ? Verdict::holds : Verdict::fails;
  finalize(v);
  return v;
}

ObstructionVerdict squarefree_incidence(const EdsContext& ctx, const IndexTuple& n, std::uint64_t ell,
                                        const Nat& q, unsigned rho) {
  validate_tuple(n);
  for (std::uint64_t m : n) {
    if (!is_squarefree(m)) throw Error(ErrorKind::NotSquarefree, dec(m) + " is not squarefree");
  }
  require_rho(rho);
  require_prime_index(ell);
  if (q == from_u64(ell)) throw Error(ErrorKind::PreconditionFailed, "q must differ from ell");
  require_pair(ctx, q, ell, "q");

  ObstructionVerdict v;
  v.statement = "squarefree_incidence";
  v.hypotheses.push_back({"entries squarefree, q != ell, q outside S, q | D_ell", true});
  add_law_hypothesis(ctx, v, q, ell, n);

  const auto I = incidence_set(n, ell);
  long long both = 0;
  if (const auto small = to_u64(q)) {
    for (std::size_t i : I) both += (n[i] / ell) % *small == 0 ? 1 : 0;
  }
  const long long vq_D = valuation(ctx.table().D(ell), q);
  const long long rhs = -static_cast<long long>(I.size()) * vq_D;

  v.witnesses = {{"N_ell", std::to_string(I.size())}, {"N_ell_q", std::to_string(both)},
                 {"v_q(D_ell)", std::to_string(vq_D)}, {"rhs mod rho", std::to_string(mod_rho(rhs, rho))}};
  v.verdict = mod_rho(both, rho) == mod_rho(rhs, rho) ? Verdict::holds : Verdict::fails;
  finalize(v);
  return v;
}

ObstructionVerdict prime_support_check(const EdsContext& ctx, const IndexTuple& n, std::uint64_t ell, unsigned rho) {
  validate_tuple(n);
  require_rho(rho);
  require_prime_index(ell);

  ObstructionVerdict v;
  v.statement = "prime_support_check";
  const auto I = incidence_set(n, ell);
  v.witnesses.emplace_back("I_ell", positions(I));
  const bool balanced = I.size() % rho == 0;
  v.hypotheses.push_back({"rho does not divide |I_ell|", !balanced});
  if (balanced) {
    v.notes.push_back("|I_ell| = " + std::to_string(I.size()) + " is divisible by rho: statement is vacuous");
    return v;
  }

  const auto f = ctx.factorization_of_D(ell);
  const Bounded rad = rad_S_rho(*f, ctx.exceptional().primes(), rho);
  const Nat quotient = quotient_product(n, I, ell);
  v.witnesses.emplace_back("rad_S_rho(D_ell)", to_decimal(rad.value));
  v.witnesses.emplace_back("rad certainty", std::string(to_string(rad.certainty)));
  v.witnesses.emplace_back("prod n_i/ell", to_decimal(quotient));

  bool top_prime_applies = true;
  for (std::size_t i : I) {
    top_prime_applies = top_prime_applies && valuation(n[i], ell) == 1 && top_prime(n[i]).ell == ell;
  }

  bool failed = false;
  bool unsound_input = false;
  for (const auto& [q, e] : f->factors) {
    if (ctx.exceptional().contains(q) || e % rho == 0) continue;
    if (law_on_tuple(ctx, q, ell, n) == false) {
      v.notes.push_back("valuation law fails at q=" + to_decimal(q) + ": S too small");
      unsound_input = true;
      continue;
    }
    if (!hasse_admissible(ell, q)) {
      v.notes.push_back("q=" + to_decimal(q) + " violates the Hasse bound: S inadequate");
      unsound_input = true;
      continue;
    }
    if (!mpz_divisible_p(quotient.get_mpz_t(), q.get_mpz_t())) {
      v.witnesses.emplace_back("radical prime not dividing quotient", to_decimal(q));
      failed = true;
    }
    if (top_prime_applies && q >= from_u64(ell)) {
      v.witnesses.emplace_back("radical prime outside top-prime interval", to_decimal(q));
      failed = true;
    }
  }

  if (failed) {
    v.verdict = Verdict::fails;
  } else if (unsound_input) {
    v.verdict = Verdict::inconclusive;
  } else if (!rad.certain()) {
    v.notes.push_back("D_ell only partially factored; divisibility shown for the certain part");
    v.verdict = Verdict::inconclusive;
  } else {
    v.verdict = Verdict::holds;
  }
  finalize(v);
  return v;
}

ObstructionVerdict multiplicity_obstruction(const EdsContext& ctx, const IndexTuple& n, std::uint64_t ell,
                                            const Nat& q, unsigned rho) {
  validate_tuple(n);
  require_rho(rho);
  require_prime_index(ell);
  if (q == from_u64(ell)) throw Error(ErrorKind::PreconditionFailed, "q must differ from ell");
  require_pair(ctx, q, ell, "q");
  const unsigned vq_D = valuation(ctx.table().D(ell), q);
  if (vq_D % rho == 0) {
    throw Error(ErrorKind::PreconditionFailed, "q=" + to_decimal(q) + " does not divide rad_S_rho(D_ell)");
  }

  ObstructionVerdict v;
  v.statement = "multiplicity_obstruction";
  v.hypotheses.push_back({"q | rad_S_rho(D_ell), q != ell", true});
  add_law_hypothesis(ctx, v, q, ell, n);

  const auto I = incidence_set(n, ell);
  const Nat quotient = quotient_product(n, I, ell);
  const long long lhs = quotient == 0 ? 0 : valuation(quotient, q);
  const long long rhs = -static_cast<long long>(I.size()) * vq_D;
  v.witnesses = {{"I_ell", positions(I)}, {"v_q(prod n_i/ell)", std::to_string(lhs)},
                 {"rhs mod rho", std::to_string(mod_rho(rhs, rho))},
                 {"case", I.size() % rho == 0 ? "rho | |I_ell|" : "rho does not divide |I_ell|"}};
  v.verdict = mod_rho(lhs, rho) == mod_rho(rhs, rho) ? Verdict::holds : Verdict::fails;
  finalize(v);
  return v;
}

ObstructionVerdict smooth_cofactor_balance(const EdsContext& ctx, const IndexTuple& n, std::uint64_t ell,
                                           unsigned rho, const Thresholds& t) {
  validate_tuple(n);
  t.validate();
  require_rho(rho);
  require_prime_index(ell);
  if (!exceeds_cluster_threshold(ell, t)) {
    throw Error(ErrorKind::HypothesisViolated, "ell=" + dec(ell) + " is not above max(L_rho, (sqrt(B)+1)^2)");
  }
  const auto I = incidence_set(n, ell);
  require_top_prime(n, I, ell, t.B);

  ObstructionVerdict v;
  v.statement = "smooth_cofactor_balance";
  v.hypotheses.push_back({"top prime ell with B-smooth cofactors, ell above threshold", true});
  detecting_input(ctx, ell, rho, t, n, v);
  v.witnesses.emplace_back("|I_ell|", std::to_string(I.size()));
  v.verdict = I.size() % rho == 0 ? Verdict::holds : Verdict::fails;
  finalize(v);
  return v;
}

ClusterReport cluster_packing(const EdsContext& ctx, const IndexTuple& n, const std::vector<std::uint64_t>& lambda,
                              unsigned rho, const Thresholds& t) {
  validate_tuple(n);
  t.validate();
  require_rho(rho);

  ClusterReport report;
  report.rho = rho;
  report.k = n.size();
  ObstructionVerdict& v = report.verdict;
  v.statement = "cluster_packing";

  std::vector<std::uint64_t> candidates = lambda;
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (std::uint64_t ell : candidates) {
    try {
      require_prime_index(ell);
      if (!exceeds_cluster_threshold(ell, t)) {
        throw Error(ErrorKind::HypothesisViolated, "not above max(L_rho, (sqrt(B)+1)^2)");
      }
      require_top_prime(n, incidence_set(n, ell), ell, t.B);
      ObstructionVerdict scratch;
      if (!detecting_input(ctx, ell, rho, t, n, scratch)) {
        throw Error(ErrorKind::HypothesisViolated, "detecting input not verified");
      }
      report.lambda.push_back(ell);
      v.hypotheses.push_back({"hypotheses for ell=" + dec(ell), true});
      v.witnesses.insert(v.witnesses.end(), scratch.witnesses.begin(), scratch.witnesses.end());
    } catch (const Error& e) {
      report.dropped.emplace_back(ell, e.what());
      v.notes.push_back("ell=" + dec(ell) + " dropped: " + e.what());
    }
  }

  const IncidenceMatrix M(n, report.lambda, rho);
  report.lambda_star = M.nonzero_rows();
  report.weights = M.weights();
  report.times_ones = M.times_ones();
  report.rank = M.rank();
  const std::size_t star = report.lambda_star.size();
  report.conclusions = {
      std::all_of(report.times_ones.begin(), report.times_ones.end(), [](unsigned x) { return x == 0; }),
      M.disjoint_supports(),
      report.rank == star,
      star <= report.k / rho,
      report.k >= rho || star == 0,
  };

  for (std::size_t c = 0; c < 5; ++c) {
    v.witnesses.emplace_back("conclusion " + std::to_string(c + 1), report.conclusions[c] ? "holds" : "fails");
  }
  v.witnesses.emplace_back("|Lambda*|", std::to_string(star));
  v.witnesses.emplace_back("rank", std::to_string(report.rank));

  const bool all_hold = std::all_of(report.conclusions.begin(), report.conclusions.end(), [](bool b) { return b; });
  if (report.lambda.empty() && !candidates.empty()) {
    v.hypotheses.push_back({"some ell in Lambda satisfies the hypotheses", false});
  }
  v.verdict = all_hold ? Verdict::holds : Verdict::fails;
  finalize(v);
  return report;
}

ObstructionVerdict repeated_top_prime(const EdsContext& ctx, const IndexTuple& n, unsigned rho, const Thresholds& t) {
  validate_tuple(n);
  t.validate();
  require_rho(rho);

  std::map<std::uint64_t, std::size_t> multiplicity;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const TopPrime tp = top_prime(n[i]);
    const std::string at = "n[" + std::to_string(i) + "]=" + dec(n[i]);
    if (tp.ell == 0) throw Error(ErrorKind::HypothesisViolated, at + " has no prime factor");
    if (tp.exponent != 1) throw Error(ErrorKind::HypothesisViolated, at + ": top prime is repeated");
    if (!exceeds_cluster_threshold(tp.ell, t)) {
      throw Error(ErrorKind::HypothesisViolated, at + ": top prime not above max(L_rho, (sqrt(B)+1)^2)");
    }
    if (!smooth(tp.cofactor, t.B)) throw Error(ErrorKind::HypothesisViolated, at + ": cofactor not B-smooth");
    ++multiplicity[tp.ell];
  }

  ObstructionVerdict v;
  v.statement = "repeated_top_prime";
  v.hypotheses.push_back({"n_i = ell_i a_i, ell_i above threshold, a_i B-smooth", true});
  bool distinct = true;
  for (const auto& [ell, count] : multiplicity) {
    v.witnesses.emplace_back("multiplicity of " + dec(ell), std::to_string(count));
    distinct = distinct && count == 1;
  }
  if (distinct && !n.empty()) v.notes.push_back("top primes pairwise distinct");

  v.verdict = Verdict::holds;
  for (const auto& [ell, count] : multiplicity) {
    if (count % rho == 0) continue;
    ObstructionVerdict scratch;
    if (detecting_input(ctx, ell, rho, t, n, scratch)) {
      v.hypotheses.insert(v.hypotheses.end(), scratch.hypotheses.begin(), scratch.hypotheses.end());
      v.witnesses.insert(v.witnesses.end(), scratch.witnesses.begin(), scratch.witnesses.end());
      v.witnesses.emplace_back("unbalanced top prime", dec(ell));
      v.verdict = Verdict::fails;
      break;
    }
    v.notes.insert(v.notes.end(), scratch.notes.begin(), scratch.notes.end());
    v.verdict = Verdict::inconclusive;
  }
  finalize(v);
  return v;
}

namespace {

struct GapSetup {
  TopPrime tp;
  IndexTuple tuple;
};

GapSetup gap_setup(std::uint64_t m, std::optional<std::uint64_t> n, const Thresholds& t) {
  if (m < 2) throw Error(ErrorKind::HypothesisViolated, "m must have a prime factor");
  GapSetup s{top_prime(m), {m}};
  if (s.tp.exponent != 1) throw Error(ErrorKind::HypothesisViolated, "v_ell(m) != 1 for ell = P^+(m)");
  if (n) {
    if (*n == 0) throw Error(ErrorKind::InvalidInput, "n must be positive");
    if (std::gcd(m, *n) != 1) throw Error(ErrorKind::HypothesisViolated, "gcd(m, n) != 1");
    s.tuple.push_back(*n);
  }
  if (t.strict && s.tp.ell <= t.L_rho) throw Error(ErrorKind::HypothesisViolated, "ell <= L_rho");
  return s;
}

}  // namespace

ObstructionVerdict large_prime_gap(const EdsContext& ctx, std::uint64_t m, std::optional<std::uint64_t> n,
                                   unsigned rho, const Thresholds& t) {
  t.validate();
  require_rho(rho);
  const GapSetup s = gap_setup(m, n, t);
  const std::uint64_t ell = s.tp.ell;

  ObstructionVerdict v;
  v.statement = "large_prime_gap";
  v.hypotheses.push_back({"ell = P^+(m) with v_ell(m) = 1, gcd(m, n) = 1", true});
  detecting_input(ctx, ell, rho, t, s.tuple, v);
  v.witnesses.emplace_back("ell", dec(ell));
  v.witnesses.emplace_back("m/ell", dec(s.tp.cofactor));

  if (s.tp.cofactor == 1) {
    v.notes.push_back("m/ell = 1 has no prime factor to absorb a detecting prime");
    v.verdict = Verdict::fails;
  } else {
    const std::uint64_t top = top_prime(s.tp.cofactor).ell;
    v.witnesses.emplace_back("P^+(m/ell)", dec(top));
    v.verdict = below_gap_bound(from_u64(top), ell) ? Verdict::fails : Verdict::holds;
    if (v.verdict == Verdict::fails) v.notes.push_back("P^+(m/ell) < (sqrt(ell)-1)^2");
  }
  attach_oracle(ctx, v, m, n, rho);
  finalize(v);
  return v;
}

ObstructionVerdict smooth_cofactor_exclusion(const EdsContext& ctx, std::uint64_t m, std::optional<std::uint64_t> n,
                                             unsigned rho, const Thresholds& t) {
  t.validate();
  require_rho(rho);
  const GapSetup s = gap_setup(m, n, t);
  const std::uint64_t ell = s.tp.ell;
  if (!smooth(s.tp.cofactor, t.B)) throw Error(ErrorKind::HypothesisViolated, "m/ell is not B-smooth");

  ObstructionVerdict v;
  v.statement = "smooth_cofactor_exclusion";
  v.hypotheses.push_back({"ell = P^+(m), v_ell(m) = 1, m/ell B-smooth, gcd(m, n) = 1", true});
  v.witnesses.emplace_back("ell", dec(ell));
  if (!exceeds_cluster_threshold(ell, t)) {
    v.witnesses.emplace_back("ell <= max(L_rho, (sqrt(B)+1)^2)", "true");
    v.verdict = Verdict::holds;
  } else {
    detecting_input(ctx, ell, rho, t, s.tuple, v);
    v.witnesses.emplace_back("ell <= max(L_rho, (sqrt(B)+1)^2)", "false");
    v.verdict = Verdict::fails;
  }
  attach_oracle(ctx, v, m, n, rho);
  finalize(v);
  return v;
}

ObstructionVerdict radical_lower_bound(const EdsContext& ctx, const IndexTuple& n,
                                       const std::vector<std::uint64_t>& lambda, unsigned rho, const Thresholds& t) {
  validate_tuple(n);
  t.validate();
  require_rho(rho);

  std::vector<std::uint64_t> ells = lambda;
  std::sort(ells.begin(), ells.end());
  ells.erase(std::unique(ells.begin(), ells.end()), ells.end());

  ObstructionVerdict v;
  v.statement = "radical_lower_bound";
  Nat product = 1;
  for (std::uint64_t ell : ells) {
    require_prime_index(ell);
    const auto I = incidence_set(n, ell);
    if (I.size() % rho == 0) {
      throw Error(ErrorKind::HypothesisViolated, "rho divides |I_ell| for ell=" + dec(ell));
    }
    require_top_prime(n, I, ell, std::nullopt);
    if (t.strict && ell <= t.L_rho) throw Error(ErrorKind::HypothesisViolated, "ell <= L_rho");
    detecting_input(ctx, ell, rho, t, n, v);
    product *= quotient_product(n, I, ell);
  }
  v.hypotheses.push_back({"top-prime conditions for every ell in Lambda", true});

  bool coprime = true;
  for (std::size_t a = 0; a < ells.size(); ++a) {
    for (std::size_t b = a + 1; b < ells.size(); ++b) {
      const Nat g = gcd(ctx.detecting_radical(ells[a], rho).value, ctx.detecting_radical(ells[b], rho).value);
      if (g != 1) {
        coprime = false;
        v.notes.push_back("rad_S_rho(D_" + dec(ells[a]) + ") and rad_S_rho(D_" + dec(ells[b]) + ") share " +
                          to_decimal(g) + ": S inadequate");
      }
    }
  }
  v.hypotheses.push_back({"per-ell radicals pairwise coprime", coprime});

  constexpr mp_bitcnt_t kBits = 512;
  mpf_class bound(1, kBits);
  for (std::uint64_t ell : ells) {
    mpf_class root(from_u64(ell), kBits);
    root = sqrt(root) - 1;
    bound *= root * root;
  }
  const Bounded rad = radical(product, ctx.effort());
  const mpf_class rad_f(rad.value, kBits);

  std::ostringstream shown;
  shown << std::setprecision(12) << bound.get_d();
  v.witnesses.insert(v.witnesses.end(), {{"prod n_i/ell", to_decimal(product)},
                                         {"rad", to_decimal(rad.value)},
                                         {"rad certainty", std::string(to_string(rad.certainty))},
                                         {"bound", shown.str()}});
  if (rad_f >= bound) {
    v.verdict = Verdict::holds;
  } else if (rad.certain()) {
    v.verdict = Verdict::fails;
  } else {
    v.notes.push_back("quotient product only partially factored");
    v.verdict = Verdict::inconclusive;
  }
  finalize(v);
  return v;
}

}  // namespace eds
