#include "eds/factor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "eds/error.hpp"

namespace eds {
namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint32_t kSieveLimit = 1'000'000;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

struct Budget {
  std::uint64_t rho_left;
  Clock::time_point deadline;

  bool exhausted() const { return rho_left == 0 || Clock::now() > deadline; }
};

// Brent's variant of Pollard rho. Returns a nontrivial divisor, or 0 when
// the budget runs out first.
Nat brent_split(const Nat& n, unsigned long c, Budget& budget) {
  constexpr std::uint64_t kBatch = 128;
  Nat y = 2, x, ys, q = 1, g = 1, diff;
  auto step = [&](Nat& v) {
    v = v * v + c;
    mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
  };

  std::uint64_t r = 1;
  do {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) step(y);
    std::uint64_t k = 0;
    while (k < r && g == 1) {
      ys = y;
      const std::uint64_t batch = std::min(kBatch, r - k);
      if (budget.rho_left < batch || Clock::now() > budget.deadline) {
        budget.rho_left = 0;
        return 0;
      }
      budget.rho_left -= batch;
      for (std::uint64_t i = 0; i < batch; ++i) {
        step(y);
        diff = x - y;
        q = q * diff;
        mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      k += batch;
    }
    r *= 2;
  } while (g == 1);

  if (g == n) {
    // The batch overshot; walk back one step at a time.
    do {
      step(ys);
      diff = x - ys;
      mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    } while (g == 1);
  }
  return g == n ? Nat(0) : g;
}

// Smallest-base perfect power decomposition n = base^exp with exp maximal.
std::pair<Nat, unsigned> perfect_power(const Nat& n) {
  if (!mpz_perfect_power_p(n.get_mpz_t())) return {n, 1};
  const unsigned max_exp = static_cast<unsigned>(mpz_sizeinbase(n.get_mpz_t(), 2));
  for (unsigned e = max_exp; e >= 2; --e) {
    NthRoot root = int_nth_root(n, e);
    if (root.exact && root.root > 1) return {root.root, e};
  }
  return {n, 1};
}

}  // namespace

std::string_view to_string(FactorStatus s) {
  return s == FactorStatus::complete ? "complete" : "partial";
}

std::string_view to_string(Certainty c) {
  return c == Certainty::certain ? "certain" : "lower_bound";
}

std::string_view to_string(Smoothness s) {
  switch (s) {
    case Smoothness::yes: return "yes";
    case Smoothness::no: return "no";
    case Smoothness::unknown: return "unknown";
  }
  return "unknown";
}

Effort Effort::parse(std::string_view spec) {
  Effort effort;
  std::string text(spec);
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::InvalidInput, "effort item without '=': " + item);
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      std::size_t used = 0;
      if (key == "trial") {
        effort.trial_bound = static_cast<std::uint64_t>(std::stod(value, &used));
      } else if (key == "rho") {
        effort.rho_iterations = static_cast<std::uint64_t>(std::stod(value, &used));
      } else if (key == "seconds") {
        effort.wall_clock = std::chrono::duration<double>(std::stod(value, &used));
      } else {
        throw Error(ErrorKind::InvalidInput, "unknown effort key: " + key);
      }
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InvalidInput, "bad effort value: " + item);
    }
  }
  if (effort.trial_bound < 2 || effort.wall_clock.count() <= 0) {
    throw Error(ErrorKind::InvalidInput, "effort values must be positive");
  }
  return effort;
}

std::string Effort::to_string() const {
  std::ostringstream os;
  os << "trial=" << trial_bound << ",rho=" << rho_iterations << ",seconds=" << wall_clock.count();
  return os.str();
}

Nat Factorization::product() const {
  Nat out = cofactor;
  Nat pw;
  for (const auto& [p, e] : factors) {
    mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), e);
    out *= pw;
  }
  return out;
}

unsigned Factorization::exponent_of(const Nat& p) const {
  for (const auto& f : factors) {
    if (f.prime == p) return f.exponent;
  }
  return 0;
}

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> table = [] {
    std::vector<bool> composite(kSieveLimit + 1, false);
    std::vector<std::uint32_t> primes;
    primes.reserve(78'500);
    for (std::uint32_t i = 2; i <= kSieveLimit; ++i) {
      if (composite[i]) continue;
      primes.push_back(i);
      for (std::uint64_t j = static_cast<std::uint64_t>(i) * i; j <= kSieveLimit; j += i) composite[j] = true;
    }
    return primes;
  }();
  return table;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These twelve bases are a deterministic witness set below 3.3 * 10^24.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

bool is_prime(const Nat& n) {
  if (auto small = to_u64(n)) return is_prime_u64(*small);
  if (sgn(n) <= 0) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 32) > 0;
}

Factorization factorize_with_hints(const Nat& x, std::span<const Nat> hints, const Effort& effort) {
  if (x < 1) throw Error(ErrorKind::InvalidInput, "factorize requires x >= 1");

  std::map<Nat, unsigned> found;
  Nat rest = x;

  for (const Nat& h : hints) {
    if (h < 2) continue;
    unsigned e = static_cast<unsigned>(mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), h.get_mpz_t()));
    if (e > 0) found[h] += e;
  }

  // Trial division.
  const std::uint64_t bound = effort.trial_bound;
  bool rest_is_prime_or_one = false;
  for (std::uint32_t p : small_primes()) {
    if (p > bound) break;
    if (Nat(p) * p > rest) {
      rest_is_prime_or_one = true;
      break;
    }
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      unsigned e = 0;
      do {
        mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
        ++e;
      } while (mpz_divisible_ui_p(rest.get_mpz_t(), p));
      found[Nat(p)] += e;
    }
  }
  if (!rest_is_prime_or_one && bound > kSieveLimit) {
    for (std::uint64_t d = kSieveLimit + 1; d <= bound; d += 2) {
      if (Nat(from_u64(d)) * d > rest) {
        rest_is_prime_or_one = true;
        break;
      }
      const Nat dz = from_u64(d);
      unsigned e = static_cast<unsigned>(mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), dz.get_mpz_t()));
      if (e > 0) found[dz] += e;
    }
  }

  Factorization out;
  std::vector<std::pair<Nat, unsigned>> pending;
  if (rest > 1) {
    if (rest_is_prime_or_one) {
      found[rest] += 1;
    } else {
      pending.emplace_back(rest, 1);
    }
  }

  Budget budget{effort.rho_iterations,
                Clock::now() + std::chrono::duration_cast<Clock::duration>(effort.wall_clock)};
  Nat unfactored = 1;
  while (!pending.empty()) {
    auto [n, mult] = pending.back();
    pending.pop_back();
    if (n == 1) continue;
    if (is_prime(n)) {
      found[n] += mult;
      continue;
    }
    auto [base, e] = perfect_power(n);
    if (e > 1) {
      pending.emplace_back(base, mult * e);
      continue;
    }
    Nat d = 0;
    for (unsigned long c = 1; d == 0 && !budget.exhausted() && c < 64; ++c) d = brent_split(n, c, budget);
    if (d == 0) {
      Nat pw;
      mpz_pow_ui(pw.get_mpz_t(), n.get_mpz_t(), mult);
      unfactored *= pw;
      continue;
    }
    pending.emplace_back(d, mult);
    pending.emplace_back(n / d, mult);
  }

  // A found prime may still hide inside an unsplit composite.
  for (auto& [p, e] : found) {
    e += static_cast<unsigned>(mpz_remove(unfactored.get_mpz_t(), unfactored.get_mpz_t(), p.get_mpz_t()));
  }

  for (auto& [p, e] : found) out.factors.push_back({p, e});
  out.cofactor = unfactored;
  out.status = unfactored == 1 ? FactorStatus::complete : FactorStatus::partial;
  return out;
}

Factorization factorize(const Nat& x, const Effort& effort) {
  return factorize_with_hints(x, {}, effort);
}

Bounded rad_S_rho(const Factorization& f, const PrimeSet& S, unsigned rho) {
  if (rho < 2) throw Error(ErrorKind::InvalidInput, "rho must be a prime");
  Nat value = 1;
  for (const auto& [p, e] : f.factors) {
    if (e % rho != 0 && !S.contains(p)) value *= p;
  }
  return {value, f.complete() ? Certainty::certain : Certainty::lower_bound};
}

Bounded rad_S_rho(const Nat& x, const PrimeSet& S, unsigned rho, const Effort& effort) {
  return rad_S_rho(factorize(x, effort), S, rho);
}

Bounded sqf_S(const Nat& x, const PrimeSet& S, const Effort& effort) { return rad_S_rho(x, S, 2, effort); }

Bounded radical(const Nat& x, const Effort& effort) {
  Factorization f = factorize(x, effort);
  Nat value = 1;
  for (const auto& pp : f.factors) value *= pp.prime;
  return {value, f.complete() ? Certainty::certain : Certainty::lower_bound};
}

Bounded largest_prime_factor(const Nat& x, const Effort& effort) {
  Factorization f = factorize(x, effort);
  Nat value = f.factors.empty() ? Nat(1) : f.factors.back().prime;
  return {value, f.complete() ? Certainty::certain : Certainty::lower_bound};
}

Smoothness is_B_smooth(const Nat& x, double B, const Effort& effort) {
  if (x < 1) throw Error(ErrorKind::InvalidInput, "is_B_smooth requires x >= 1");
  if (!(B >= 2.0)) throw Error(ErrorKind::InvalidInput, "smoothness bound must be >= 2");
  constexpr std::uint64_t kTrialCeiling = 20'000'000;
  const std::uint64_t bound =
      B >= 1.8e19 ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(std::floor(B));

  Nat rest = x;
  auto conclude_prime_or_one = [&] {
    if (rest == 1) return Smoothness::yes;
    return rest <= from_u64(bound) ? Smoothness::yes : Smoothness::no;
  };
  for (std::uint32_t p : small_primes()) {
    if (p > bound) return rest == 1 ? Smoothness::yes : Smoothness::no;
    if (Nat(p) * p > rest) return conclude_prime_or_one();
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
  }
  for (std::uint64_t d = kSieveLimit + 1; d <= std::min(bound, kTrialCeiling); d += 2) {
    const Nat dz = from_u64(d);
    if (dz * dz > rest) return conclude_prime_or_one();
    mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), dz.get_mpz_t());
  }
  if (bound <= kTrialCeiling) return rest == 1 ? Smoothness::yes : Smoothness::no;

  Factorization f = factorize(rest, effort);
  if (!f.complete()) return Smoothness::unknown;
  const Nat top = f.factors.empty() ? Nat(1) : f.factors.back().prime;
  return top <= from_u64(bound) ? Smoothness::yes : Smoothness::no;
}

bool is_squarefree(std::uint64_t n) {
  if (n == 0) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return false;
    }
  }
  return true;
}

}  // namespace eds
