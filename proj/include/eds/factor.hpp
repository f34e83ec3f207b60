#pragma once

#include <chrono>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eds/number.hpp"

namespace eds {

/// Work budget for a single factorization.
struct Effort {
  std::uint64_t trial_bound = 1'000'000;
  std::uint64_t rho_iterations = 10'000'000;
  std::chrono::duration<double> wall_clock{60.0};

  /// Parses "trial=N,rho=N,seconds=S" (any subset, any order).
  static Effort parse(std::string_view spec);
  std::string to_string() const;
};

struct PrimePower {
  Nat prime;
  unsigned exponent = 0;
};

enum class FactorStatus { complete, partial };

/// prod(prime^exponent) * cofactor == input. A cofactor other than 1 is
/// composite (or of unknown structure) and forces status partial.
struct Factorization {
  std::vector<PrimePower> factors;  // sorted by prime, primes distinct
  Nat cofactor = 1;
  FactorStatus status = FactorStatus::complete;

  bool complete() const { return status == FactorStatus::complete; }
  Nat product() const;
  unsigned exponent_of(const Nat& p) const;
};

using PrimeSet = std::set<Nat>;

enum class Certainty { certain, lower_bound };

/// A value computed from a possibly partial factorization. For radicals a
/// lower_bound value divides the true value.
struct Bounded {
  Nat value;
  Certainty certainty = Certainty::certain;

  bool certain() const { return certainty == Certainty::certain; }
};

enum class Smoothness { yes, no, unknown };

std::string_view to_string(FactorStatus s);
std::string_view to_string(Certainty c);
std::string_view to_string(Smoothness s);

/// Read-only table of primes below 10^6, built once on first use.
const std::vector<std::uint32_t>& small_primes();

bool is_prime_u64(std::uint64_t n);
/// Deterministic below 2^64, strong probable-prime rounds above.
bool is_prime(const Nat& n);

Factorization factorize(const Nat& x, const Effort& effort = {});

/// Divides out the given primes first (e.g. primes located by a sieve),
/// then factors the remainder generically.
Factorization factorize_with_hints(const Nat& x, std::span<const Nat> hints,
                                   const Effort& effort = {});

/// Product of primes p not in S with rho not dividing v_p(x).
Bounded rad_S_rho(const Factorization& f, const PrimeSet& S, unsigned rho);
Bounded rad_S_rho(const Nat& x, const PrimeSet& S, unsigned rho, const Effort& effort = {});
Bounded sqf_S(const Nat& x, const PrimeSet& S, const Effort& effort = {});

/// Ordinary radical prod_{p | x} p.
Bounded radical(const Nat& x, const Effort& effort = {});

/// P^+(x) with P^+(1) = 1; lower_bound when the factorization is partial.
Bounded largest_prime_factor(const Nat& x, const Effort& effort = {});

/// B-smoothness by trial division up to B; `unknown` only if B is beyond
/// what trial division can settle and the fallback factorization is partial.
Smoothness is_B_smooth(const Nat& x, double B, const Effort& effort = {});

bool is_squarefree(std::uint64_t n);

}  // namespace eds
