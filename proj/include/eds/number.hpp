#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace eds {

// Arbitrary precision integers and rationals. `Nat` is an Int that is
// non-negative by contract; mpq_class keeps Rat canonical (lowest terms,
// positive denominator) after every arithmetic operation.
using Int = mpz_class;
using Nat = mpz_class;
using Rat = mpq_class;

struct NthRoot {
  Nat root;
  bool exact = false;
};

/// floor(x^(1/r)) by integer Newton iteration; `exact` iff root^r == x.
NthRoot int_nth_root(const Nat& x, unsigned r);

/// True iff x == y^rho for a positive integer y. Requires x >= 1.
bool is_rho_power(const Nat& x, unsigned rho);

/// Largest e with p^e | x. Sign of x is ignored; x must be nonzero.
unsigned valuation(const Int& x, const Int& p);
unsigned valuation(std::uint64_t x, std::uint64_t p);

/// floor(sqrt(x)) for 64-bit values.
std::uint64_t isqrt_u64(std::uint64_t x);

std::optional<std::uint64_t> to_u64(const Int& x);
Int from_u64(std::uint64_t x);

std::string to_decimal(const Int& x);
/// "num/den" (or a bare integer) as a canonical rational.
std::string to_fraction(const Rat& q);

Int parse_int(std::string_view text);
Rat parse_rat(std::string_view text);

/// Number of decimal digits of |x| (1 for zero).
std::size_t decimal_digits(const Int& x);

}  // namespace eds
