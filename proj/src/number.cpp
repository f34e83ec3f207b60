#include "eds/number.hpp"

#include <cctype>

#include "eds/error.hpp"

namespace eds {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::InvalidCurve: return "InvalidCurve";
    case ErrorKind::BadReduction: return "BadReduction";
    case ErrorKind::PrimeTooLarge: return "PrimeTooLarge";
    case ErrorKind::TrivialReduction: return "TrivialReduction";
    case ErrorKind::AmbiguousOrder: return "AmbiguousOrder";
    case ErrorKind::TorsionPoint: return "TorsionPoint";
    case ErrorKind::NonSquareDenominator: return "NonSquareDenominator";
    case ErrorKind::GrowthLimitExceeded: return "GrowthLimitExceeded";
    case ErrorKind::TableMiss: return "TableMiss";
    case ErrorKind::TableMismatch: return "TableMismatch";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::NotSquarefree: return "NotSquarefree";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
  }
  return "Unknown";
}

NthRoot int_nth_root(const Nat& x, unsigned r) {
  if (r == 0) throw Error(ErrorKind::InvalidInput, "root degree must be positive");
  if (sgn(x) < 0) throw Error(ErrorKind::InvalidInput, "nth root of a negative number");
  if (r == 1 || x <= 1) return {x, true};

  // Seed strictly above the root: 2^ceil(bits/r) > x^(1/r).
  const std::size_t bits = mpz_sizeinbase(x.get_mpz_t(), 2);
  Nat guess = 1;
  guess <<= static_cast<mp_bitcnt_t>((bits + r - 1) / r);

  // Newton steps decrease monotonically while above the floor root.
  Nat power, next;
  while (true) {
    mpz_pow_ui(power.get_mpz_t(), guess.get_mpz_t(), r - 1);
    next = ((r - 1) * guess + x / power) / r;
    if (next >= guess) break;
    guess = next;
  }
  mpz_pow_ui(power.get_mpz_t(), guess.get_mpz_t(), r);
  return {guess, power == x};
}

bool is_rho_power(const Nat& x, unsigned rho) {
  if (x < 1) throw Error(ErrorKind::InvalidInput, "is_rho_power requires x >= 1");
  return int_nth_root(x, rho).exact;
}

unsigned valuation(const Int& x, const Int& p) {
  if (sgn(x) == 0) throw Error(ErrorKind::InvalidInput, "valuation of zero");
  if (p < 2) throw Error(ErrorKind::InvalidInput, "valuation base must be >= 2");
  Int rest = abs(x);
  return static_cast<unsigned>(mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t()));
}

unsigned valuation(std::uint64_t x, std::uint64_t p) {
  if (x == 0) throw Error(ErrorKind::InvalidInput, "valuation of zero");
  if (p < 2) throw Error(ErrorKind::InvalidInput, "valuation base must be >= 2");
  unsigned e = 0;
  while (x % p == 0) {
    x /= p;
    ++e;
  }
  return e;
}

std::uint64_t isqrt_u64(std::uint64_t x) {
  Int v = from_u64(x);
  mpz_sqrt(v.get_mpz_t(), v.get_mpz_t());
  return *to_u64(v);
}

std::optional<std::uint64_t> to_u64(const Int& x) {
  if (sgn(x) < 0 || mpz_sizeinbase(x.get_mpz_t(), 2) > 64) return std::nullopt;
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, x.get_mpz_t());
  return out;
}

Int from_u64(std::uint64_t x) {
  Int out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(x), 0, 0, &x);
  return out;
}

std::string to_decimal(const Int& x) { return x.get_str(10); }

std::string to_fraction(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str(10);
  return q.get_num().get_str(10) + "/" + q.get_den().get_str(10);
}

Int parse_int(std::string_view text) {
  std::size_t start = 0;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) start = 1;
  if (start == text.size()) throw Error(ErrorKind::InvalidInput, "empty integer literal");
  for (std::size_t i = start; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw Error(ErrorKind::InvalidInput, "not a decimal integer: '" + std::string(text) + "'");
    }
  }
  // GMP rejects a leading '+'.
  std::string digits(text[0] == '+' ? text.substr(1) : text);
  return Int(digits, 10);
}

Rat parse_rat(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rat(parse_int(text));
  Int num = parse_int(text.substr(0, slash));
  Int den = parse_int(text.substr(slash + 1));
  if (den == 0) throw Error(ErrorKind::InvalidInput, "zero denominator in '" + std::string(text) + "'");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

std::size_t decimal_digits(const Int& x) {
  if (x == 0) return 1;
  // mpz_sizeinbase may overshoot by one for base 10.
  std::size_t guess = mpz_sizeinbase(x.get_mpz_t(), 10);
  Int ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, guess - 1);
  return abs(x) >= ten_pow ? guess : guess - 1;
}

}  // namespace eds
