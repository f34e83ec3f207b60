#include "eds/fp_curve.hpp"

#include <random>

#include "eds/error.hpp"

namespace eds {
namespace {

constexpr std::uint64_t kFieldLimit = std::uint64_t{1} << 63;

int jacobi(std::uint64_t a, std::uint64_t n) {
  a %= n;
  int t = 1;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      const std::uint64_t r = n & 7;
      if (r == 3 || r == 5) t = -t;
    }
    std::swap(a, n);
    if ((a & 3) == 3 && (n & 3) == 3) t = -t;
    a %= n;
  }
  return n == 1 ? t : 0;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

}  // namespace

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
  if (p < 2) throw Error(ErrorKind::InvalidInput, "field modulus must be a prime");
  if (p >= kFieldLimit) throw Error(ErrorKind::PrimeTooLarge, "field arithmetic limited to p < 2^63");
}

std::uint64_t PrimeField::reduce(const Int& x) const {
  return mpz_fdiv_ui(x.get_mpz_t(), p_);
}

std::uint64_t PrimeField::reduce(const Rat& x) const {
  const std::uint64_t den = reduce(x.get_den());
  if (den == 0) throw Error(ErrorKind::InvalidInput, "denominator is not a unit mod p");
  return mul(reduce(x.get_num()), inv(den));
}

std::uint64_t PrimeField::add(std::uint64_t a, std::uint64_t b) const {
  const std::uint64_t s = a + b;
  return s >= p_ ? s - p_ : s;
}

std::uint64_t PrimeField::sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p_ - b; }

std::uint64_t PrimeField::mul(std::uint64_t a, std::uint64_t b) const {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p_);
}

std::uint64_t PrimeField::pow(std::uint64_t a, std::uint64_t e) const {
  std::uint64_t result = 1 % p_;
  while (e > 0) {
    if (e & 1) result = mul(result, a);
    a = mul(a, a);
    e >>= 1;
  }
  return result;
}

std::uint64_t PrimeField::inv(std::uint64_t a) const {
  if (a % p_ == 0) throw Error(ErrorKind::InvalidInput, "inverse of zero mod p");
  __int128 t = 0, new_t = 1;
  __int128 r = p_, new_r = a % p_;
  while (new_r != 0) {
    const __int128 q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (t < 0) t += p_;
  return static_cast<std::uint64_t>(t);
}

int PrimeField::legendre(std::uint64_t a) const {
  if (p_ == 2) return a % 2 == 0 ? 0 : 1;
  return jacobi(a, p_);
}

std::uint64_t PrimeField::sqrt(std::uint64_t a) const {
  a %= p_;
  if (a == 0 || p_ == 2) return a;
  if (legendre(a) != 1) throw Error(ErrorKind::InvalidInput, "not a quadratic residue");
  if (p_ % 4 == 3) return pow(a, (p_ + 1) / 4);

  std::uint64_t q = p_ - 1;
  unsigned s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  std::uint64_t z = 2;
  while (legendre(z) != -1) ++z;

  std::uint64_t m = s;
  std::uint64_t c = pow(z, q);
  std::uint64_t t = pow(a, q);
  std::uint64_t r = pow(a, (q + 1) / 2);
  while (t != 1) {
    std::uint64_t i = 0;
    std::uint64_t t2 = t;
    while (t2 != 1) {
      t2 = mul(t2, t2);
      ++i;
    }
    std::uint64_t b = c;
    for (std::uint64_t j = 0; j + 1 < m - i; ++j) b = mul(b, b);
    m = i;
    c = mul(b, b);
    t = mul(t, c);
    r = mul(r, b);
  }
  return r;
}

ReducedCurve::ReducedCurve(const WeierstrassCurve& E, std::uint64_t p) : field_(p) {
  if (mpz_divisible_ui_p(E.discriminant().get_mpz_t(), p)) {
    throw Error(ErrorKind::BadReduction, "p=" + std::to_string(p) + " divides the discriminant");
  }
  a1_ = field_.reduce(E.a1());
  a2_ = field_.reduce(E.a2());
  a3_ = field_.reduce(E.a3());
  a4_ = field_.reduce(E.a4());
  a6_ = field_.reduce(E.a6());
}

bool ReducedCurve::contains(const FpPoint& P) const {
  if (P.infinity) return true;
  const auto& F = field_;
  std::uint64_t lhs = F.add(F.mul(P.y, P.y), F.mul(P.y, F.add(F.mul(a1_, P.x), a3_)));
  std::uint64_t x2 = F.mul(P.x, P.x);
  std::uint64_t rhs = F.add(F.add(F.mul(x2, P.x), F.mul(a2_, x2)), F.add(F.mul(a4_, P.x), a6_));
  return lhs == rhs;
}

FpPoint ReducedCurve::negate(const FpPoint& P) const {
  if (P.infinity) return P;
  const auto& F = field_;
  return FpPoint::at(P.x, F.sub(F.neg(P.y), F.add(F.mul(a1_, P.x), a3_)));
}

FpPoint ReducedCurve::add(const FpPoint& P, const FpPoint& Q) const {
  if (P.infinity) return Q;
  if (Q.infinity) return P;
  const auto& F = field_;

  std::uint64_t slope;
  if (P.x == Q.x) {
    const std::uint64_t sum = F.add(F.add(P.y, Q.y), F.add(F.mul(a1_, Q.x), a3_));
    if (sum == 0) return FpPoint{};
    std::uint64_t num = F.add(F.add(F.mul(3 % F.modulus(), F.mul(P.x, P.x)), F.mul(F.mul(2 % F.modulus(), a2_), P.x)),
                              F.sub(a4_, F.mul(a1_, P.y)));
    std::uint64_t den = F.add(F.add(F.mul(2 % F.modulus(), P.y), F.mul(a1_, P.x)), a3_);
    slope = F.mul(num, F.inv(den));
  } else {
    slope = F.mul(F.sub(Q.y, P.y), F.inv(F.sub(Q.x, P.x)));
  }
  const std::uint64_t intercept = F.sub(P.y, F.mul(slope, P.x));
  const std::uint64_t x3 = F.sub(F.sub(F.add(F.mul(slope, slope), F.mul(a1_, slope)), a2_), F.add(P.x, Q.x));
  const std::uint64_t y3 = F.sub(F.neg(F.mul(F.add(slope, a1_), x3)), F.add(intercept, a3_));
  return FpPoint::at(x3, y3);
}

FpPoint ReducedCurve::multiply(const FpPoint& P, std::uint64_t n) const {
  FpPoint result;
  FpPoint base = P;
  while (n > 0) {
    if (n & 1) result = add(result, base);
    n >>= 1;
    if (n > 0) base = add(base, base);
  }
  return result;
}

std::optional<FpPoint> ReducedCurve::lift_x(std::uint64_t x) const {
  const auto& F = field_;
  if (F.modulus() == 2) throw Error(ErrorKind::InvalidInput, "lift_x needs an odd prime");
  const std::uint64_t b = F.add(F.mul(a1_, x), a3_);
  const std::uint64_t x2 = F.mul(x, x);
  const std::uint64_t f = F.add(F.add(F.mul(x2, x), F.mul(a2_, x2)), F.add(F.mul(a4_, x), a6_));
  // (2y + b)^2 = b^2 + 4 f
  const std::uint64_t d = F.add(F.mul(b, b), F.mul(4 % F.modulus(), f));
  if (F.legendre(d) == -1) return std::nullopt;
  const std::uint64_t s = F.sqrt(d);
  return FpPoint::at(x, F.mul(F.sub(s, b), F.inv(2)));
}

FpPoint reduce_point(const WeierstrassCurve& E, const RatPoint& P, std::uint64_t p) {
  if (p >= kFieldLimit) throw Error(ErrorKind::PrimeTooLarge, "reduction limited to p < 2^63");
  if (mpz_divisible_ui_p(E.discriminant().get_mpz_t(), p)) {
    throw Error(ErrorKind::BadReduction, "p=" + std::to_string(p) + " divides the discriminant");
  }
  if (P.is_infinity()) return FpPoint{};
  if (mpz_divisible_ui_p(P.x().get_den().get_mpz_t(), p)) return FpPoint{};
  PrimeField F(p);
  return FpPoint::at(F.reduce(P.x()), F.reduce(P.y()));
}

std::pair<std::uint64_t, std::uint64_t> hasse_interval(std::uint64_t p) {
  const std::uint64_t s = isqrt_u64(4 * p);
  return {p + 1 - s, p + 1 + s};
}

std::uint64_t group_order_naive(const WeierstrassCurve& E, std::uint64_t p) {
  ReducedCurve Ep(E, p);
  std::uint64_t count = 1;
  if (p == 2) {
    for (std::uint64_t x = 0; x < 2; ++x)
      for (std::uint64_t y = 0; y < 2; ++y) count += Ep.contains(FpPoint::at(x, y)) ? 1 : 0;
    return count;
  }
  const PrimeField& F = Ep.field();
  const std::uint64_t a1 = F.reduce(E.a1()), a2 = F.reduce(E.a2()), a3 = F.reduce(E.a3());
  const std::uint64_t a4 = F.reduce(E.a4()), a6 = F.reduce(E.a6());
  for (std::uint64_t x = 0; x < p; ++x) {
    const std::uint64_t b = F.add(F.mul(a1, x), a3);
    const std::uint64_t x2 = F.mul(x, x);
    const std::uint64_t f = F.add(F.add(F.mul(x2, x), F.mul(a2, x2)), F.add(F.mul(a4, x), a6));
    const std::uint64_t d = F.add(F.mul(b, b), F.mul(4 % p, f));
    count += static_cast<std::uint64_t>(1 + F.legendre(d));
  }
  return count;
}

std::uint64_t order_from_multiple(const ReducedCurve& Ep, const FpPoint& P, std::uint64_t multiple) {
  if (!Ep.multiply(P, multiple).infinity) {
    throw Error(ErrorKind::InvalidInput, "order_from_multiple: multiple does not annihilate the point");
  }
  std::uint64_t order = multiple;
  const Factorization f = factorize(from_u64(multiple));
  for (const auto& [q, e] : f.factors) {
    const std::uint64_t qq = *to_u64(q);
    for (unsigned i = 0; i < e && order % qq == 0; ++i) {
      if (!Ep.multiply(P, order / qq).infinity) break;
      order /= qq;
    }
  }
  return order;
}

std::uint64_t group_order_bsgs(const WeierstrassCurve& E, std::uint64_t p) {
  ReducedCurve Ep(E, p);
  if (p < 5) return group_order_naive(E, p);
  const auto [lo, hi] = hasse_interval(p);
  const std::uint64_t width = hi - lo;
  const std::uint64_t m = isqrt_u64(width) + 1;

  std::mt19937_64 rng(p * 0x9E3779B97F4A7C15ULL + 17);
  std::uniform_int_distribution<std::uint64_t> pick(0, p - 1);
  std::uint64_t lcm = 1;

  for (unsigned attempt = 1; attempt <= 64; ++attempt) {
    std::optional<FpPoint> Q;
    while (!Q) Q = Ep.lift_x(pick(rng));

    // Baby steps keyed by x-coordinate: a hit on x means [j]Q = +-T.
    std::unordered_map<std::uint64_t, std::uint64_t> baby;
    FpPoint step = FpPoint{};
    for (std::uint64_t j = 1; j <= m; ++j) {
      step = Ep.add(step, *Q);
      if (step.infinity) break;
      baby.emplace(step.x, j);
    }
    const FpPoint giant = Ep.multiply(*Q, m);
    FpPoint T = Ep.multiply(*Q, lo);
    std::uint64_t annihilator = 0;
    for (std::uint64_t i = 0; i <= width / m + 1 && annihilator == 0; ++i) {
      const std::uint64_t base = lo + i * m;
      if (T.infinity) {
        annihilator = base;
        break;
      }
      if (auto it = baby.find(T.x); it != baby.end()) {
        const std::uint64_t j = it->second;
        annihilator = Ep.multiply(*Q, j) == Ep.negate(T) ? base + j : base - j;
      }
      T = Ep.add(T, giant);
    }
    if (annihilator == 0) throw Error(ErrorKind::AmbiguousOrder, "no annihilator in the Hasse interval");

    const std::uint64_t ord = order_from_multiple(Ep, *Q, annihilator);
    lcm = lcm / gcd_u64(lcm, ord) * ord;
    const std::uint64_t first = (lo + lcm - 1) / lcm * lcm;
    if (attempt >= 2 && first <= hi && first + lcm > hi) return first;
  }
  throw Error(ErrorKind::AmbiguousOrder, "group order not pinned down for p=" + std::to_string(p));
}

std::uint64_t group_order(const WeierstrassCurve& E, std::uint64_t p, const CountingLimits& limits) {
  if (p > limits.cap) throw Error(ErrorKind::PrimeTooLarge, "p=" + std::to_string(p) + " exceeds counting cap");
  if (!is_prime_u64(p)) throw Error(ErrorKind::InvalidInput, std::to_string(p) + " is not prime");
  return p < limits.naive_below ? group_order_naive(E, p) : group_order_bsgs(E, p);
}

GroupOrderMemo::GroupOrderMemo(WeierstrassCurve E, CountingLimits limits)
    : curve_(std::move(E)), limits_(limits) {}

std::uint64_t GroupOrderMemo::order(std::uint64_t p) {
  std::shared_future<std::uint64_t> result;
  std::promise<std::uint64_t> promise;
  bool owner = false;
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(p); it != cache_.end()) {
      result = it->second;
    } else {
      result = promise.get_future().share();
      cache_.emplace(p, result);
      owner = true;
    }
  }
  if (owner) {
    try {
      promise.set_value(group_order(curve_, p, limits_));
    } catch (...) {
      promise.set_exception(std::current_exception());
    }
  }
  return result.get();
}

std::size_t GroupOrderMemo::size() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

std::uint64_t reduction_order(GroupOrderMemo& memo, const RatPoint& P, std::uint64_t p) {
  const WeierstrassCurve& E = memo.curve();
  if (p > memo.limits().cap) throw Error(ErrorKind::PrimeTooLarge, "p=" + std::to_string(p) + " exceeds counting cap");
  const FpPoint reduced = reduce_point(E, P, p);
  if (reduced.infinity) throw Error(ErrorKind::TrivialReduction, "P reduces to the identity mod " + std::to_string(p));
  const std::uint64_t n = memo.order(p);
  return order_from_multiple(ReducedCurve(E, p), reduced, n);
}

std::uint64_t reduction_order(const WeierstrassCurve& E, const RatPoint& P, std::uint64_t p,
                              const CountingLimits& limits) {
  GroupOrderMemo memo(E, limits);
  return reduction_order(memo, P, p);
}

}  // namespace eds
