#pragma once

#include <cstdint>
#include <future>
#include <mutex>
#include <unordered_map>

#include "eds/curve.hpp"

namespace eds {

/// Arithmetic modulo an odd or even prime p < 2^63.
class PrimeField {
 public:
  explicit PrimeField(std::uint64_t p);

  std::uint64_t modulus() const { return p_; }
  std::uint64_t reduce(const Int& x) const;
  std::uint64_t reduce(const Rat& x) const;  // denominator must be a unit
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p_ - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
  std::uint64_t inv(std::uint64_t a) const;
  /// Legendre symbol as -1, 0, 1 (p odd).
  int legendre(std::uint64_t a) const;
  /// Some square root of a quadratic residue (Tonelli-Shanks).
  std::uint64_t sqrt(std::uint64_t a) const;

 private:
  std::uint64_t p_;
};

struct FpPoint {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  bool infinity = true;

  static FpPoint at(std::uint64_t x, std::uint64_t y) { return {x, y, false}; }
  bool operator==(const FpPoint&) const = default;
};

/// E mod p for a prime p of good reduction.
class ReducedCurve {
 public:
  /// Throws BadReduction if p | disc, PrimeTooLarge if p >= 2^63.
  ReducedCurve(const WeierstrassCurve& E, std::uint64_t p);

  const PrimeField& field() const { return field_; }
  std::uint64_t p() const { return field_.modulus(); }

  bool contains(const FpPoint& P) const;
  FpPoint negate(const FpPoint& P) const;
  FpPoint add(const FpPoint& P, const FpPoint& Q) const;
  FpPoint multiply(const FpPoint& P, std::uint64_t n) const;

  /// Point with the given x-coordinate, if any (p odd).
  std::optional<FpPoint> lift_x(std::uint64_t x) const;

 private:
  PrimeField field_;
  std::uint64_t a1_, a2_, a3_, a4_, a6_;
};

/// Point counting strategy limits.
struct CountingLimits {
  std::uint64_t naive_below = std::uint64_t{1} << 20;
  std::uint64_t cap = std::uint64_t{1} << 40;
};

/// Coordinate-wise reduction of P; the identity when p divides the
/// denominator of x(P).
FpPoint reduce_point(const WeierstrassCurve& E, const RatPoint& P, std::uint64_t p);

/// #E(F_p) by direct enumeration over x (one Legendre symbol per x).
std::uint64_t group_order_naive(const WeierstrassCurve& E, std::uint64_t p);
/// #E(F_p) by baby-step/giant-step over the Hasse interval. Points are
/// drawn from a generator seeded by p, so the result is deterministic.
std::uint64_t group_order_bsgs(const WeierstrassCurve& E, std::uint64_t p);
/// Dispatches on the limits; PrimeTooLarge above the cap.
std::uint64_t group_order(const WeierstrassCurve& E, std::uint64_t p, const CountingLimits& limits = {});

/// Hasse interval [p + 1 - floor(2 sqrt p), p + 1 + floor(2 sqrt p)].
std::pair<std::uint64_t, std::uint64_t> hasse_interval(std::uint64_t p);

/// Exact order of P in the group of a reduced curve, given an annihilating
/// multiple N ([N]P = O).
std::uint64_t order_from_multiple(const ReducedCurve& Ep, const FpPoint& P, std::uint64_t multiple);

/// Memo of #E(F_p) for one curve. Concurrent callers asking for the same p
/// share a single computation.
class GroupOrderMemo {
 public:
  explicit GroupOrderMemo(WeierstrassCurve E, CountingLimits limits = {});

  std::uint64_t order(std::uint64_t p);
  const WeierstrassCurve& curve() const { return curve_; }
  const CountingLimits& limits() const { return limits_; }
  std::size_t size() const;

 private:
  WeierstrassCurve curve_;
  CountingLimits limits_;
  mutable std::mutex mutex_;
  std::unordered_map<std::uint64_t, std::shared_future<std::uint64_t>> cache_;
};

/// r_p = ord(P mod p). Throws TrivialReduction when P reduces to the
/// identity; PrimeTooLarge and BadReduction as group_order.
std::uint64_t reduction_order(const WeierstrassCurve& E, const RatPoint& P, std::uint64_t p,
                              const CountingLimits& limits = {});
std::uint64_t reduction_order(GroupOrderMemo& memo, const RatPoint& P, std::uint64_t p);

}  // namespace eds
