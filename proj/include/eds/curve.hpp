#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eds/factor.hpp"
#include "eds/number.hpp"

namespace eds {

/// Integral long Weierstrass model
///   y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
/// with the standard invariants cached at construction.
class WeierstrassCurve {
 public:
  /// Throws InvalidCurve for a singular model.
  WeierstrassCurve(Int a1, Int a2, Int a3, Int a4, Int a6);

  const Int& a1() const { return a1_; }
  const Int& a2() const { return a2_; }
  const Int& a3() const { return a3_; }
  const Int& a4() const { return a4_; }
  const Int& a6() const { return a6_; }
  const Int& b2() const { return b2_; }
  const Int& b4() const { return b4_; }
  const Int& b6() const { return b6_; }
  const Int& b8() const { return b8_; }
  const Int& c4() const { return c4_; }
  const Int& c6() const { return c6_; }
  const Int& discriminant() const { return disc_; }

  bool operator==(const WeierstrassCurve& other) const;

 private:
  Int a1_, a2_, a3_, a4_, a6_;
  Int b2_, b4_, b6_, b8_, c4_, c6_, disc_;
};

/// A point of E(Q): the identity or an affine point with rational coordinates.
class RatPoint {
 public:
  RatPoint() = default;  // identity
  RatPoint(Rat x, Rat y) : affine_(Coords{std::move(x), std::move(y)}) {}

  static RatPoint infinity() { return RatPoint(); }

  bool is_infinity() const { return !affine_.has_value(); }
  const Rat& x() const { return affine_->x; }
  const Rat& y() const { return affine_->y; }

  bool operator==(const RatPoint& other) const;

 private:
  struct Coords {
    Rat x, y;
  };
  std::optional<Coords> affine_;
};

bool on_curve(const WeierstrassCurve& E, const RatPoint& P);
RatPoint negate(const WeierstrassCurve& E, const RatPoint& P);
RatPoint add_points(const WeierstrassCurve& E, const RatPoint& P, const RatPoint& Q);
/// [n]P by double-and-add.
RatPoint scalar_mul(const WeierstrassCurve& E, const RatPoint& P, std::uint64_t n);

/// Order of P if it is torsion. Rational torsion has order at most 12, so
/// checking [n]P for n <= 12 decides it.
std::optional<unsigned> torsion_order(const WeierstrassCurve& E, const RatPoint& P);

/// Outcome of the sufficient minimality test: at every p | discriminant,
/// v_p(disc) < 12 or v_p(c4) < 4. Primes 2 and 3 are never certified.
struct MinimalityCheck {
  bool certified = false;
  std::vector<std::string> notes;
};

MinimalityCheck check_minimality(const WeierstrassCurve& E, const Effort& effort = {});

}  // namespace eds
