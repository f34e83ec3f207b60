#include "eds/curve.hpp"

#include "eds/error.hpp"

namespace eds {

WeierstrassCurve::WeierstrassCurve(Int a1, Int a2, Int a3, Int a4, Int a6)
    : a1_(std::move(a1)), a2_(std::move(a2)), a3_(std::move(a3)), a4_(std::move(a4)), a6_(std::move(a6)) {
  b2_ = a1_ * a1_ + 4 * a2_;
  b4_ = 2 * a4_ + a1_ * a3_;
  b6_ = a3_ * a3_ + 4 * a6_;
  b8_ = a1_ * a1_ * a6_ + 4 * a2_ * a6_ - a1_ * a3_ * a4_ + a2_ * a3_ * a3_ - a4_ * a4_;
  c4_ = b2_ * b2_ - 24 * b4_;
  c6_ = -b2_ * b2_ * b2_ + 36 * b2_ * b4_ - 216 * b6_;
  disc_ = -b2_ * b2_ * b8_ - 8 * b4_ * b4_ * b4_ - 27 * b6_ * b6_ + 9 * b2_ * b4_ * b6_;

  // Independent consistency relations between the cached invariants.
  if (4 * b8_ != b2_ * b6_ - b4_ * b4_ || 1728 * disc_ != c4_ * c4_ * c4_ - c6_ * c6_) {
    throw Error(ErrorKind::InvalidCurve, "inconsistent invariants");
  }
  if (disc_ == 0) throw Error(ErrorKind::InvalidCurve, "singular model (discriminant 0)");
}

bool WeierstrassCurve::operator==(const WeierstrassCurve& o) const {
  return a1_ == o.a1_ && a2_ == o.a2_ && a3_ == o.a3_ && a4_ == o.a4_ && a6_ == o.a6_;
}

bool RatPoint::operator==(const RatPoint& other) const {
  if (is_infinity() || other.is_infinity()) return is_infinity() == other.is_infinity();
  return x() == other.x() && y() == other.y();
}

bool on_curve(const WeierstrassCurve& E, const RatPoint& P) {
  if (P.is_infinity()) return true;
  const Rat& x = P.x();
  const Rat& y = P.y();
  Rat lhs = y * y + E.a1() * x * y + E.a3() * y;
  Rat rhs = x * x * x + E.a2() * x * x + E.a4() * x + E.a6();
  return lhs == rhs;
}

RatPoint negate(const WeierstrassCurve& E, const RatPoint& P) {
  if (P.is_infinity()) return P;
  Rat y = -P.y() - E.a1() * P.x() - E.a3();
  return RatPoint(P.x(), y);
}

RatPoint add_points(const WeierstrassCurve& E, const RatPoint& P, const RatPoint& Q) {
  if (P.is_infinity()) return Q;
  if (Q.is_infinity()) return P;

  const Rat& x1 = P.x();
  const Rat& y1 = P.y();
  const Rat& x2 = Q.x();
  const Rat& y2 = Q.y();

  Rat slope;
  if (x1 == x2) {
    Rat denom = 2 * y1 + E.a1() * x1 + E.a3();
    // Q = -P, or P is 2-torsion being doubled.
    if (y1 + y2 + E.a1() * x2 + E.a3() == 0) return RatPoint::infinity();
    slope = (3 * x1 * x1 + 2 * E.a2() * x1 + E.a4() - E.a1() * y1) / denom;
  } else {
    slope = (y2 - y1) / (x2 - x1);
  }
  Rat intercept = y1 - slope * x1;
  Rat x3 = slope * slope + E.a1() * slope - E.a2() - x1 - x2;
  Rat y3 = -(slope + E.a1()) * x3 - intercept - E.a3();
  return RatPoint(std::move(x3), std::move(y3));
}

RatPoint scalar_mul(const WeierstrassCurve& E, const RatPoint& P, std::uint64_t n) {
  RatPoint result;
  RatPoint base = P;
  while (n > 0) {
    if (n & 1) result = add_points(E, result, base);
    n >>= 1;
    if (n > 0) base = add_points(E, base, base);
  }
  return result;
}

std::optional<unsigned> torsion_order(const WeierstrassCurve& E, const RatPoint& P) {
  RatPoint Q = P;
  for (unsigned n = 1; n <= 12; ++n) {
    if (Q.is_infinity()) return n;
    Q = add_points(E, Q, P);
  }
  return std::nullopt;
}

MinimalityCheck check_minimality(const WeierstrassCurve& E, const Effort& effort) {
  MinimalityCheck out;
  Factorization f = factorize(abs(E.discriminant()), effort);
  bool ok = f.complete();
  if (!ok) out.notes.push_back("discriminant not fully factored; minimality unverified");
  for (const auto& [p, e] : f.factors) {
    const bool small_ok = e < 12 || (E.c4() == 0 ? false : valuation(E.c4(), p) < 4);
    if (p == 2 || p == 3) {
      ok = false;
      out.notes.push_back("p=" + to_decimal(p) + " divides the discriminant; minimality at 2 and 3 is never certified" +
                          (small_ok ? " (criterion passes)" : " (criterion fails)"));
    } else if (!small_ok) {
      ok = false;
      out.notes.push_back("p=" + to_decimal(p) + ": v_p(disc) >= 12 and v_p(c4) >= 4; model may be non-minimal");
    }
  }
  out.certified = ok;
  if (!ok) out.notes.insert(out.notes.begin(), "minimality unverified");
  return out;
}

}  // namespace eds
