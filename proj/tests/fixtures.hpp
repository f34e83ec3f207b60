#pragma once

#include "eds/curve.hpp"
#include "eds/sequence.hpp"
#include "eds/valuation_law.hpp"

namespace eds::testing {

// y^2 + y = x^3 - x (conductor 37)
inline WeierstrassCurve curve_37a() { return WeierstrassCurve(0, 0, 1, -1, 0); }
inline RatPoint point_37a() { return RatPoint(0, 0); }
// [5]P on the same curve; D_1 = 2.
inline RatPoint point_37a_5P() { return RatPoint(Rat(1, 4), Rat(-5, 8)); }

// y^2 + y = x^3 + x^2 - 2x (conductor 389)
inline WeierstrassCurve curve_389a() { return WeierstrassCurve(0, 1, 1, -2, 0); }
inline RatPoint point_389a() { return RatPoint(0, 0); }

struct Fixture {
  const char* name;
  WeierstrassCurve E;
  RatPoint P;
};

inline std::vector<Fixture> all_fixtures() {
  return {{"37a P=(0,0)", curve_37a(), point_37a()},
          {"37a P=(1/4,-5/8)", curve_37a(), point_37a_5P()},
          {"389a P=(0,0)", curve_389a(), point_389a()}};
}

// Factoring budget for tests: enough for every fixture D_ell with ell <= 12 prime,
// partial beyond that on the [5]P fixture.
inline Effort test_effort() {
  Effort e;
  e.rho_iterations = 200'000;
  e.wall_clock = std::chrono::duration<double>(5.0);
  return e;
}

inline EdsContext make_context(const WeierstrassCurve& E, const RatPoint& P, std::uint64_t N, bool guard) {
  ExceptionalSetOptions options;
  options.small_prime_guard = guard;
  return EdsContext(eds_range(E, P, N), build_exceptional_set(E, P, options), test_effort());
}

// The fixture curve with the {2,3} guard off, as used by the worked examples.
inline const EdsContext& ctx37() {
  static const EdsContext ctx = make_context(curve_37a(), point_37a(), 100, false);
  return ctx;
}

inline const EdsContext& ctx37_guarded() {
  static const EdsContext ctx = make_context(curve_37a(), point_37a(), 60, true);
  return ctx;
}

}  // namespace eds::testing
