#include <doctest.h>

#include <thread>

#include "eds/error.hpp"
#include "eds/fp_curve.hpp"
#include "fixtures.hpp"

using namespace eds;
using namespace eds::testing;

TEST_CASE("prime field arithmetic") {
  const PrimeField F(1'000'000'007);
  CHECK(F.mul(F.inv(12345), 12345) == 1);
  CHECK(F.reduce(Rat(1, 4)) == F.inv(4));
  CHECK(F.reduce(Int(-1)) == 1'000'000'006);
  const std::uint64_t big = (std::uint64_t{1} << 62) + 135;  // prime
  const PrimeField G(big);
  CHECK(G.mul(G.inv(987654321), 987654321) == 1);
  for (std::uint64_t a = 1; a < 200; ++a) {
    if (F.legendre(a) == 1) {
      const auto r = F.sqrt(a);
      REQUIRE(F.mul(r, r) == a);
    }
  }
}

TEST_CASE("reduce_point examples") {
  const auto E = curve_37a();
  CHECK(reduce_point(E, RatPoint(0, 0), 5) == FpPoint::at(0, 0));
  CHECK(reduce_point(E, point_37a_5P(), 2).infinity);
  CHECK(reduce_point(E, point_37a_5P(), 7) == FpPoint::at(2, 2));
  CHECK_THROWS_AS(reduce_point(E, RatPoint(0, 0), 37), Error);
}

TEST_CASE("group_order examples") {
  const auto E = curve_37a();
  CHECK(group_order(E, 2) == 5);
  CHECK(group_order(E, 3) == 7);
  CHECK(group_order(E, 5) == 8);
  CHECK(group_order(E, 7) == 9);
  CHECK(group_order(E, 11) == 17);
  CHECK(group_order(E, 1009) == 1057);
  CHECK(group_order(E, 10007) == 9942);
  CHECK(group_order(curve_389a(), 1013) == 978);
  try {
    group_order(E, 37);
    FAIL("expected BadReduction");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadReduction);
  }
}

TEST_CASE("reduction_order examples") {
  const auto E = curve_37a();
  CHECK(reduction_order(E, point_37a(), 2) == 5);
  CHECK(reduction_order(E, point_37a(), 3) == 7);
  CHECK(reduction_order(E, point_37a(), 5) == 8);
  CHECK(reduction_order(E, point_37a(), 1009) == 1057);
  try {
    reduction_order(E, point_37a_5P(), 2);
    FAIL("expected TrivialReduction");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TrivialReduction);
  }
}

TEST_CASE("Hasse bound and order divisibility") {
  for (const auto& fx : all_fixtures()) {
    GroupOrderMemo memo(fx.E);
    for (std::uint32_t p : small_primes()) {
      if (p > 3000) break;
      if (mpz_divisible_ui_p(fx.E.discriminant().get_mpz_t(), p)) continue;
      const std::uint64_t N = memo.order(p);
      const auto [lo, hi] = hasse_interval(p);
      REQUIRE(N >= lo);
      REQUIRE(N <= hi);
      const FpPoint Pt = reduce_point(fx.E, fx.P, p);
      if (Pt.infinity) continue;
      REQUIRE(N % reduction_order(memo, fx.P, p) == 0);
    }
  }
}

TEST_CASE("reduction commutes with multiplication") {
  for (const auto& fx : all_fixtures()) {
    for (std::uint64_t p : {5, 7, 11, 13, 101, 997}) {
      const ReducedCurve Ep(fx.E, p);
      const FpPoint Pt = reduce_point(fx.E, fx.P, p);
      for (std::uint64_t n = 1; n <= 25; ++n) {
        const RatPoint Q = scalar_mul(fx.E, fx.P, n);
        REQUIRE(reduce_point(fx.E, Q, p) == Ep.multiply(Pt, n));
      }
    }
  }
}

TEST_CASE("baby-step giant-step agrees with naive counting") {
  const std::uint64_t primes[] = {1048583, 1048589, 1048601, 1048609, 1048613, 2097169, 2097211};
  for (const auto& fx : all_fixtures()) {
    for (std::uint64_t p : primes) {
      REQUIRE(group_order_bsgs(fx.E, p) == group_order_naive(fx.E, p));
    }
  }
  // Small primes stress the ambiguity handling of the Hasse interval.
  for (std::uint32_t p : small_primes()) {
    if (p > 400) break;
    if (p < 5 || mpz_divisible_ui_p(curve_37a().discriminant().get_mpz_t(), p)) continue;
    REQUIRE(group_order_bsgs(curve_37a(), p) == group_order_naive(curve_37a(), p));
  }
}

TEST_CASE("counting cap") {
  const CountingLimits limits{1u << 20, 1u << 22};
  try {
    group_order(curve_37a(), 4194319, limits);
    FAIL("expected PrimeTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PrimeTooLarge);
  }
}

TEST_CASE("group order memo is shared across threads") {
  GroupOrderMemo memo(curve_37a());
  std::vector<std::thread> pool;
  std::vector<std::uint64_t> seen(8);
  for (int t = 0; t < 8; ++t) pool.emplace_back([&, t] { seen[t] = memo.order(1009); });
  for (auto& th : pool) th.join();
  for (auto v : seen) CHECK(v == 1057);
  CHECK(memo.size() == 1);
}
