#include <doctest.h>

#include "eds/error.hpp"
#include "fixtures.hpp"

using namespace eds;
using namespace eds::testing;

namespace {

std::vector<Nat> primes_of(const ExceptionalSet& S) {
  const PrimeSet ps = S.primes();
  return {ps.begin(), ps.end()};
}

}  // namespace

TEST_CASE("exceptional set examples") {
  const auto E = curve_37a();
  CHECK(primes_of(build_exceptional_set(E, point_37a())) == std::vector<Nat>{2, 3, 37});
  CHECK(primes_of(build_exceptional_set(E, point_37a_5P())) == std::vector<Nat>{2, 3, 37});
  ExceptionalSetOptions extra;
  extra.extra = {11};
  CHECK(primes_of(build_exceptional_set(E, point_37a(), extra)) == std::vector<Nat>{2, 3, 11, 37});

  ExceptionalSetOptions bare;
  bare.small_prime_guard = false;
  CHECK(primes_of(build_exceptional_set(E, point_37a(), bare)) == std::vector<Nat>{37});
  const auto S5 = build_exceptional_set(E, point_37a_5P(), bare);
  CHECK(primes_of(S5) == std::vector<Nat>{2, 37});
  CHECK(S5.reasons(2) == std::vector<Provenance>{Provenance::divides_D1});

  const auto guarded = build_exceptional_set(E, point_37a_5P());
  CHECK(guarded.reasons(2) == std::vector<Provenance>{Provenance::divides_D1, Provenance::small_prime_guard});

  ExceptionalSetOptions composite;
  composite.extra = {15};
  CHECK_THROWS_AS(build_exceptional_set(E, point_37a(), composite), Error);
}

TEST_CASE("check_valuation_law examples") {
  const auto& ctx = ctx37_guarded();
  const LawReport r5 = check_valuation_law(ctx, 5, 10);
  CHECK(r5.holds());
  CHECK(r5.r_p == 8);
  CHECK(valuation(ctx.table().D(8), Int(5)) == 1);
  for (std::uint64_t n : {1, 2, 3, 4, 5, 6, 7, 9, 10}) CHECK(valuation(ctx.table().D(n), Int(5)) == 0);

  const LawReport r7 = check_valuation_law(ctx, 7, 10);
  CHECK(r7.holds());
  CHECK(r7.r_p == 9);  // #E(F_7) = 9 and P has full order

  try {
    check_valuation_law(ctx, 2, 10);
    FAIL("expected PreconditionFailed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PreconditionFailed);
  }
}

TEST_CASE("valuation_via_law examples") {
  const auto& ctx = ctx37_guarded();
  CHECK(valuation_via_law(ctx, 5, 8) == 1);
  CHECK(valuation_via_law(ctx, 5, 40) == 2);
  CHECK(valuation_via_law(ctx, 5, 7) == 0);
  // r_1009 = 1057 lies beyond the 60-term table.
  try {
    valuation_via_law(ctx, 1009, 1057);
    FAIL("expected TableMiss");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TableMiss);
  }
}

TEST_CASE("valuation_via_law agrees with direct valuations") {
  for (const auto& fx : all_fixtures()) {
    const EdsContext ctx = make_context(fx.E, fx.P, 60, true);
    for (std::uint32_t p : small_primes()) {
      if (p > 1000) break;
      if (ctx.exceptional().contains(std::uint64_t{p})) continue;
      const std::uint64_t r = ctx.reduction_order(p);
      for (std::uint64_t n = 1; n <= 60; ++n) {
        REQUIRE(valuation_via_law(ctx, p, n) == valuation(ctx.table().D(n), Int(p)));
      }
    }
  }
}

TEST_CASE("a violation is absorbed into S") {
  LawReport bad;
  bad.p = 13;
  bad.violations.push_back({4, 1, 1, 0});
  const auto S = absorb_violations(ctx37_guarded().exceptional(), {bad});
  CHECK(S.contains(std::uint64_t{13}));
  CHECK(S.reasons(13) == std::vector<Provenance>{Provenance::user_added});
}

TEST_CASE("detecting_primes examples") {
  const auto& ctx = ctx37();
  auto r = detecting_primes(ctx, 5, 2);
  REQUIRE(r.primes.size() == 1);
  CHECK(r.primes[0].p == 2);
  CHECK(r.primes[0].valuation == 1);
  CHECK(r.primes[0].order_verified);
  CHECK(r.primes[0].primitive);
  CHECK(r.complete);

  r = detecting_primes(ctx, 7, 2);
  REQUIRE(r.primes.size() == 1);
  CHECK(r.primes[0].p == 3);

  CHECK(detecting_primes(ctx, 2, 2).primes.empty());
  // With the guard on, 2 and 3 are in S and the small indices detect nothing.
  CHECK(detecting_primes(ctx37_guarded(), 5, 2).primes.empty());
  CHECK_THROWS_AS(detecting_primes(ctx, 9, 2), Error);
}

TEST_CASE("detecting primes have exact order ell and are primitive") {
  for (const auto& fx : all_fixtures()) {
    for (bool guard : {true, false}) {
      const EdsContext ctx = make_context(fx.E, fx.P, 60, guard);
      for (std::uint64_t ell : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31}) {
        for (unsigned rho : {2u, 3u}) {
          const auto r = detecting_primes(ctx, ell, rho);
          for (const auto& dp : r.primes) {
            INFO("ell=" << ell << " p=" << to_decimal(dp.p));
            REQUIRE(dp.primitive);
            REQUIRE(dp.order_verified);
            if (dp.p < 10'000) {
              REQUIRE(dp.found_by_sieve);
              REQUIRE(ctx.reduction_order(*to_u64(dp.p)) == ell);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("sieve finds exactly the small primes of order ell") {
  const auto& ctx = ctx37();
  for (std::uint64_t ell : {5, 7, 11, 13, 17}) {
    for (const Nat& p : ctx.sieve_order_primes(ell)) {
      CHECK(ctx.reduction_order(*to_u64(p)) == ell);
      CHECK(mpz_divisible_p(ctx.table().D(ell).get_mpz_t(), p.get_mpz_t()));
    }
  }
}

TEST_CASE("probe over a range") {
  const auto probe = probe_detecting(ctx37(), 2, 13, 2);
  REQUIRE(probe.results.size() == 6);
  for (const auto& r : probe.results) CHECK(r.primes.empty() == (r.ell <= 3));
  CHECK(probe.largest_without == 3u);
  CHECK(probe_detecting(ctx37(), 14, 16, 2).results.empty());
}
