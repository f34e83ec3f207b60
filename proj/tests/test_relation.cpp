#include <doctest.h>

#include <algorithm>

#include "eds/error.hpp"
#include "eds/relation.hpp"
#include "fixtures.hpp"

using namespace eds;
using namespace eds::testing;

namespace {

bool contains(const std::vector<ProductRelation>& rs, const IndexTuple& n) {
  return std::any_of(rs.begin(), rs.end(), [&](const ProductRelation& r) { return r.n == n; });
}

void brute_force(const EdsTable& t, std::size_t k, std::uint64_t N, unsigned rho, IndexTuple& cur,
                 std::vector<IndexTuple>& out) {
  if (cur.size() == k) {
    Nat prod = 1;
    for (auto m : cur) prod *= t.D(m);
    Nat root;
    mpz_root(root.get_mpz_t(), prod.get_mpz_t(), rho);
    Nat back;
    mpz_pow_ui(back.get_mpz_t(), root.get_mpz_t(), rho);
    if (back == prod) out.push_back(cur);
    return;
  }
  for (std::uint64_t j = cur.empty() ? 1 : cur.back(); j <= N; ++j) {
    cur.push_back(j);
    brute_force(t, k, N, rho, cur, out);
    cur.pop_back();
  }
}

}  // namespace

TEST_CASE("test_relation examples") {
  const EdsTable t = eds_range(curve_37a(), point_37a(), 8);
  auto r = test_relation(t, {5, 5}, 2);
  CHECK(r.product == 4);
  CHECK(r.is_power);
  CHECK(r.root == Nat(2));
  r = test_relation(t, {5, 7}, 2);
  CHECK(r.product == 6);
  CHECK_FALSE(r.is_power);
  r = test_relation(t, {1, 2, 3}, 3);
  CHECK(r.product == 1);
  CHECK(r.is_power);
  CHECK_THROWS_AS(test_relation(t, {9}, 2), Error);
}

TEST_CASE("search_relations examples") {
  const EdsTable t = eds_range(curve_37a(), point_37a(), 8);
  const auto pairs = search_relations(t, 2, 8, 2);
  CHECK(contains(pairs, {5, 5}));
  CHECK(contains(pairs, {7, 7}));
  for (std::uint64_t i = 1; i <= 8; ++i) CHECK(contains(pairs, {i, i}));
  CHECK(contains(pairs, {1, 4}));
  CHECK_FALSE(contains(pairs, {5, 7}));
  for (const auto& r : pairs) CHECK(std::is_sorted(r.n.begin(), r.n.end()));

  const auto singles = search_relations(t, 1, 8, 2);
  std::vector<std::uint64_t> idx;
  for (const auto& r : singles) idx.push_back(r.n[0]);
  CHECK(idx == std::vector<std::uint64_t>{1, 2, 3, 4, 6});

  const auto empty = search_relations(t, 0, 8, 2);
  REQUIRE(empty.size() == 1);
  CHECK(empty[0].product == 1);
  CHECK(empty[0].is_power);
}

TEST_CASE("search agrees with brute force") {
  for (const auto& fx : all_fixtures()) {
    const EdsTable t = eds_range(fx.E, fx.P, 12);
    for (unsigned rho : {2u, 3u}) {
      for (std::size_t k = 1; k <= 3; ++k) {
        for (std::uint64_t N : {5, 8, 12}) {
          std::vector<IndexTuple> expected;
          IndexTuple cur;
          brute_force(t, k, N, rho, cur, expected);
          for (unsigned threads : {1u, 4u}) {
            const auto found = search_relations(t, k, N, rho, {10'000'000, threads});
            REQUIRE(found.size() == expected.size());
            for (std::size_t i = 0; i < found.size(); ++i) {
              REQUIRE(found[i].n == expected[i]);
              REQUIRE(found[i].product == test_relation(t, found[i].n, rho).product);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("oversized searches are refused") {
  const EdsTable t = eds_range(curve_37a(), point_37a(), 50);
  try {
    search_relations(t, 6, 50, 2, {1000, 1});
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BudgetExceeded);
  }
}
