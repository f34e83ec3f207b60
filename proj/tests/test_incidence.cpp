#include <doctest.h>

#include <random>

#include "eds/error.hpp"
#include "eds/incidence.hpp"

using namespace eds;

TEST_CASE("incidence_set examples") {
  CHECK(incidence_set({5, 10, 3}, 5) == std::vector<std::size_t>{0, 1});
  CHECK(incidence_set({5, 10, 3}, 7).empty());
  CHECK(incidence_set({6, 6}, 3) == std::vector<std::size_t>{0, 1});
  CHECK_THROWS_AS(validate_tuple({3, 0}), Error);
}

TEST_CASE("incidence matrix rows and weights") {
  const IncidenceMatrix M({22, 33, 26, 39}, {11, 13}, 2);
  CHECK(M.rows()[0] == std::vector<unsigned>{1, 1, 0, 0});
  CHECK(M.rows()[1] == std::vector<unsigned>{0, 0, 1, 1});
  CHECK(M.weights() == std::vector<std::size_t>{2, 2});
  CHECK(M.times_ones() == std::vector<unsigned>{0, 0});
  CHECK(M.nonzero_rows() == std::vector<std::uint64_t>{11, 13});
  CHECK(M.disjoint_supports());
  CHECK(M.rank() == 2);

  const IncidenceMatrix W({22, 26, 6}, {11, 13, 2}, 2);
  CHECK(W.times_ones() == std::vector<unsigned>{1, 1, 1});
  CHECK_FALSE(W.disjoint_supports());
  CHECK(W.rank() == 3);
}

TEST_CASE("rank over F_rho") {
  // Rows (1,1,0), (0,1,1), (1,0,1): over F_2 the third is the sum of the others.
  const IncidenceMatrix M({6, 15, 10}, {2, 3, 5}, 2);
  CHECK(M.rank() == 2);
  const IncidenceMatrix N({6, 15, 10}, {2, 3, 5}, 3);
  CHECK(N.rank() == 3);
}

TEST_CASE("rank equals the number of nonzero rows when supports are disjoint") {
  std::mt19937 rng(3);
  const std::uint64_t primes[] = {2, 3, 5, 7, 11, 13};
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t k = rng() % 7 + 1;
    IndexTuple n(k);
    for (auto& m : n) m = rng() % 200 + 1;
    for (unsigned rho : {2u, 3u, 5u}) {
      const IncidenceMatrix M(n, {std::begin(primes), std::end(primes)}, rho);
      if (M.disjoint_supports()) REQUIRE(M.rank() == M.nonzero_rows().size());
      REQUIRE(M.rank() <= std::min(k, M.nonzero_rows().size()));
    }
  }
}
