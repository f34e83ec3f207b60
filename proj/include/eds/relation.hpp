#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "eds/incidence.hpp"
#include "eds/sequence.hpp"

namespace eds {

struct ProductRelation {
  IndexTuple n;
  unsigned rho = 0;
  Nat product = 1;
  bool is_power = false;
  std::optional<Nat> root;
};

/// Exact product of D_{n_i} and its rho-th power test. Throws TableMiss.
ProductRelation test_relation(const EdsTable& table, const IndexTuple& n, unsigned rho);

struct SearchOptions {
  std::uint64_t max_candidates = 10'000'000;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Every sorted multiset of size k from 1..N whose product is a rho-th
/// power, in lexicographic order. Throws BudgetExceeded when the multiset
/// count exceeds max_candidates.
std::vector<ProductRelation> search_relations(const EdsTable& table, std::size_t k, std::uint64_t N, unsigned rho,
                                              const SearchOptions& options = {});

}  // namespace eds
