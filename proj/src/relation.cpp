#include "eds/relation.hpp"

#include <algorithm>
#include <array>
#include <future>
#include <thread>

#include "eds/error.hpp"
#include "eds/factor.hpp"

namespace eds {
namespace {

constexpr std::uint32_t kPrunePrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
constexpr std::size_t kPruneCount = std::size(kPrunePrimes);

void require_rho(unsigned rho) {
  if (rho < 2 || !is_prime_u64(rho)) throw Error(ErrorKind::InvalidInput, "rho must be prime");
}

// C(N + k - 1, k), saturating at limit + 1.
std::uint64_t multiset_count(std::uint64_t N, std::size_t k, std::uint64_t limit) {
  Nat count = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    count = count * (N + i - 1) / i;
    if (count > limit) return limit + 1;
  }
  return *to_u64(count);
}

struct SearchState {
  const EdsTable& table;
  std::size_t k;
  std::uint64_t N;
  unsigned rho;
  // exponents[j][s]: v_s(D_j) for the pruning primes.
  std::vector<std::array<unsigned, kPruneCount>> exponents;
  // last_carrier[s]: largest j <= N with s | D_j, 0 if none.
  std::array<std::uint64_t, kPruneCount> last_carrier{};
};

void extend(const SearchState& st, IndexTuple& n, Nat& product, std::array<unsigned, kPruneCount>& acc,
            std::vector<ProductRelation>& out) {
  if (n.size() == st.k) {
    const NthRoot r = int_nth_root(product, st.rho);
    if (r.exact) out.push_back({n, st.rho, product, true, r.root});
    return;
  }
  const std::uint64_t from = n.empty() ? 1 : n.back();
  for (std::uint64_t j = from; j <= st.N; ++j) {
    auto next = acc;
    for (std::size_t s = 0; s < kPruneCount; ++s) next[s] = (next[s] + st.exponents[j][s]) % st.rho;
    // An unbalanced small prime that no later index can touch rules out the branch.
    bool dead = false;
    for (std::size_t s = 0; s < kPruneCount && !dead; ++s) {
      const bool last_slot = n.size() + 1 == st.k;
      dead = next[s] != 0 && (last_slot || st.last_carrier[s] < j);
    }
    if (dead) continue;
    const Nat saved = product;
    product *= st.table.D(j);
    n.push_back(j);
    extend(st, n, product, next, out);
    n.pop_back();
    product = saved;
  }
}

}  // namespace

ProductRelation test_relation(const EdsTable& table, const IndexTuple& n, unsigned rho) {
  validate_tuple(n);
  require_rho(rho);
  ProductRelation r;
  r.n = n;
  r.rho = rho;
  for (std::uint64_t m : n) r.product *= table.D(m);
  const NthRoot root = int_nth_root(r.product, rho);
  r.is_power = root.exact;
  if (root.exact) r.root = root.root;
  return r;
}

std::vector<ProductRelation> search_relations(const EdsTable& table, std::size_t k, std::uint64_t N, unsigned rho,
                                              const SearchOptions& options) {
  require_rho(rho);
  if (k == 0) return {ProductRelation{{}, rho, 1, true, Nat(1)}};
  if (N == 0) return {};
  if (!table.covers(N)) table.term(N);
  if (multiset_count(N, k, options.max_candidates) > options.max_candidates) {
    throw Error(ErrorKind::BudgetExceeded, "search space exceeds " + std::to_string(options.max_candidates));
  }

  SearchState st{table, k, N, rho, std::vector<std::array<unsigned, kPruneCount>>(N + 1), {}};
  for (std::uint64_t j = 1; j <= N; ++j) {
    for (std::size_t s = 0; s < kPruneCount; ++s) {
      const unsigned e = valuation(table.D(j), Nat(kPrunePrimes[s]));
      st.exponents[j][s] = e % rho;
      if (e > 0) st.last_carrier[s] = j;
    }
  }

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, N));
  // Worker w takes first indices w+1, w+1+threads, ...; results are merged by first index.
  std::vector<std::vector<ProductRelation>> by_first(N + 1);
  auto work = [&](unsigned w) {
    for (std::uint64_t first = w + 1; first <= N; first += threads) {
      std::array<unsigned, kPruneCount> acc{};
      IndexTuple n;
      Nat product = 1;
      std::vector<ProductRelation> local;
      for (std::size_t s = 0; s < kPruneCount; ++s) acc[s] = st.exponents[first][s];
      bool dead = false;
      for (std::size_t s = 0; s < kPruneCount && !dead; ++s) {
        dead = acc[s] != 0 && (k == 1 || st.last_carrier[s] < first);
      }
      if (dead) continue;
      n.push_back(first);
      product = table.D(first);
      extend(st, n, product, acc, local);
      by_first[first] = std::move(local);
    }
  };
  std::vector<std::future<void>> jobs;
  for (unsigned w = 1; w < threads; ++w) jobs.push_back(std::async(std::launch::async, work, w));
  work(0);
  for (auto& j : jobs) j.get();

  std::vector<ProductRelation> out;
  for (auto& chunk : by_first) {
    for (auto& r : chunk) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace eds
