#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eds/incidence.hpp"
#include "eds/valuation_law.hpp"

namespace eds {

enum class Verdict { holds, fails, inconclusive };

std::string_view to_string(Verdict v);

struct Hypothesis {
  std::string name;
  bool satisfied = false;
};

/// Outcome of one necessary-condition check. `fails` means the condition
/// for a rho-th power product is violated; no checker ever asserts that a
/// product is a power.
struct ObstructionVerdict {
  std::string statement;
  Verdict verdict = Verdict::inconclusive;
  std::vector<Hypothesis> hypotheses;
  std::vector<std::pair<std::string, std::string>> witnesses;
  std::vector<std::string> notes;
  std::optional<bool> oracle_is_power;  // direct test of the product, when run

  bool hypotheses_verified() const;
  bool certifies_exclusion() const { return verdict == Verdict::fails && hypotheses_verified(); }
  bool contradicts_oracle() const { return certifies_exclusion() && oracle_is_power.value_or(false); }
};

/// L_rho and B are configuration, never computed. Exploration mode
/// (strict = false) uses L_rho = 0 and verifies the detecting input
/// rad_{S,rho}(D_ell) > 1 directly; strict mode takes ell > L_rho as given.
struct Thresholds {
  std::uint64_t L_rho = 0;
  double B = 2.0;
  bool strict = false;

  void validate() const;
};

/// ell <= q + 1 + 2 sqrt(q), exactly.
bool hasse_admissible(std::uint64_t ell, const Nat& q);
/// ell > (sqrt(B) + 1)^2.
bool exceeds_smooth_threshold(std::uint64_t ell, double B);
/// ell > max(L_rho, (sqrt(B) + 1)^2).
bool exceeds_cluster_threshold(std::uint64_t ell, const Thresholds& t);
/// x < (sqrt(ell) - 1)^2, exactly.
bool below_gap_bound(const Nat& x, std::uint64_t ell);

/// |I| v_p(D_ell) + sum_{i in I} v_p(n_i / ell) == 0 mod rho.
ObstructionVerdict absorption_congruence(const EdsContext& ctx, const IndexTuple& n, std::uint64_t ell,
                                         const Nat& p, unsigned rho);

/// <e_ell(n), v_q(n)> == |I| (v_q(ell) - v_q(D_ell)) mod rho.
ObstructionVerdict incidence_pairing(const EdsContext& ctx, const IndexTuple& n, std::uint64_t ell,
                                     const Nat& q, unsigned rho);

/// N_{ell,q} == -N_ell v_q(D_ell) mod rho for squarefree entries.
ObstructionVerdict squarefree_incidence(const EdsContext& ctx, const IndexTuple& n, std::uint64_t ell,
                                        const Nat& q, unsigned rho);

/// rad_{S,rho}(D_ell) | prod_{i in I} n_i / ell, the Hasse bound for each
/// radical prime, and the top-prime interval when it applies.
ObstructionVerdict prime_support_check(const EdsContext& ctx, const IndexTuple& n, std::uint64_t ell,
                                       unsigned rho);

/// v_q(prod_{i in I} n_i / ell) == -|I| v_q(D_ell) mod rho.
ObstructionVerdict multiplicity_obstruction(const EdsContext& ctx, const IndexTuple& n, std::uint64_t ell,
                                            const Nat& q, unsigned rho);

/// rho | |I_ell(n)| under the top-prime, B-smooth and threshold hypotheses.
/// Throws HypothesisViolated naming the first failed precondition.
ObstructionVerdict smooth_cofactor_balance(const EdsContext& ctx, const IndexTuple& n, std::uint64_t ell,
                                           unsigned rho, const Thresholds& t);

struct ClusterReport {
  unsigned rho = 0;
  std::size_t k = 0;
  std::vector<std::uint64_t> lambda;  // primes kept after hypothesis checks
  std::vector<std::pair<std::uint64_t, std::string>> dropped;
  std::vector<std::uint64_t> lambda_star;
  std::vector<std::size_t> weights;
  std::vector<unsigned> times_ones;
  std::size_t rank = 0;
  /// Conclusions 1..5: M 1 = 0; disjoint supports; rank = |Lambda*|;
  /// |Lambda*| <= floor(k / rho); k < rho implies Lambda* empty.
  std::array<bool, 5> conclusions{};
  ObstructionVerdict verdict;
};

ClusterReport cluster_packing(const EdsContext& ctx, const IndexTuple& n, const std::vector<std::uint64_t>& lambda,
                              unsigned rho, const Thresholds& t);

/// n_i = ell_i a_i with ell_i the top prime; multiplicity of each ell_i
/// must vanish mod rho. Throws HypothesisViolated on a bad decomposition.
ObstructionVerdict repeated_top_prime(const EdsContext& ctx, const IndexTuple& n, unsigned rho, const Thresholds& t);

/// P^+(m / ell) >= (sqrt(ell) - 1)^2 for ell = P^+(m). A fails verdict
/// excludes D_m D_n for every n coprime to m; when n is given and the table
/// covers it, the product is also tested directly.
ObstructionVerdict large_prime_gap(const EdsContext& ctx, std::uint64_t m, std::optional<std::uint64_t> n,
                                   unsigned rho, const Thresholds& t);

/// Contrapositive form with a B-smooth cofactor: a relation forces
/// ell <= max(L_rho, (sqrt(B) + 1)^2).
ObstructionVerdict smooth_cofactor_exclusion(const EdsContext& ctx, std::uint64_t m, std::optional<std::uint64_t> n,
                                             unsigned rho, const Thresholds& t);

/// rad(prod_{ell in Lambda} prod_{i in I_ell} n_i / ell) >= prod (sqrt(ell) - 1)^2.
ObstructionVerdict radical_lower_bound(const EdsContext& ctx, const IndexTuple& n,
                                       const std::vector<std::uint64_t>& lambda, unsigned rho, const Thresholds& t);

}  // namespace eds
