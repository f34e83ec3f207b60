#pragma once

#include <cstdint>
#include <vector>

namespace eds {

using IndexTuple = std::vector<std::uint64_t>;

/// Throws InvalidInput on any zero entry.
void validate_tuple(const IndexTuple& n);

/// 0-based positions i with ell | n[i].
std::vector<std::size_t> incidence_set(const IndexTuple& n, std::uint64_t ell);

/// Rows e_ell(n) over F_rho, one per ell in `ells`, in the given order.
class IncidenceMatrix {
 public:
  IncidenceMatrix(const IndexTuple& n, std::vector<std::uint64_t> ells, unsigned rho);

  unsigned rho() const { return rho_; }
  std::size_t k() const { return k_; }
  const std::vector<std::uint64_t>& ells() const { return ells_; }
  const std::vector<std::vector<unsigned>>& rows() const { return rows_; }

  /// Row weights |I_ell(n)| as integers (not reduced).
  std::vector<std::size_t> weights() const { return weights_; }

  /// M * (1,...,1)^t over F_rho.
  std::vector<unsigned> times_ones() const;

  /// Primes whose row is nonzero mod rho.
  std::vector<std::uint64_t> nonzero_rows() const;

  /// True iff nonzero rows have pairwise disjoint supports.
  bool disjoint_supports() const;

  /// Rank over F_rho by Gaussian elimination.
  std::size_t rank() const;

 private:
  unsigned rho_;
  std::size_t k_;
  std::vector<std::uint64_t> ells_;
  std::vector<std::vector<unsigned>> rows_;
  std::vector<std::size_t> weights_;
};

}  // namespace eds
