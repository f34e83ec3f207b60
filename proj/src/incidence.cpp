#include "eds/incidence.hpp"

#include <algorithm>
#include <utility>

#include "eds/error.hpp"

namespace eds {

void validate_tuple(const IndexTuple& n) {
  if (std::find(n.begin(), n.end(), 0) != n.end()) {
    throw Error(ErrorKind::InvalidInput, "tuple entries must be positive");
  }
}

std::vector<std::size_t> incidence_set(const IndexTuple& n, std::uint64_t ell) {
  if (ell == 0) throw Error(ErrorKind::InvalidInput, "ell must be positive");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] % ell == 0) out.push_back(i);
  }
  return out;
}

IncidenceMatrix::IncidenceMatrix(const IndexTuple& n, std::vector<std::uint64_t> ells, unsigned rho)
    : rho_(rho), k_(n.size()), ells_(std::move(ells)) {
  if (rho_ < 2) throw Error(ErrorKind::InvalidInput, "rho must be at least 2");
  for (std::uint64_t ell : ells_) {
    std::vector<unsigned> row(k_, 0);
    const auto support = incidence_set(n, ell);
    for (std::size_t i : support) row[i] = 1 % rho_;
    rows_.push_back(std::move(row));
    weights_.push_back(support.size());
  }
}

std::vector<unsigned> IncidenceMatrix::times_ones() const {
  std::vector<unsigned> out;
  for (std::size_t w : weights_) out.push_back(static_cast<unsigned>(w % rho_));
  return out;
}

std::vector<std::uint64_t> IncidenceMatrix::nonzero_rows() const {
  std::vector<std::uint64_t> out;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (std::any_of(rows_[r].begin(), rows_[r].end(), [](unsigned v) { return v != 0; })) {
      out.push_back(ells_[r]);
    }
  }
  return out;
}

bool IncidenceMatrix::disjoint_supports() const {
  std::vector<bool> used(k_, false);
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < k_; ++i) {
      if (row[i] == 0) continue;
      if (used[i]) return false;
      used[i] = true;
    }
  }
  return true;
}

std::size_t IncidenceMatrix::rank() const {
  auto m = rows_;
  const std::uint64_t p = rho_;
  auto inverse = [p](std::uint64_t a) {
    std::uint64_t result = 1, base = a % p, e = p - 2;
    while (e) {
      if (e & 1) result = result * base % p;
      base = base * base % p;
      e >>= 1;
    }
    return result;
  };
  std::size_t rank = 0;
  for (std::size_t col = 0; col < k_ && rank < m.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < m.size() && m[pivot][col] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[pivot], m[rank]);
    const std::uint64_t inv = inverse(m[rank][col]);
    for (auto& v : m[rank]) v = static_cast<unsigned>(v * inv % p);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][col] == 0) continue;
      const std::uint64_t factor = m[r][col];
      for (std::size_t c = 0; c < k_; ++c) {
        m[r][c] = static_cast<unsigned>((m[r][c] + p * p - factor * m[rank][c] % p) % p);
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace eds
