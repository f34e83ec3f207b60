#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eds/curve.hpp"

namespace eds {

inline constexpr std::string_view kToolVersion = "0.3.0";

/// x([n]P) = A / D^2 with gcd(A, D) = 1 and D > 0.
struct EdsTerm {
  std::uint64_t n = 0;
  Int A;
  Nat D;
};

/// Splits a reduced x-coordinate into (A, D); throws NonSquareDenominator
/// when the denominator is not a perfect square.
EdsTerm term_from_x(std::uint64_t n, const Rat& x);

/// Single term by double-and-add. Throws TorsionPoint if [n]P = O.
EdsTerm eds_term(const WeierstrassCurve& E, const RatPoint& P, std::uint64_t n);

/// Stable identity of (E, P): FNV-1a over the coefficients and coordinates.
std::string curve_point_hash(const WeierstrassCurve& E, const RatPoint& P);

/// Terms 1..N of the sequence attached to (E, P). Immutable once built.
class EdsTable {
 public:
  EdsTable(WeierstrassCurve E, RatPoint P, std::vector<EdsTerm> terms);

  const WeierstrassCurve& curve() const { return curve_; }
  const RatPoint& point() const { return point_; }
  const std::string& hash() const { return hash_; }
  std::uint64_t size() const { return terms_.size(); }
  bool covers(std::uint64_t n) const { return n >= 1 && n <= terms_.size(); }

  /// Throws TableMiss outside 1..size().
  const EdsTerm& term(std::uint64_t n) const;
  const Nat& D(std::uint64_t n) const { return term(n).D; }
  const std::vector<EdsTerm>& terms() const { return terms_; }

  /// First pair (m, n) with m | n but D_m not dividing D_n, if any.
  std::optional<std::pair<std::uint64_t, std::uint64_t>> find_divisibility_violation() const;

  /// Smallest n0 such that D is strictly increasing on n0..size().
  std::uint64_t increasing_from() const;

 private:
  WeierstrassCurve curve_;
  RatPoint point_;
  std::vector<EdsTerm> terms_;
  std::string hash_;
};

struct GenerationOptions {
  /// Refuse tables whose last term is projected to exceed this many digits.
  std::size_t max_digits = 100'000;
};

/// Incremental chain [n]P = [n-1]P + P, cross-checked against
/// double-and-add at N/2 and N. Divisibility is verified before returning.
EdsTable eds_range(const WeierstrassCurve& E, const RatPoint& P, std::uint64_t N,
                   const GenerationOptions& options = {});

/// Digit count of D_N extrapolated from log D_n ~ h n^2 over the given terms.
std::size_t projected_digits(const std::vector<EdsTerm>& terms, std::uint64_t N);

/// JSON-lines table: a header record, then one {"n","A","D"} record per term.
void write_table(std::ostream& out, const EdsTable& table);
EdsTable read_table(std::istream& in);

/// On-disk cache of tables keyed by curve_point_hash.
class TableCache {
 public:
  explicit TableCache(std::filesystem::path dir);
  /// Directory from $EDS_CACHE_DIR, if set.
  static std::optional<TableCache> from_environment();

  std::filesystem::path path_for(const std::string& hash) const;
  /// Returns a cached table with at least N terms (truncated to N), or
  /// generates, stores and returns a fresh one.
  EdsTable load_or_generate(const WeierstrassCurve& E, const RatPoint& P, std::uint64_t N,
                            const GenerationOptions& options = {});

 private:
  std::filesystem::path dir_;
};

}  // namespace eds
