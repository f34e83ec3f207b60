#include "eds/sequence.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "eds/error.hpp"

namespace eds {
namespace {

using json = nlohmann::json;

double log10_abs(const Int& x) {
  long exp = 0;
  const double mantissa = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log10(std::fabs(mantissa)) + static_cast<double>(exp) * std::log10(2.0);
}

json curve_json(const WeierstrassCurve& E) {
  return {{"a1", to_decimal(E.a1())}, {"a2", to_decimal(E.a2())}, {"a3", to_decimal(E.a3())},
          {"a4", to_decimal(E.a4())}, {"a6", to_decimal(E.a6())}};
}

void finalize(const EdsTable& table) {
  if (auto bad = table.find_divisibility_violation()) {
    throw Error(ErrorKind::InvalidInput, "divisibility violated: D_" + std::to_string(bad->first) +
                                             " does not divide D_" + std::to_string(bad->second));
  }
}

}  // namespace

EdsTerm term_from_x(std::uint64_t n, const Rat& x) {
  NthRoot root = int_nth_root(x.get_den(), 2);
  if (!root.exact) {
    throw Error(ErrorKind::NonSquareDenominator,
                "denominator of x([" + std::to_string(n) + "]P) is not a square: " + to_fraction(x));
  }
  return {n, x.get_num(), root.root};
}

EdsTerm eds_term(const WeierstrassCurve& E, const RatPoint& P, std::uint64_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidInput, "EDS index must be positive");
  const RatPoint Q = scalar_mul(E, P, n);
  if (Q.is_infinity()) throw Error(ErrorKind::TorsionPoint, "[" + std::to_string(n) + "]P is the identity");
  return term_from_x(n, Q.x());
}

std::string curve_point_hash(const WeierstrassCurve& E, const RatPoint& P) {
  std::string canon = to_decimal(E.a1()) + "," + to_decimal(E.a2()) + "," + to_decimal(E.a3()) + "," +
                      to_decimal(E.a4()) + "," + to_decimal(E.a6()) + ";";
  canon += P.is_infinity() ? std::string("inf") : to_fraction(P.x()) + ";" + to_fraction(P.y());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

EdsTable::EdsTable(WeierstrassCurve E, RatPoint P, std::vector<EdsTerm> terms)
    : curve_(std::move(E)), point_(std::move(P)), terms_(std::move(terms)) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].n != i + 1) throw Error(ErrorKind::InvalidInput, "table terms must be contiguous from n=1");
    if (terms_[i].D <= 0) throw Error(ErrorKind::InvalidInput, "D_n must be positive");
  }
  hash_ = curve_point_hash(curve_, point_);
}

const EdsTerm& EdsTable::term(std::uint64_t n) const {
  if (!covers(n)) {
    throw Error(ErrorKind::TableMiss, "index " + std::to_string(n) + " outside table range 1.." +
                                          std::to_string(terms_.size()));
  }
  return terms_[n - 1];
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> EdsTable::find_divisibility_violation() const {
  const std::uint64_t N = size();
  for (std::uint64_t m = 1; m <= N; ++m) {
    for (std::uint64_t n = 2 * m; n <= N; n += m) {
      if (!mpz_divisible_p(D(n).get_mpz_t(), D(m).get_mpz_t())) return std::make_pair(m, n);
    }
  }
  return std::nullopt;
}

std::uint64_t EdsTable::increasing_from() const {
  std::uint64_t start = size();
  while (start > 1 && D(start - 1) < D(start)) --start;
  return start;
}

std::size_t projected_digits(const std::vector<EdsTerm>& terms, std::uint64_t N) {
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    if (it->n >= 2 && it->D > 1) {
      const double h = log10_abs(it->D) / (static_cast<double>(it->n) * static_cast<double>(it->n));
      return static_cast<std::size_t>(std::ceil(h * static_cast<double>(N) * static_cast<double>(N)));
    }
  }
  return 1;
}

EdsTable eds_range(const WeierstrassCurve& E, const RatPoint& P, std::uint64_t N, const GenerationOptions& options) {
  if (N == 0) throw Error(ErrorKind::InvalidInput, "table range must be positive");
  if (P.is_infinity() || !on_curve(E, P)) throw Error(ErrorKind::InvalidCurve, "point is not an affine point of E");

  std::vector<EdsTerm> terms;
  terms.reserve(N);
  RatPoint current;
  std::uint64_t next_projection = 16;
  for (std::uint64_t n = 1; n <= N; ++n) {
    current = add_points(E, current, P);
    if (current.is_infinity()) throw Error(ErrorKind::TorsionPoint, "[" + std::to_string(n) + "]P is the identity");
    terms.push_back(term_from_x(n, current.x()));

    if (n == next_projection || n == N) {
      next_projection *= 2;
      const std::size_t projected = projected_digits(terms, N);
      if (projected > options.max_digits || decimal_digits(terms.back().D) > options.max_digits) {
        throw Error(ErrorKind::GrowthLimitExceeded,
                    "D_" + std::to_string(N) + " projected at ~" + std::to_string(projected) + " digits (limit " +
                        std::to_string(options.max_digits) + ")");
      }
    }
  }

  for (std::uint64_t n : {N / 2, N}) {
    if (n == 0) continue;
    const EdsTerm check = eds_term(E, P, n);
    if (check.A != terms[n - 1].A || check.D != terms[n - 1].D) {
      throw Error(ErrorKind::InvalidInput, "addition chain disagrees with double-and-add at n=" + std::to_string(n));
    }
  }

  EdsTable table(E, P, std::move(terms));
  finalize(table);
  return table;
}

void write_table(std::ostream& out, const EdsTable& table) {
  json header = {{"kind", "eds-table"},
                 {"tool_version", std::string(kToolVersion)},
                 {"curve_hash", table.hash()},
                 {"curve", curve_json(table.curve())},
                 {"point", {{"x", to_fraction(table.point().x())}, {"y", to_fraction(table.point().y())}}},
                 {"terms", table.size()}};
  out << header.dump() << '\n';
  for (const EdsTerm& t : table.terms()) {
    json record = {{"n", t.n}, {"A", to_decimal(t.A)}, {"D", to_decimal(t.D)}};
    out << record.dump() << '\n';
  }
}

EdsTable read_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::InvalidInput, "empty table file");
  try {
    const json header = json::parse(line);
    if (header.value("kind", "") != "eds-table") throw Error(ErrorKind::InvalidInput, "not an eds-table file");
    const json& c = header.at("curve");
    WeierstrassCurve E(parse_int(c.at("a1").get<std::string>()), parse_int(c.at("a2").get<std::string>()),
                       parse_int(c.at("a3").get<std::string>()), parse_int(c.at("a4").get<std::string>()),
                       parse_int(c.at("a6").get<std::string>()));
    RatPoint P(parse_rat(header.at("point").at("x").get<std::string>()),
               parse_rat(header.at("point").at("y").get<std::string>()));
    if (!on_curve(E, P)) throw Error(ErrorKind::InvalidCurve, "table point is not on the curve");

    std::vector<EdsTerm> terms;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json record = json::parse(line);
      EdsTerm t{record.at("n").get<std::uint64_t>(), parse_int(record.at("A").get<std::string>()),
                parse_int(record.at("D").get<std::string>())};
      if (gcd(t.A, t.D) != 1) throw Error(ErrorKind::InvalidInput, "A_n and D_n not coprime at n=" + std::to_string(t.n));
      terms.push_back(std::move(t));
    }
    if (terms.size() != header.at("terms").get<std::uint64_t>()) {
      throw Error(ErrorKind::InvalidInput, "table truncated");
    }
    EdsTable table(std::move(E), std::move(P), std::move(terms));
    if (table.hash() != header.at("curve_hash").get<std::string>()) {
      throw Error(ErrorKind::TableMismatch, "curve hash does not match table header");
    }
    finalize(table);
    return table;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed table: ") + e.what());
  }
}

TableCache::TableCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::optional<TableCache> TableCache::from_environment() {
  const char* dir = std::getenv("EDS_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return TableCache(dir);
}

std::filesystem::path TableCache::path_for(const std::string& hash) const { return dir_ / (hash + ".jsonl"); }

EdsTable TableCache::load_or_generate(const WeierstrassCurve& E, const RatPoint& P, std::uint64_t N,
                                      const GenerationOptions& options) {
  const std::filesystem::path file = path_for(curve_point_hash(E, P));
  if (std::ifstream in(file); in) {
    try {
      EdsTable cached = read_table(in);
      if (cached.curve() == E && cached.point() == P && cached.size() >= N) {
        std::vector<EdsTerm> terms(cached.terms().begin(), cached.terms().begin() + static_cast<std::ptrdiff_t>(N));
        return EdsTable(E, P, std::move(terms));
      }
    } catch (const Error&) {
      // Stale or corrupt entry; regenerate below.
    }
  }
  EdsTable table = eds_range(E, P, N, options);
  std::filesystem::create_directories(dir_);
  const std::filesystem::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp);
    write_table(out, table);
  }
  std::filesystem::rename(tmp, file);
  return table;
}

}  // namespace eds
