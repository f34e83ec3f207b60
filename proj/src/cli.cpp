#include "eds/cli.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "eds/error.hpp"
#include "eds/obstruction.hpp"
#include "eds/relation.hpp"
#include "eds/report.hpp"

namespace eds {
namespace {

struct RunConfig {
  std::string curve_path;
  std::string table_path;
  std::string extra_primes;
  unsigned rho = 2;
  double B = 2.0;
  std::uint64_t L_rho = 0;
  bool L_rho_given = false;
  std::uint64_t n_max = 60;
  std::uint64_t sieve_bound = 10'000;
  std::string effort_spec;
  std::string format = "text";
  bool strict = false;
  bool no_guard = false;
  std::size_t max_digits = 100'000;
  unsigned threads = 0;

  Thresholds thresholds() const { return {L_rho, B, strict}; }
  Effort effort() const { return effort_spec.empty() ? Effort{} : Effort::parse(effort_spec); }
  bool json() const { return format == "json"; }

  void validate() const {
    if (rho < 2 || !is_prime_u64(rho)) throw Error(ErrorKind::InvalidInput, "--rho must be prime");
    if (!(B >= 2.0)) throw Error(ErrorKind::InvalidInput, "--B must be at least 2");
    if (n_max == 0) throw Error(ErrorKind::InvalidInput, "--n-max must be positive");
    if (sieve_bound == 0) throw Error(ErrorKind::InvalidInput, "--sieve-bound must be positive");
    if (strict && !L_rho_given) throw Error(ErrorKind::InvalidInput, "--strict needs an explicit --L-rho");
  }
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidCurve:
    case ErrorKind::TorsionPoint:
    case ErrorKind::NonSquareDenominator:
    case ErrorKind::BadReduction:
    case ErrorKind::TrivialReduction:
      return kExitCurve;
    default:
      return kExitConfig;
  }
}

std::vector<std::uint64_t> parse_index_list(const std::string& text, const char* what) {
  std::vector<std::uint64_t> out;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    const bool digits = std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; });
    if (!digits || token.size() > 18 || std::stoull(token) == 0) {
      throw Error(ErrorKind::InvalidInput, std::string("malformed ") + what + " entry '" + token + "'");
    }
    out.push_back(std::stoull(token));
    token.clear();
  };
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t' || c == '(' || c == ')') {
      flush();
    } else {
      token += c;
    }
  }
  flush();
  return out;
}

std::vector<IndexTuple> read_tuple_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open tuple file " + path);
  std::vector<IndexTuple> tuples;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tuples.push_back(parse_index_list(line, "tuple"));
  }
  return tuples;
}

std::string json_scalar(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw Error(ErrorKind::InvalidInput, std::string("curve file lacks '") + key + "'");
  const Json& v = obj.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  throw Error(ErrorKind::InvalidInput, std::string("curve file field '") + key + "' must be a decimal string");
}

std::pair<WeierstrassCurve, RatPoint> load_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open curve file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidInput, "curve file is not valid JSON: " + std::string(e.what()));
  }
  WeierstrassCurve E(parse_int(json_scalar(j, "a1")), parse_int(json_scalar(j, "a2")), parse_int(json_scalar(j, "a3")),
                     parse_int(json_scalar(j, "a4")), parse_int(json_scalar(j, "a6")));
  if (!j.contains("point")) throw Error(ErrorKind::InvalidInput, "curve file lacks 'point'");
  const Json& pt = j.at("point");
  RatPoint P(parse_rat(json_scalar(pt, "x")), parse_rat(json_scalar(pt, "y")));
  if (!on_curve(E, P)) throw Error(ErrorKind::InvalidCurve, "point does not lie on the curve");
  if (const auto order = torsion_order(E, P)) {
    throw Error(ErrorKind::TorsionPoint, "P has finite order " + std::to_string(*order));
  }
  return {std::move(E), std::move(P)};
}

EdsTable obtain_table(const RunConfig& cfg, const WeierstrassCurve& E, const RatPoint& P, std::uint64_t N) {
  const GenerationOptions gen{cfg.max_digits};
  if (!cfg.table_path.empty()) {
    std::ifstream in(cfg.table_path);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot open table " + cfg.table_path);
    EdsTable table = read_table(in);
    if (table.hash() != curve_point_hash(E, P)) {
      throw Error(ErrorKind::TableMismatch, "table was generated for a different curve or point");
    }
    table.term(N);
    return table;
  }
  if (auto cache = TableCache::from_environment()) return cache->load_or_generate(E, P, N, gen);
  return eds_range(E, P, N, gen);
}

EdsContext make_context(const RunConfig& cfg, EdsTable table) {
  ExceptionalSetOptions options;
  options.small_prime_guard = !cfg.no_guard;
  options.effort = cfg.effort();
  for (std::uint64_t p : parse_index_list(cfg.extra_primes, "prime")) options.extra.push_back(from_u64(p));
  ExceptionalSet S = build_exceptional_set(table.curve(), table.point(), options);
  return EdsContext(std::move(table), std::move(S), cfg.effort(), CountingLimits{}, cfg.sieve_bound);
}

ReportHeader make_header(const std::string& command, const RunConfig& cfg, const EdsContext& ctx) {
  ReportHeader h;
  h.command = command;
  h.curve_hash = ctx.table().hash();
  h.curve = curve_json(ctx.curve(), ctx.point());
  h.rho = cfg.rho;
  h.thresholds = cfg.thresholds();
  h.n_max = cfg.n_max;
  h.sieve_bound = cfg.sieve_bound;
  h.effort = cfg.effort();
  h.limits = ctx.limits();
  h.small_prime_guard = !cfg.no_guard;
  h.minimality = check_minimality(ctx.curve(), cfg.effort());
  h.exceptional = ctx.exceptional();
  return h;
}

void print_text_header(std::ostream& out, const ReportHeader& h) {
  const Json& c = h.curve;
  out << "# eds " << kToolVersion << ' ' << h.command << '\n';
  out << "# curve [" << c["a1"].get<std::string>() << ',' << c["a2"].get<std::string>() << ','
      << c["a3"].get<std::string>() << ',' << c["a4"].get<std::string>() << ',' << c["a6"].get<std::string>()
      << "]  P=(" << c["point"]["x"].get<std::string>() << ", " << c["point"]["y"].get<std::string>()
      << ")  hash " << h.curve_hash << '\n';
  out << "# rho=" << h.rho << " B=" << h.thresholds.B << " L_rho=" << h.thresholds.L_rho << " ("
      << (h.thresholds.strict ? "strict" : "exploration") << ") n_max=" << h.n_max << " sieve_bound=" << h.sieve_bound
      << " effort=" << h.effort.to_string() << '\n';
  out << "# S = {";
  bool first = true;
  for (const auto& [p, mask] : h.exceptional.entries()) {
    out << (first ? "" : ", ") << to_decimal(p) << " [";
    const auto reasons = h.exceptional.reasons(p);
    for (std::size_t i = 0; i < reasons.size(); ++i) out << (i ? "," : "") << to_string(reasons[i]);
    out << ']';
    first = false;
  }
  out << "}" << (h.small_prime_guard ? "" : "  (small-prime guard off)") << '\n';
  out << "# minimal model " << (h.minimality.certified ? "certified" : "not certified");
  for (const auto& note : h.minimality.notes) out << "; " << note;
  out << '\n';
}

// Results in index order; the lowest-index exception is rethrown.
template <class F>
auto parallel_map(std::size_t count, unsigned threads, F f) -> std::vector<decltype(f(std::size_t{0}))> {
  using R = decltype(f(std::size_t{0}));
  std::vector<std::optional<R>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::string tuple_text(const IndexTuple& n) {
  std::string s = "(";
  for (std::size_t i = 0; i < n.size(); ++i) s += (i ? "," : "") + std::to_string(n[i]);
  return s + ")";
}

// gen

int cmd_gen(const RunConfig& cfg, const std::string& out_path, std::ostream& out) {
  auto [E, P] = load_curve(cfg.curve_path);
  const GenerationOptions gen{cfg.max_digits};
  std::string written;
  std::optional<EdsTable> table;
  auto cache = TableCache::from_environment();
  if (!out_path.empty()) {
    table = cache ? cache->load_or_generate(E, P, cfg.n_max, gen) : eds_range(E, P, cfg.n_max, gen);
    std::ofstream file(out_path);
    if (!file) throw Error(ErrorKind::InvalidInput, "cannot write " + out_path);
    write_table(file, *table);
    written = out_path;
  } else if (cache) {
    table = cache->load_or_generate(E, P, cfg.n_max, gen);
    written = cache->path_for(table->hash()).string();
  } else {
    throw Error(ErrorKind::InvalidInput, "gen needs --out or EDS_CACHE_DIR");
  }

  const EdsContext ctx = make_context(cfg, *table);
  const ReportHeader header = make_header("gen", cfg, ctx);
  const std::uint64_t shown = std::min<std::uint64_t>(cfg.n_max, 20);
  if (cfg.json()) {
    Json D = Json::array();
    for (std::uint64_t n = 1; n <= shown; ++n) D.push_back(to_decimal(ctx.table().D(n)));
    Json report = {{"header", to_json(header)}, {"terms", ctx.table().size()}, {"D", D}, {"path", written}};
    out << report.dump(2) << '\n';
  } else {
    print_text_header(out, header);
    out << "D_1..D_" << shown << ":";
    for (std::uint64_t n = 1; n <= shown; ++n) out << (n == 1 ? " " : ", ") << to_decimal(ctx.table().D(n));
    out << "\nwrote " << ctx.table().size() << " terms to " << written << '\n';
  }
  return kExitOk;
}

// verify-law

struct LawOutcome {
  std::uint64_t p = 0;
  std::string status;  // checked, skipped_in_S, skipped_cap
  std::string note;
  std::optional<LawReport> report;
};

int cmd_verify_law(const RunConfig& cfg, std::uint64_t p_min, std::uint64_t p_max, std::ostream& out) {
  auto [E, P] = load_curve(cfg.curve_path);
  const EdsContext ctx = make_context(cfg, obtain_table(cfg, E, P, cfg.n_max));
  const ReportHeader header = make_header("verify-law", cfg, ctx);

  std::vector<std::uint64_t> primes;
  for (std::uint64_t p = std::max<std::uint64_t>(p_min, 2); p <= p_max; ++p) {
    if (is_prime_u64(p)) primes.push_back(p);
  }
  const auto outcomes = parallel_map(primes.size(), cfg.threads, [&](std::size_t i) {
    LawOutcome o;
    o.p = primes[i];
    if (ctx.exceptional().contains(o.p)) {
      o.status = "skipped_in_S";
      for (Provenance why : ctx.exceptional().reasons(from_u64(o.p))) {
        o.note += (o.note.empty() ? "" : ",") + std::string(to_string(why));
      }
      return o;
    }
    try {
      o.report = check_valuation_law(ctx, o.p, cfg.n_max);
      o.status = "checked";
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PrimeTooLarge) throw;
      o.status = "skipped_cap";
      o.note = e.what();
    }
    return o;
  });

  std::size_t checked = 0, skipped = 0, failing = 0;
  for (const auto& o : outcomes) {
    if (!o.report) {
      ++skipped;
      continue;
    }
    ++checked;
    if (!o.report->holds()) ++failing;
  }

  if (cfg.json()) {
    Json results = Json::array();
    for (const auto& o : outcomes) {
      Json entry = {{"p", o.p}, {"status", o.status}};
      if (o.report) entry["law"] = to_json(*o.report);
      if (!o.note.empty()) entry["note"] = o.note;
      results.push_back(entry);
    }
    Json report = {{"header", to_json(header)},
                   {"results", results},
                   {"summary", {{"checked", checked}, {"skipped", skipped}, {"violating_primes", failing}}}};
    out << report.dump(2) << '\n';
  } else {
    print_text_header(out, header);
    for (const auto& o : outcomes) {
      out << "p=" << o.p;
      if (o.status == "skipped_in_S") {
        out << "  skipped: in S (" << o.note << ")\n";
      } else if (o.status == "skipped_cap") {
        out << "  skipped: above point-counting cap\n";
      } else if (o.report->holds()) {
        out << "  r_p=" << o.report->r_p << "  pass\n";
      } else {
        out << "  r_p=" << o.report->r_p << "  FAIL";
        for (const auto& v : o.report->violations) {
          out << "  [n=" << v.n << " clause " << v.clause << ": v_p=" << v.observed << ", law " << v.predicted << "]";
        }
        out << '\n';
      }
    }
    out << "checked " << checked << ", skipped " << skipped << ", violating " << failing << '\n';
  }
  return failing ? kExitViolation : kExitOk;
}

// obstruct

struct TupleOutcome {
  IndexTuple n;
  ProductRelation oracle;
  std::vector<ObstructionVerdict> verdicts;
  std::optional<ClusterReport> cluster;
  std::vector<std::pair<std::string, std::string>> skipped;
  bool contradiction = false;
};

bool skippable(ErrorKind kind) {
  return kind == ErrorKind::PreconditionFailed || kind == ErrorKind::HypothesisViolated ||
         kind == ErrorKind::NotSquarefree;
}

std::vector<std::uint64_t> primes_dividing(const IndexTuple& n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t m : n) {
    for (const auto& pp : factorize(from_u64(m)).factors) out.push_back(*to_u64(pp.prime));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TupleOutcome run_checkers(const EdsContext& ctx, const RunConfig& cfg, const IndexTuple& n,
                          const std::optional<std::vector<std::uint64_t>>& lambda) {
  TupleOutcome t;
  t.n = n;
  const unsigned rho = cfg.rho;
  const Thresholds th = cfg.thresholds();
  t.oracle = test_relation(ctx.table(), n, rho);

  auto attempt = [&](const std::string& name, auto&& check) {
    try {
      t.verdicts.push_back(check());
    } catch (const Error& e) {
      if (!skippable(e.kind())) throw;
      t.skipped.emplace_back(name, e.what());
    }
  };

  const auto ells = primes_dividing(n);
  const bool squarefree = std::all_of(n.begin(), n.end(), [](std::uint64_t m) { return is_squarefree(m); });
  for (std::uint64_t ell : ells) {
    attempt("prime_support_check", [&] { return prime_support_check(ctx, n, ell, rho); });
    for (const auto& [p, e] : ctx.factorization_of_D(ell)->factors) {
      if (ctx.exceptional().contains(p)) continue;
      attempt("absorption_congruence", [&] { return absorption_congruence(ctx, n, ell, p, rho); });
      attempt("incidence_pairing", [&] { return incidence_pairing(ctx, n, ell, p, rho); });
      if (squarefree && p != from_u64(ell)) {
        attempt("squarefree_incidence", [&] { return squarefree_incidence(ctx, n, ell, p, rho); });
      }
      if (p != from_u64(ell) && e % rho != 0) {
        attempt("multiplicity_obstruction", [&] { return multiplicity_obstruction(ctx, n, ell, p, rho); });
      }
    }
    if (exceeds_cluster_threshold(ell, th)) {
      attempt("smooth_cofactor_balance", [&] { return smooth_cofactor_balance(ctx, n, ell, rho, th); });
    }
  }

  t.cluster = cluster_packing(ctx, n, lambda.value_or(ells), rho, th);
  attempt("repeated_top_prime", [&] { return repeated_top_prime(ctx, n, rho, th); });
  if (n.size() == 2 && std::gcd(n[0], n[1]) == 1) {
    for (int flip = 0; flip < 2; ++flip) {
      const std::uint64_t m = n[flip], other = n[1 - flip];
      attempt("large_prime_gap", [&] { return large_prime_gap(ctx, m, other, rho, th); });
      attempt("smooth_cofactor_exclusion", [&] { return smooth_cofactor_exclusion(ctx, m, other, rho, th); });
    }
  }

  std::vector<std::uint64_t> radical_lambda;
  if (lambda) {
    radical_lambda = *lambda;
  } else {
    for (std::uint64_t ell : ells) {
      try {
        if (radical_lower_bound(ctx, n, {ell}, rho, th).hypotheses_verified()) radical_lambda.push_back(ell);
      } catch (const Error& e) {
        if (!skippable(e.kind())) throw;
      }
    }
  }
  attempt("radical_lower_bound", [&] { return radical_lower_bound(ctx, n, radical_lambda, rho, th); });

  for (auto& v : t.verdicts) {
    v.oracle_is_power = t.oracle.is_power;
    t.contradiction = t.contradiction || v.contradicts_oracle();
  }
  t.cluster->verdict.oracle_is_power = t.oracle.is_power;
  t.contradiction = t.contradiction || t.cluster->verdict.contradicts_oracle();
  return t;
}

std::string witness_text(const ObstructionVerdict& v) {
  std::string s;
  for (const auto& [k, val] : v.witnesses) s += (s.empty() ? "" : " ") + k + "=" + val;
  return s;
}

int cmd_obstruct(const RunConfig& cfg, const std::string& tuple_arg, const std::string& tuple_file,
                 const std::string& lambda_arg, std::ostream& out, std::ostream& err) {
  std::vector<IndexTuple> tuples;
  if (!tuple_arg.empty()) tuples.push_back(parse_index_list(tuple_arg, "tuple"));
  if (!tuple_file.empty()) {
    for (auto& t : read_tuple_file(tuple_file)) tuples.push_back(std::move(t));
  }
  if (tuples.empty()) throw Error(ErrorKind::InvalidInput, "obstruct needs --tuple or --tuple-file");
  for (const auto& t : tuples) {
    if (t.empty()) throw Error(ErrorKind::InvalidInput, "empty tuple");
  }
  std::optional<std::vector<std::uint64_t>> lambda;
  if (!lambda_arg.empty()) lambda = parse_index_list(lambda_arg, "Lambda");

  std::uint64_t N = cfg.n_max;
  for (const auto& t : tuples) N = std::max(N, *std::max_element(t.begin(), t.end()));
  if (lambda && !lambda->empty()) N = std::max(N, *std::max_element(lambda->begin(), lambda->end()));

  auto [E, P] = load_curve(cfg.curve_path);
  const EdsContext ctx = make_context(cfg, obtain_table(cfg, E, P, N));
  const ReportHeader header = make_header("obstruct", cfg, ctx);
  const auto outcomes =
      parallel_map(tuples.size(), cfg.threads, [&](std::size_t i) { return run_checkers(ctx, cfg, tuples[i], lambda); });

  bool contradiction = false;
  for (const auto& o : outcomes) contradiction = contradiction || o.contradiction;

  if (cfg.json()) {
    Json reports = Json::array();
    for (const auto& o : outcomes) {
      Json verdicts = Json::array();
      for (const auto& v : o.verdicts) verdicts.push_back(to_json(v));
      Json skipped = Json::array();
      for (const auto& [name, why] : o.skipped) skipped.push_back({{"statement", name}, {"reason", why}});
      reports.push_back({{"n", o.n},
                         {"oracle", to_json(o.oracle)},
                         {"verdicts", verdicts},
                         {"cluster_packing", to_json(*o.cluster)},
                         {"skipped", skipped},
                         {"contradiction", o.contradiction}});
    }
    out << Json{{"header", to_json(header)}, {"tuples", reports}, {"contradiction", contradiction}}.dump(2) << '\n';
  } else {
    print_text_header(out, header);
    for (const auto& o : outcomes) {
      out << "tuple " << tuple_text(o.n) << "  product=" << to_decimal(o.oracle.product)
          << "  rho-th power: " << (o.oracle.is_power ? "yes" : "no") << '\n';
      std::size_t exclusions = 0;
      auto line = [&](const ObstructionVerdict& v) {
        out << "  " << v.statement << "  " << to_string(v.verdict) << "  " << witness_text(v) << '\n';
        for (const auto& note : v.notes) out << "      note: " << note << '\n';
        exclusions += v.certifies_exclusion() ? 1 : 0;
      };
      for (const auto& v : o.verdicts) line(v);
      line(o.cluster->verdict);
      for (const auto& [name, why] : o.skipped) out << "  " << name << "  skipped: " << why << '\n';
      out << "  certified exclusions: " << exclusions << (o.contradiction ? "  CONTRADICTION" : "") << '\n';
    }
  }
  if (contradiction) {
    err << "soundness failure: a checker certified an exclusion that the direct power test refutes\n";
    return kExitUnsound;
  }
  return kExitOk;
}

// probe-detecting

int cmd_probe(const RunConfig& cfg, std::uint64_t l_min, std::uint64_t l_max, std::ostream& out) {
  auto [E, P] = load_curve(cfg.curve_path);
  const EdsContext ctx = make_context(cfg, obtain_table(cfg, E, P, std::max<std::uint64_t>(l_max, 1)));
  const ReportHeader header = make_header("probe-detecting", cfg, ctx);

  std::vector<std::uint64_t> ells;
  for (std::uint64_t ell = std::max<std::uint64_t>(l_min, 2); ell <= l_max; ++ell) {
    if (is_prime_u64(ell)) ells.push_back(ell);
  }
  ProbeReport probe;
  probe.rho = cfg.rho;
  probe.results = parallel_map(ells.size(), cfg.threads,
                               [&](std::size_t i) { return detecting_primes(ctx, ells[i], cfg.rho); });
  for (const auto& r : probe.results) {
    if (r.primes.empty()) probe.largest_without = r.ell;
  }

  if (cfg.json()) {
    out << Json{{"header", to_json(header)}, {"probe", to_json(probe)}}.dump(2) << '\n';
    return kExitOk;
  }
  print_text_header(out, header);
  for (const auto& r : probe.results) {
    out << "ell=" << r.ell << "  D_ell=" << to_decimal(ctx.table().D(r.ell)) << "  detecting:";
    if (r.primes.empty()) out << " none";
    for (const auto& dp : r.primes) {
      out << ' ' << to_decimal(dp.p) << '^' << dp.valuation << " (" << (dp.order_verified ? "order ok" : "order unverified")
          << (dp.primitive ? ", primitive" : ", not primitive") << (dp.found_by_sieve ? ", sieve" : "") << ')';
    }
    out << (r.complete ? "" : "  [partial factorization]") << '\n';
    for (const auto& note : r.notes) out << "    note: " << note << '\n';
  }
  out << "largest ell without a detecting prime: "
      << (probe.largest_without ? std::to_string(*probe.largest_without) : std::string("none in range"))
      << "  (observed within budget; not a proven L_rho)\n";
  return kExitOk;
}

void add_common(CLI::App* sub, RunConfig& cfg, std::vector<CLI::Option*>& l_rho_options) {
  sub->add_option("--curve", cfg.curve_path, "Curve and point file (JSON)")->required();
  sub->add_option("--table", cfg.table_path, "Precomputed table (JSON lines)");
  sub->add_option("--rho", cfg.rho, "Prime exponent rho")->capture_default_str();
  sub->add_option("--B", cfg.B, "Smoothness bound B")->capture_default_str();
  l_rho_options.push_back(sub->add_option("--L-rho", cfg.L_rho, "Threshold L_rho"));
  sub->add_option("--n-max", cfg.n_max, "Table range N")->capture_default_str();
  sub->add_option("--sieve-bound", cfg.sieve_bound, "Order-sieve prime bound")->capture_default_str();
  sub->add_option("--effort", cfg.effort_spec, "Factoring budget: trial=N,rho=N,seconds=S");
  sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  sub->add_flag("--strict", cfg.strict, "Strict mode: thresholds must be explicit");
  sub->add_option("--extra-primes", cfg.extra_primes, "Primes to adjoin to S, comma separated");
  sub->add_flag("--no-small-prime-guard", cfg.no_guard, "Leave 2 and 3 out of S unless otherwise exceptional");
  sub->add_option("--max-digits", cfg.max_digits, "Refuse tables beyond this many digits")->capture_default_str();
  sub->add_option("--threads", cfg.threads, "Worker threads (0: all cores)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Elliptic divisibility sequences: tables, valuation law, obstruction checks", "eds"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::vector<CLI::Option*> l_rho_options;

  auto* gen = app.add_subcommand("gen", "Generate a table of D_1..D_N");
  add_common(gen, cfg, l_rho_options);
  std::string out_path;
  gen->add_option("--out", out_path, "Output table file");

  auto* law = app.add_subcommand("verify-law", "Check the valuation law prime by prime");
  add_common(law, cfg, l_rho_options);
  std::uint64_t p_min = 2, p_max = 100;
  law->add_option("--p-min", p_min)->capture_default_str();
  law->add_option("--p-max", p_max)->capture_default_str();

  auto* obstruct = app.add_subcommand("obstruct", "Run every applicable obstruction checker on tuples");
  add_common(obstruct, cfg, l_rho_options);
  std::string tuple_arg, tuple_file, lambda_arg;
  obstruct->add_option("--tuple", tuple_arg, "Tuple such as 5,3");
  obstruct->add_option("--tuple-file", tuple_file, "One tuple per line");
  obstruct->add_option("--lambda", lambda_arg, "Prime set Lambda, comma separated");

  auto* probe = app.add_subcommand("probe-detecting", "List detecting primes for prime indices");
  add_common(probe, cfg, l_rho_options);
  std::uint64_t l_min = 2, l_max = 31;
  probe->add_option("--l-min", l_min)->capture_default_str();
  probe->add_option("--l-max", l_max)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  for (auto* opt : l_rho_options) cfg.L_rho_given = cfg.L_rho_given || opt->count() > 0;

  try {
    cfg.validate();
    if (gen->parsed()) return cmd_gen(cfg, out_path, out);
    if (law->parsed()) return cmd_verify_law(cfg, p_min, p_max, out);
    if (obstruct->parsed()) return cmd_obstruct(cfg, tuple_arg, tuple_file, lambda_arg, out, err);
    return cmd_probe(cfg, l_min, l_max, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace eds
