#include "eds/report.hpp"

#include <chrono>
#include <ctime>

namespace eds {

Json to_json(const Factorization& f) {
  Json factors = Json::array();
  for (const auto& pp : f.factors) factors.push_back({to_decimal(pp.prime), pp.exponent});
  return {{"factors", factors}, {"cofactor", to_decimal(f.cofactor)}, {"status", to_string(f.status)}};
}

Json to_json(const ExceptionalSet& S) {
  Json out = Json::array();
  for (const auto& [p, mask] : S.entries()) {
    Json reasons = Json::array();
    for (Provenance why : S.reasons(p)) reasons.push_back(to_string(why));
    out.push_back({{"p", to_decimal(p)}, {"reasons", reasons}});
  }
  return out;
}

Json to_json(const LawReport& r) {
  Json violations = Json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"n", v.n}, {"clause", v.clause}, {"observed", v.observed}, {"predicted", v.predicted}});
  }
  return {{"p", r.p}, {"r_p", r.r_p}, {"n_max", r.n_max}, {"holds", r.holds()}, {"violations", violations}};
}

Json to_json(const DetectingResult& r) {
  Json primes = Json::array();
  for (const auto& dp : r.primes) {
    primes.push_back({{"p", to_decimal(dp.p)},
                      {"valuation", dp.valuation},
                      {"found_by_sieve", dp.found_by_sieve},
                      {"order_verified", dp.order_verified},
                      {"primitive", dp.primitive}});
  }
  return {{"ell", r.ell}, {"rho", r.rho}, {"complete", r.complete}, {"primes", primes}, {"notes", r.notes}};
}

Json to_json(const ProbeReport& r) {
  Json results = Json::array();
  for (const auto& d : r.results) results.push_back(to_json(d));
  Json largest = r.largest_without ? Json(*r.largest_without) : Json(nullptr);
  return {{"rho", r.rho},
          {"results", results},
          {"largest_ell_without_detecting_prime", largest},
          {"largest_ell_note", "observed within budget; not a proven value of L_rho"}};
}

Json to_json(const ObstructionVerdict& v) {
  Json hypotheses = Json::array();
  for (const auto& h : v.hypotheses) hypotheses.push_back({{"name", h.name}, {"satisfied", h.satisfied}});
  Json ordered = Json::array();
  for (const auto& [k, val] : v.witnesses) ordered.push_back({k, val});
  Json oracle = v.oracle_is_power ? Json(*v.oracle_is_power) : Json(nullptr);
  return {{"statement", v.statement},
          {"verdict", to_string(v.verdict)},
          {"hypotheses", hypotheses},
          {"witnesses", ordered},
          {"notes", v.notes},
          {"oracle_is_power", oracle}};
}

Json to_json(const ClusterReport& r) {
  Json dropped = Json::array();
  for (const auto& [ell, why] : r.dropped) dropped.push_back({{"ell", ell}, {"reason", why}});
  return {{"rho", r.rho},
          {"k", r.k},
          {"lambda", r.lambda},
          {"dropped", dropped},
          {"lambda_star", r.lambda_star},
          {"row_weights", r.weights},
          {"times_ones", r.times_ones},
          {"rank", r.rank},
          {"conclusions", r.conclusions},
          {"verdict", to_json(r.verdict)}};
}

Json to_json(const ProductRelation& r) {
  return {{"n", r.n}, {"rho", r.rho}, {"product", to_decimal(r.product)}, {"is_power", r.is_power}};
}

Json curve_json(const WeierstrassCurve& E, const RatPoint& P) {
  Json point = P.is_infinity() ? Json(nullptr) : Json{{"x", to_fraction(P.x())}, {"y", to_fraction(P.y())}};
  return {{"a1", to_decimal(E.a1())}, {"a2", to_decimal(E.a2())}, {"a3", to_decimal(E.a3())},
          {"a4", to_decimal(E.a4())}, {"a6", to_decimal(E.a6())}, {"point", point}};
}

Json to_json(const ReportHeader& h) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return {{"tool_version", std::string(kToolVersion)},
          {"command", h.command},
          {"curve_hash", h.curve_hash},
          {"curve", h.curve},
          {"rho", h.rho},
          {"B", h.thresholds.B},
          {"L_rho", h.thresholds.L_rho},
          {"mode", h.thresholds.strict ? "strict" : "exploration"},
          {"n_max", h.n_max},
          {"sieve_bound", h.sieve_bound},
          {"effort", h.effort.to_string()},
          {"counting", {{"naive_below", h.limits.naive_below}, {"cap", h.limits.cap}}},
          {"small_prime_guard", h.small_prime_guard},
          {"minimal_model_certified", h.minimality.certified},
          {"minimality_notes", h.minimality.notes},
          {"exceptional_set", to_json(h.exceptional)},
          {"generated_at", stamp}};
}

}  // namespace eds
