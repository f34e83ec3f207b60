#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "eds/curve.hpp"
#include "eds/obstruction.hpp"
#include "eds/relation.hpp"
#include "eds/valuation_law.hpp"

namespace eds {

using Json = nlohmann::ordered_json;

Json to_json(const Factorization& f);
Json to_json(const ExceptionalSet& S);
Json to_json(const LawReport& r);
Json to_json(const DetectingResult& r);
Json to_json(const ProbeReport& r);
Json to_json(const ObstructionVerdict& v);
Json to_json(const ClusterReport& r);
Json to_json(const ProductRelation& r);

/// Everything needed to reproduce a run. `generated_at` is the only field
/// that varies between identical runs.
struct ReportHeader {
  std::string command;
  std::string curve_hash;
  Json curve;
  unsigned rho = 2;
  Thresholds thresholds;
  std::uint64_t n_max = 0;
  std::uint64_t sieve_bound = 0;
  Effort effort;
  CountingLimits limits;
  bool small_prime_guard = true;
  MinimalityCheck minimality;
  ExceptionalSet exceptional;
};

Json to_json(const ReportHeader& h);

/// Curve and point as decimal strings, the same schema as curve files.
Json curve_json(const WeierstrassCurve& E, const RatPoint& P);

}  // namespace eds
