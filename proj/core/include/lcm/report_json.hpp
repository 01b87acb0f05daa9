#pragma once

#include <json.hpp>

#include "lcm/identifiability.hpp"
#include "lcm/ioeq.hpp"
#include "lcm/lab.hpp"
#include "lcm/singular.hpp"

namespace lcmid {

inline constexpr const char* kToolVersion = "0.3.0";

/// Polynomials with more terms than this are summarized in text output.
inline constexpr std::size_t kTextTermLimit = 10'000;

nlohmann::json to_json(const Parameter& p);
nlohmann::json to_json(const CoeffLabel& label);
nlohmann::json to_json(const CoefficientMap& c);
nlohmann::json to_json(const IoEquation& eq, const VarTable& vars);
nlohmann::json to_json(const RankEstimate& r);
nlohmann::json to_json(const Verdict& v, const VarTable& vars);
nlohmann::json to_json(const SingularLocusReport& r);
nlohmann::json to_json(const RemovalAnalysis& r, const VarTable& vars);
nlohmann::json to_json(const ScanSpec& s);
nlohmann::json to_json(const Tally& t);
nlohmann::json to_json(const ScanResult& r);

/// {"terms": N, "degree": D, "text": "..."}
nlohmann::json polynomial_json(const MultiPoly& p, const VarTable& vars);

/// Full rendering up to kTextTermLimit terms, otherwise a summary with the
/// term count, the degree and the leading terms.
std::string summarize(const MultiPoly& p, const VarTable& vars);

} // namespace lcmid
