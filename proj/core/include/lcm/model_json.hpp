#pragma once

#include <istream>
#include <string>

#include <json.hpp>

#include "lcm/model.hpp"

namespace lcmid {

/// {"n": 4, "edges": [[1,2],...], "in": [2], "out": [1], "leak": []}
/// Edges are [from, to]. Keys other than these and an optional "meta" object
/// are rejected. Malformed documents raise AnalysisError(invalid_model);
/// structural problems are left to `validate`.
Model model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const Model& m);

Model parse_model(const std::string& text);
Model read_model(std::istream& in);
/// Reads a file, or standard input when `path` is "-".
Model load_model(const std::string& path);

/// Canonical single-line encoding; used for deterministic ordering and
/// duplicate detection.
std::string encode(const Model& m);

} // namespace lcmid
