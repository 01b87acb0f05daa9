#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcm/model.hpp"

namespace lcmid {

/// A bundled reference model together with the results it is known to
/// produce.
struct Fixture {
    std::string name;  // file stem, e.g. "fig2"
    std::string description;
    Model model;
    std::string expected_status;  // "identifiable" | "unidentifiable"
    /// Expected dividing edges as k_{i,j} names; empty when not recorded.
    std::vector<std::string> expected_dividing_edges;
    std::string notes;
};

/// Directed cycle 1 -> 2 -> ... -> n -> 1 with In = {1}, Out = {n}.
Model cycle_model(int n, std::vector<int> leaks = {});

Model fig1_model();
Model fig2_model();
Model fig3_model();
Model fig4_model();
Model fig5_model();
Model fig6_model();

/// fig1..fig6 followed by cycle3..cycle6.
std::vector<Fixture> bundled_fixtures();
std::optional<Fixture> find_fixture(const std::string& name);

/// Model JSON plus a "meta" block.
nlohmann::json fixture_to_json(const Fixture& f);

} // namespace lcmid
