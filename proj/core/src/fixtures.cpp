#include "lcm/fixtures.hpp"

#include "lcm/model_json.hpp"

namespace lcmid {

Model cycle_model(int n, std::vector<int> leaks) {
    std::vector<Edge> edges;
    for (int i = 1; i <= n; ++i) edges.push_back({i, i % n + 1});
    if (n == 1) edges.clear();
    return Model(n, std::move(edges), {1}, {n}, std::move(leaks));
}

Model fig1_model() {
    return Model(3, {{1, 2}, {2, 1}, {2, 3}, {3, 2}}, {1}, {3}, {1, 2});
}

Model fig2_model() {
    return Model(4, {{1, 2}, {2, 1}, {2, 4}, {3, 2}, {1, 3}, {4, 3}}, {2}, {1}, {});
}

Model fig3_model() {
    return Model(5, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}, {1, 4}, {5, 3}, {4, 1}}, {1}, {1}, {});
}

Model fig4_model() {
    return Model(5, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}, {1, 3}, {5, 3}, {4, 1}}, {1}, {1}, {});
}

Model fig5_model() {
    return Model(5, {{1, 2}, {3, 2}, {2, 3}, {3, 4}, {4, 3}, {4, 1}, {5, 4}, {2, 5}}, {3}, {4}, {});
}

Model fig6_model() {
    return Model(4, {{1, 2}, {2, 3}, {1, 4}, {4, 1}, {3, 1}}, {1}, {1}, {});
}

std::vector<Fixture> bundled_fixtures() {
    std::vector<Fixture> out;
    out.push_back({"fig1", "three-compartment catenary with two leaks", fig1_model(), "unidentifiable", {},
                   "six parameters against four nontrivial coefficients"});
    out.push_back({"fig2", "four-compartment model, input 2, output 1", fig2_model(), "identifiable",
                   {"k_{1,2}", "k_{2,3}"},
                   "square 6x6 Jacobian with a nonzero determinant, so the generic rank is 6 (not 5)"});
    out.push_back({"fig3", "five-compartment model with edge 1->4", fig3_model(), "identifiable",
                   {"k_{4,1}", "k_{4,3}", "k_{5,4}"},
                   "removing k_{4,1} keeps strong connectivity and gives an unidentifiable model"});
    out.push_back({"fig4", "five-compartment model with edge 1->3", fig4_model(), "unidentifiable", {},
                   "differs from fig3 only by replacing edge 1->4 with 1->3"});
    out.push_back({"fig5", "five-compartment model, input 3, output 4", fig5_model(), "identifiable",
                   {"k_{4,3}"},
                   "removing k_{4,3} raises the input-output distance from 1 to 3"});
    out.push_back({"fig6", "four-compartment model with a 6x5 Jacobian", fig6_model(), "identifiable", {},
                   "no parameter divides all six maximal minors; k_{1,4} divides one of them"});
    for (int n = 3; n <= 6; ++n) {
        out.push_back({"cycle" + std::to_string(n),
                       "directed " + std::to_string(n) + "-cycle, input 1, output " + std::to_string(n),
                       cycle_model(n), "identifiable", {},
                       "with two leaks the cycle is unidentifiable; with one the too-many-leaks bound is not met"});
    }
    return out;
}

std::optional<Fixture> find_fixture(const std::string& name) {
    for (auto& f : bundled_fixtures()) {
        if (f.name == name) return f;
    }
    return std::nullopt;
}

nlohmann::json fixture_to_json(const Fixture& f) {
    nlohmann::json j = model_to_json(f.model);
    nlohmann::json meta{{"name", f.name}, {"description", f.description},
                        {"expected", {{"status", f.expected_status}}}, {"notes", f.notes}};
    if (!f.expected_dividing_edges.empty()) meta["expected"]["dividing_edges"] = f.expected_dividing_edges;
    j["meta"] = std::move(meta);
    return j;
}

} // namespace lcmid
