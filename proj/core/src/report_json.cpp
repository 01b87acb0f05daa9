#include "lcm/report_json.hpp"

#include "lcm/model_json.hpp"

namespace lcmid {

using nlohmann::json;

json to_json(const Parameter& p) {
    return p.name();
}

json to_json(const CoeffLabel& label) {
    return {{"label", label.to_string()},
            {"equation", label.equation},
            {"side", label.side == Side::output ? "output" : "input"},
            {"order", label.order},
            {"signal", label.signal}};
}

json polynomial_json(const MultiPoly& p, const VarTable& vars) {
    return {{"terms", p.term_count()}, {"degree", p.total_degree()}, {"text", to_string(p, vars)}};
}

std::string summarize(const MultiPoly& p, const VarTable& vars) {
    if (p.term_count() <= kTextTermLimit) return to_string(p, vars);
    std::vector<Term> head(p.terms().begin(), p.terms().begin() + 3);
    return "<" + std::to_string(p.term_count()) + " terms, degree " + std::to_string(p.total_degree())
        + ", leading " + to_string(MultiPoly::from_terms(std::move(head)), vars) + " + ...>";
}

json to_json(const CoefficientMap& c) {
    json params = json::array();
    for (const auto& p : c.vars.parameters()) params.push_back(p.name());
    json entries = json::array();
    for (const auto& e : c.entries) {
        json j = to_json(e.label);
        j["polynomial"] = polynomial_json(e.poly, c.vars);
        entries.push_back(std::move(j));
    }
    return {{"parameters", std::move(params)}, {"size", c.size()}, {"coefficients", std::move(entries)}};
}

namespace {

json operator_json(const DiffOpPoly& op, const VarTable& vars) {
    json out = json::array();
    for (int k = op.degree(); k >= 0; --k) {
        out.push_back({{"order", k}, {"polynomial", polynomial_json(op.coefficient(k), vars)}});
    }
    return out;
}

} // namespace

json to_json(const IoEquation& eq, const VarTable& vars) {
    json rhs = json::array();
    for (const auto& t : eq.rhs) {
        rhs.push_back({{"input", t.input}, {"sign", t.sign}, {"operator", operator_json(t.signed_operator(), vars)}});
    }
    return {{"output", eq.output}, {"lhs", operator_json(eq.lhs, vars)}, {"rhs", std::move(rhs)}};
}

json to_json(const RankEstimate& r) {
    json j{{"rank", r.rank},
           {"certainty", to_string(r.certainty)},
           {"seed", r.seed},
           {"primes", r.primes},
           {"trial_ranks", r.trial_ranks},
           {"minor_degree_bound", r.minor_degree_bound},
           {"failure_bound", r.failure_bound}};
    if (r.certified_rank) j["certified_rank"] = *r.certified_rank;
    return j;
}

json to_json(const Verdict& v, const VarTable& vars) {
    json j{{"status", to_string(v.status)},
           {"method", to_string(v.method)},
           {"exact", v.exact},
           {"parameters", v.parameters},
           {"coefficients", v.coefficients},
           {"rank", v.rank_info ? json(v.rank) : json(nullptr)}};
    if (v.rank_info) j["rank_estimate"] = to_json(*v.rank_info);
    if (v.certificate) {
        const auto& c = *v.certificate;
        json cj{{"kind", c.kind == Certificate::Kind::nonzero_minor ? "nonzero-minor" : "all-minors-zero"},
                {"symbolic_rank", c.symbolic_rank}};
        if (c.kind == Certificate::Kind::nonzero_minor) {
            cj["rows"] = c.rows;
            cj["minor"] = polynomial_json(c.minor, vars);
        }
        j["certificate"] = std::move(cj);
    }
    return j;
}

json to_json(const SingularLocusReport& r) {
    json params = json::array();
    for (const auto& p : r.vars.parameters()) params.push_back(p.name());
    json minors = json::array();
    for (const auto& m : r.minors) {
        json divs = json::array();
        for (std::size_t v = 0; v < m.divisible.size(); ++v) {
            if (m.divisible[v]) divs.push_back(r.vars[static_cast<VarId>(v)].name());
        }
        minors.push_back({{"rows", m.rows}, {"polynomial", polynomial_json(m.value, r.vars)}, {"divisible_by", divs}});
    }
    json edges = json::array();
    for (const auto& d : r.dividing_edges) {
        edges.push_back({{"parameter", d.edge.name()},
                         {"from", d.edge.from},
                         {"to", d.edge.to},
                         {"strongly_connected_after_removal", d.strongly_connected_after_removal}});
    }
    json leaks = json::array();
    for (const auto& [p, divides] : r.leak_divides) leaks.push_back({{"parameter", p.name()}, {"divides", divides}});
    json j{{"parameters", std::move(params)},
           {"square", r.square},
           {"parameter_count", r.parameters},
           {"coefficient_count", r.coefficients},
           {"minors", std::move(minors)},
           {"dividing_edges", std::move(edges)},
           {"leak_divisibility", std::move(leaks)}};
    if (r.equation) j["equation"] = polynomial_json(*r.equation, r.vars);
    return j;
}

json to_json(const RemovalAnalysis& r, const VarTable&) {
    json j{{"parameter", r.edge.name()},
           {"outcome", to_string(r.outcome)},
           {"theorem_applies", r.theorem_applies}};
    j["path_before"] = r.path_before ? json(*r.path_before) : json(nullptr);
    j["path_after"] = r.path_after ? json(*r.path_after) : json(nullptr);
    if (r.verdict) {
        // The verdict belongs to the reduced model; its certificate uses the
        // reduced variable table.
        json v{{"status", to_string(r.verdict->status)},
               {"method", to_string(r.verdict->method)},
               {"exact", r.verdict->exact},
               {"parameters", r.verdict->parameters},
               {"coefficients", r.verdict->coefficients},
               {"rank", r.verdict->rank_info ? json(r.verdict->rank) : json(nullptr)}};
        j["verdict"] = std::move(v);
    }
    return j;
}

json to_json(const ScanSpec& s) {
    json j{{"min_n", s.min_n},
           {"max_n", s.max_n},
           {"leak_budget", s.leak_budget},
           {"placement", s.placement == Placement::fixed ? "fixed" : "all-single"},
           {"conjecture", to_string(s.conjecture)},
           {"seed", s.seed},
           {"jobs", s.jobs},
           {"time_budget_ms", s.time_budget.count()},
           {"dedup_isomorphic", s.dedup_isomorphic}};
    if (s.placement == Placement::fixed) {
        j["input"] = s.fixed_input;
        j["output"] = s.fixed_output;
    }
    if (s.max_edges) j["max_edges"] = *s.max_edges;
    return j;
}

json to_json(const Tally& t) {
    return {{"theorem_backed", t.theorem_backed},
            {"examined", t.examined},
            {"consistent", t.consistent},
            {"counterexample", t.counterexample},
            {"skipped", t.skipped},
            {"skipped_reasons", t.skipped_reasons}};
}

json to_json(const ScanResult& r) {
    json tallies = json::object();
    for (const auto& [name, t] : r.tallies) tallies[name] = to_json(t);
    json cex = json::array();
    for (const auto& c : r.counterexamples) {
        cex.push_back({{"tally", c.tally}, {"model", model_to_json(c.model)}});
    }
    return {{"spec", to_json(r.spec)},
            {"models_examined", r.models_examined},
            {"tallies", std::move(tallies)},
            {"stats", r.stats},
            {"theorem_violations", r.theorem_violations()},
            {"conjecture_counterexamples", r.conjecture_counterexamples()},
            {"counterexamples", std::move(cex)},
            {"wall_seconds", r.wall_seconds}};
}

} // namespace lcmid
