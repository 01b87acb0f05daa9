#include "lcm/lab.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <numeric>
#include <set>
#include <unordered_set>

#include "lcm/errors.hpp"
#include "lcm/identifiability.hpp"
#include "lcm/model_json.hpp"
#include "lcm/parallel.hpp"
#include "lcm/report_json.hpp"
#include "lcm/singular.hpp"

namespace lcmid {

std::size_t default_jobs() {
    if (const char* env = std::getenv("LCMIDENT_JOBS")) {
        try {
            long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

const char* to_string(Conjecture c) {
    switch (c) {
    case Conjecture::remove_leak: return "remove-leak";
    case Conjecture::add_leak: return "add-leak";
    case Conjecture::dividing_edge: return "dividing-edge";
    case Conjecture::leak_divisibility: return "leak-divisibility";
    case Conjecture::counts: return "counts";
    }
    return "?";
}

std::optional<Conjecture> parse_conjecture(const std::string& s) {
    for (auto c : {Conjecture::remove_leak, Conjecture::add_leak, Conjecture::dividing_edge,
                   Conjecture::leak_divisibility, Conjecture::counts}) {
        if (s == to_string(c)) return c;
    }
    return std::nullopt;
}

void validate(const ScanSpec& spec) {
    auto fail = [](const std::string& why) { throw AnalysisError(ErrorKind::precondition, "scan spec: " + why); };
    if (spec.min_n < 1 || spec.max_n < spec.min_n) fail("need 1 <= min_n <= max_n");
    if (spec.max_n > 6) fail("max_n is limited to 6");
    if (spec.leak_budget < 0) fail("leak budget must be nonnegative");
    if (spec.jobs < 1) fail("jobs must be positive");
    if (spec.time_budget.count() <= 0) fail("time budget must be positive");
    if (spec.placement == Placement::fixed
        && (spec.fixed_input < 1 || spec.fixed_output < 1 || spec.fixed_input > spec.min_n
            || spec.fixed_output > spec.min_n)) {
        fail("fixed input/output must exist in every enumerated size");
    }
}

// ---------------------------------------------------------------- enumeration

namespace {

std::vector<Edge> arc_list(int n) {
    std::vector<Edge> arcs;
    for (int from = 1; from <= n; ++from) {
        for (int to = 1; to <= n; ++to) {
            if (from != to) arcs.push_back({from, to});
        }
    }
    return arcs;
}

bool strongly_connected_mask(int n, std::uint64_t mask, const std::vector<Edge>& arcs) {
    std::vector<std::uint32_t> out(static_cast<std::size_t>(n)), in(static_cast<std::size_t>(n));
    for (std::size_t a = 0; a < arcs.size(); ++a) {
        if (!(mask >> a & 1U)) continue;
        out[static_cast<std::size_t>(arcs[a].from - 1)] |= 1U << (arcs[a].to - 1);
        in[static_cast<std::size_t>(arcs[a].to - 1)] |= 1U << (arcs[a].from - 1);
    }
    const std::uint32_t all = (1U << n) - 1;
    for (const auto* adj : {&out, &in}) {
        std::uint32_t seen = 1, frontier = 1;
        while (frontier) {
            std::uint32_t next = 0;
            for (int v = 0; v < n; ++v) {
                if (frontier >> v & 1U) next |= (*adj)[static_cast<std::size_t>(v)];
            }
            frontier = next & ~seen;
            seen |= next;
        }
        if (seen != all) return false;
    }
    return true;
}

std::vector<std::vector<int>> leak_sets(int n, int budget) {
    std::vector<std::vector<int>> out;
    for (int size = 0; size <= std::min(budget, n); ++size) {
        std::vector<bool> pick(static_cast<std::size_t>(n), false);
        std::fill(pick.begin(), pick.begin() + size, true);
        do {
            std::vector<int> set;
            for (int i = 0; i < n; ++i) {
                if (pick[static_cast<std::size_t>(i)]) set.push_back(i + 1);
            }
            out.push_back(std::move(set));
        } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    return out;
}

} // namespace

std::size_t count_strongly_connected_digraphs(int n) {
    if (n < 1 || n > 5) throw AnalysisError(ErrorKind::precondition, "count only supported for 1 <= n <= 5");
    const auto arcs = arc_list(n);
    std::size_t count = 0;
    for (std::uint64_t mask = 0; mask < (1ULL << arcs.size()); ++mask) {
        if (strongly_connected_mask(n, mask, arcs)) ++count;
    }
    return count;
}

std::string canonical_encoding(const Model& m) {
    const int n = m.size();
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    std::string best;
    auto relabel = [&](const std::vector<int>& xs) {
        std::vector<int> ys;
        for (int x : xs) ys.push_back(perm[static_cast<std::size_t>(x - 1)]);
        return ys;
    };
    do {
        std::vector<Edge> edges;
        for (const auto& e : m.edges()) {
            edges.push_back({perm[static_cast<std::size_t>(e.from - 1)], perm[static_cast<std::size_t>(e.to - 1)]});
        }
        Model r(n, std::move(edges), relabel(m.inputs()), relabel(m.outputs()), relabel(m.leaks()));
        std::string enc = encode(r);
        if (best.empty() || enc < best) best = std::move(enc);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

void for_each_model(const ScanSpec& spec, const std::function<void(const Model&)>& fn) {
    validate(spec);
    std::unordered_set<std::string> seen;
    for (int n = spec.min_n; n <= spec.max_n; ++n) {
        const auto arcs = arc_list(n);
        const auto leaks = leak_sets(n, spec.leak_budget);
        for (std::uint64_t mask = 0; mask < (1ULL << arcs.size()); ++mask) {
            if (spec.max_edges && std::popcount(mask) > *spec.max_edges) continue;
            if (!strongly_connected_mask(n, mask, arcs)) continue;
            std::vector<Edge> edges;
            for (std::size_t a = 0; a < arcs.size(); ++a) {
                if (mask >> a & 1U) edges.push_back(arcs[a]);
            }
            for (int in = 1; in <= n; ++in) {
                for (int out = 1; out <= n; ++out) {
                    if (spec.placement == Placement::fixed
                        && (in != spec.fixed_input || out != spec.fixed_output)) {
                        continue;
                    }
                    for (const auto& leak : leaks) {
                        Model m(n, edges, {in}, {out}, leak);
                        if (spec.dedup_isomorphic && !seen.insert(canonical_encoding(m)).second) continue;
                        fn(m);
                    }
                }
            }
        }
    }
}

std::vector<Model> enumerate_models(const ScanSpec& spec) {
    std::vector<Model> out;
    for_each_model(spec, [&](const Model& m) { out.push_back(m); });
    return out;
}

// ---------------------------------------------------------------- scans

std::size_t ScanResult::theorem_violations() const {
    std::size_t n = 0;
    for (const auto& [name, t] : tallies) {
        if (t.theorem_backed) n += t.counterexample;
    }
    return n;
}

std::size_t ScanResult::conjecture_counterexamples() const {
    std::size_t n = 0;
    for (const auto& [name, t] : tallies) {
        if (!t.theorem_backed) n += t.counterexample;
    }
    return n;
}

namespace {

enum class Outcome { consistent, counterexample, skipped };

struct TallyEntry {
    std::string tally;
    Outcome outcome;
    std::string reason;  // for skipped
    nlohmann::json evidence;  // for counterexample
};

struct ModelReport {
    std::vector<TallyEntry> entries;
    std::map<std::string, std::size_t> stats;
};

struct TallyDef {
    std::string name;
    bool theorem_backed;
};

std::vector<TallyDef> tally_defs(Conjecture c) {
    switch (c) {
    case Conjecture::remove_leak: return {{"remove-leak", false}};
    case Conjecture::add_leak: return {{"add-leak", false}, {"add-leak-theorem", true}};
    case Conjecture::dividing_edge: return {{"dividing-edge", false}, {"dividing-edge-theorem", true}};
    case Conjecture::leak_divisibility: return {{"leak-divisibility", false}, {"equivalence-identity", true}};
    case Conjecture::counts: return {{"counts", true}};
    }
    return {};
}

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

nlohmann::json base_evidence(const Model& m) {
    return {{"model", model_to_json(m)}};
}

void skip_all(ModelReport& r, Conjecture c, const std::string& reason) {
    for (const auto& d : tally_defs(c)) r.entries.push_back({d.name, Outcome::skipped, reason, {}});
}

ModelReport check_remove_leak(const Model& m, const DecideOptions& opt) {
    ModelReport r;
    const std::string t = "remove-leak";
    if (m.leaks().size() != 1) {
        r.entries.push_back({t, Outcome::skipped, "not-one-leak", {}});
        return r;
    }
    const auto cmap = coefficient_map(m, opt.deadline);
    const Verdict with_leak = decide(m, cmap, opt);
    if (with_leak.status != Status::identifiable) {
        r.entries.push_back({t, Outcome::skipped, "hypothesis-unmet", {}});
        return r;
    }
    const Model reduced = apply(m, Mutation::remove_leak(m.leaks().front()));
    const auto reduced_map = coefficient_map(reduced, opt.deadline);
    const Verdict without = decide(reduced, reduced_map, opt);
    if (without.status == Status::identifiable) {
        r.entries.push_back({t, Outcome::consistent, "", {}});
    } else if (without.status == Status::unidentifiable && without.exact) {
        auto ev = base_evidence(m);
        ev["coefficient_map"] = to_json(cmap);
        ev["verdict"] = to_json(with_leak, cmap.vars);
        ev["reduced_model"] = model_to_json(reduced);
        ev["reduced_coefficient_map"] = to_json(reduced_map);
        ev["reduced_verdict"] = to_json(without, reduced_map.vars);
        r.entries.push_back({t, Outcome::counterexample, "", std::move(ev)});
    } else {
        r.entries.push_back({t, Outcome::skipped, "undetermined", {}});
    }
    return r;
}

ModelReport check_add_leak(const Model& m, const DecideOptions& opt) {
    ModelReport r;
    const auto cmap = coefficient_map(m, opt.deadline);
    const Verdict base = decide(m, cmap, opt);
    if (base.status != Status::unidentifiable || !base.exact) {
        skip_all(r, Conjecture::add_leak, base.status == Status::identifiable ? "identifiable" : "undetermined");
        return r;
    }
    const auto additions = applicable_mutations(m, Mutation::Action::add_leak);
    if (additions.empty()) {
        skip_all(r, Conjecture::add_leak, "no-leak-to-add");
        return r;
    }
    const bool covered = m.single_input_output() && cmap.size() < m.parameter_count();
    bool conjecture_ok = true;
    bool undetermined = false;
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& mut : additions) {
        const Model grown = apply(m, mut);
        const auto gmap = coefficient_map(grown, opt.deadline);
        const Verdict v = decide(grown, gmap, opt);
        ++r.stats["instances"];
        if (covered) ++r.stats["theorem-covered-instances"];
        if (v.status == Status::unidentifiable) continue;
        if (v.status == Status::undetermined || !v.exact) {
            undetermined = true;
            continue;
        }
        conjecture_ok = false;
        failures.push_back({{"mutation", mut.describe()},
                            {"grown_model", model_to_json(grown)},
                            {"grown_coefficient_map", to_json(gmap)},
                            {"grown_verdict", to_json(v, gmap.vars)}});
    }
    auto evidence = [&] {
        auto ev = base_evidence(m);
        ev["coefficient_map"] = to_json(cmap);
        ev["verdict"] = to_json(base, cmap.vars);
        ev["failures"] = failures;
        return ev;
    };
    if (!conjecture_ok) {
        r.entries.push_back({"add-leak", Outcome::counterexample, "", evidence()});
    } else if (undetermined) {
        r.entries.push_back({"add-leak", Outcome::skipped, "undetermined", {}});
    } else {
        r.entries.push_back({"add-leak", Outcome::consistent, "", {}});
    }
    if (!covered) {
        r.entries.push_back({"add-leak-theorem", Outcome::skipped, "hypothesis-unmet", {}});
    } else if (!conjecture_ok) {
        r.entries.push_back({"add-leak-theorem", Outcome::counterexample, "", evidence()});
    } else {
        r.entries.push_back({"add-leak-theorem", Outcome::consistent, "", {}});
    }
    return r;
}

ModelReport check_dividing_edges(const Model& m, const DecideOptions& opt) {
    ModelReport r;
    const Verdict base = decide(m, opt);
    if (base.status != Status::identifiable) {
        skip_all(r, Conjecture::dividing_edge, "unidentifiable");
        return r;
    }
    const auto rep = singular_locus(m, opt);
    if (rep.dividing_edges.empty()) {
        skip_all(r, Conjecture::dividing_edge, "no-dividing-edges");
        return r;
    }
    const auto analysis = dividing_edge_removal_analysis(m, rep, opt);
    r.stats["dividing-edges"] += analysis.size();
    bool any_applicable = false;
    bool any_identifiable = false;
    bool any_undetermined = false;
    bool any_theorem = false;
    bool theorem_ok = true;
    for (const auto& ra : analysis) {
        if (ra.outcome == RemovalOutcome::not_applicable) {
            ++r.stats["dividing-edges-breaking-strong-connectivity"];
            continue;
        }
        any_applicable = true;
        const bool exact = ra.verdict && ra.verdict->exact;
        if (ra.outcome == RemovalOutcome::identifiable && exact) any_identifiable = true;
        if (ra.outcome == RemovalOutcome::undetermined || !exact) any_undetermined = true;
        if (ra.theorem_applies) {
            any_theorem = true;
            ++r.stats["theorem-covered-edges"];
            if (ra.outcome != RemovalOutcome::unidentifiable) theorem_ok = false;
        }
    }
    auto evidence = [&] {
        auto ev = base_evidence(m);
        ev["coefficient_map"] = to_json(coefficient_map(m, opt.deadline));
        ev["singular_locus"] = to_json(rep);
        nlohmann::json removals = nlohmann::json::array();
        for (const auto& ra : analysis) removals.push_back(to_json(ra, rep.vars));
        ev["removals"] = std::move(removals);
        return ev;
    };
    if (!any_applicable) {
        r.entries.push_back({"dividing-edge", Outcome::skipped, "no-applicable-edge", {}});
    } else if (any_identifiable) {
        r.entries.push_back({"dividing-edge", Outcome::counterexample, "", evidence()});
    } else if (any_undetermined) {
        r.entries.push_back({"dividing-edge", Outcome::skipped, "undetermined", {}});
    } else {
        r.entries.push_back({"dividing-edge", Outcome::consistent, "", {}});
    }
    if (!any_theorem) {
        r.entries.push_back({"dividing-edge-theorem", Outcome::skipped, "hypothesis-unmet", {}});
    } else if (!theorem_ok) {
        r.entries.push_back({"dividing-edge-theorem", Outcome::counterexample, "", evidence()});
    } else {
        r.entries.push_back({"dividing-edge-theorem", Outcome::consistent, "", {}});
    }
    return r;
}

ModelReport check_leak_divisibility(const Model& m, const DecideOptions& opt) {
    ModelReport r;
    if (m.leaks().empty()) {
        skip_all(r, Conjecture::leak_divisibility, "no-leak");
        return r;
    }
    const Verdict base = decide(m, opt);
    if (base.status != Status::identifiable) {
        skip_all(r, Conjecture::leak_divisibility, "unidentifiable");
        return r;
    }
    const auto rep = singular_locus(m, opt);
    if (!rep.square) {
        skip_all(r, Conjecture::leak_divisibility, "non-square");
        return r;
    }
    bool divides = std::any_of(rep.leak_divides.begin(), rep.leak_divides.end(),
                               [](const auto& p) { return p.second; });
    if (divides) {
        auto ev = base_evidence(m);
        ev["coefficient_map"] = to_json(coefficient_map(m, opt.deadline));
        ev["singular_locus"] = to_json(rep);
        r.entries.push_back({"leak-divisibility", Outcome::counterexample, "", std::move(ev)});
    } else {
        r.entries.push_back({"leak-divisibility", Outcome::consistent, "", {}});
    }
    if (m.single_input_output() && m.leaks().size() == 1) {
        if (equivalence_identity_check(m, opt)) {
            r.entries.push_back({"equivalence-identity", Outcome::consistent, "", {}});
        } else {
            auto ev = base_evidence(m);
            ev["singular_locus"] = to_json(rep);
            r.entries.push_back({"equivalence-identity", Outcome::counterexample, "", std::move(ev)});
        }
    } else {
        r.entries.push_back({"equivalence-identity", Outcome::skipped, "hypothesis-unmet", {}});
    }
    return r;
}

ModelReport check_counts(const Model& m, const DecideOptions& opt) {
    ModelReport r;
    if (!m.single_input_output()) {
        r.entries.push_back({"counts", Outcome::skipped, "not-single-input-output", {}});
        return r;
    }
    const auto cmap = coefficient_map(m, opt.deadline);
    const auto cc = count_check(m, cmap);
    if (cc.agree) {
        r.entries.push_back({"counts", Outcome::consistent, "", {}});
    } else {
        auto ev = base_evidence(m);
        ev["coefficient_map"] = to_json(cmap);
        ev["predicted"] = {{"lhs", cc.predicted.lhs}, {"rhs", cc.predicted.rhs}};
        ev["actual"] = {{"lhs", cc.actual.lhs}, {"rhs", cc.actual.rhs}};
        r.entries.push_back({"counts", Outcome::counterexample, "", std::move(ev)});
    }
    return r;
}

ModelReport check_model(Conjecture c, const Model& m, const DecideOptions& opt) {
    switch (c) {
    case Conjecture::remove_leak: return check_remove_leak(m, opt);
    case Conjecture::add_leak: return check_add_leak(m, opt);
    case Conjecture::dividing_edge: return check_dividing_edges(m, opt);
    case Conjecture::leak_divisibility: return check_leak_divisibility(m, opt);
    case Conjecture::counts: return check_counts(m, opt);
    }
    return {};
}

} // namespace

ScanResult run_scan(const ScanSpec& spec, const std::vector<Model>& models) {
    validate(spec);
    const auto started = std::chrono::steady_clock::now();
    std::vector<ModelReport> reports(models.size());
    parallel_for(models.size(), spec.jobs, [&](std::size_t i) {
        DecideOptions opt;
        opt.seed = splitmix(spec.seed ^ splitmix(i));
        opt.deadline = Deadline(spec.time_budget);
        try {
            reports[i] = check_model(spec.conjecture, models[i], opt);
        } catch (const AnalysisError& e) {
            ModelReport r;
            skip_all(r, spec.conjecture, e.kind() == ErrorKind::budget_exceeded ? "budget" : to_string(e.kind()));
            reports[i] = std::move(r);
        }
    });

    ScanResult res;
    res.spec = spec;
    res.models_examined = models.size();
    for (const auto& d : tally_defs(spec.conjecture)) res.tallies[d.name].theorem_backed = d.theorem_backed;
    for (std::size_t i = 0; i < models.size(); ++i) {
        for (auto& e : reports[i].entries) {
            auto& t = res.tallies[e.tally];
            ++t.examined;
            switch (e.outcome) {
            case Outcome::consistent: ++t.consistent; break;
            case Outcome::counterexample:
                ++t.counterexample;
                res.counterexamples.push_back({e.tally, models[i], std::move(e.evidence)});
                break;
            case Outcome::skipped:
                ++t.skipped;
                ++t.skipped_reasons[e.reason];
                break;
            }
        }
        for (const auto& [k, v] : reports[i].stats) res.stats[k] += v;
    }
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return res;
}

ScanResult run_scan(const ScanSpec& spec) {
    return run_scan(spec, enumerate_models(spec));
}

namespace {

ScanResult run_as(ScanSpec spec, Conjecture c) {
    spec.conjecture = c;
    return run_scan(spec);
}

} // namespace

ScanResult scan_remove_leak(const ScanSpec& spec) { return run_as(spec, Conjecture::remove_leak); }
ScanResult scan_add_leak(const ScanSpec& spec) { return run_as(spec, Conjecture::add_leak); }
ScanResult scan_dividing_edges(const ScanSpec& spec) { return run_as(spec, Conjecture::dividing_edge); }
ScanResult scan_leak_divisibility(const ScanSpec& spec) { return run_as(spec, Conjecture::leak_divisibility); }
ScanResult scan_counts(const ScanSpec& spec) { return run_as(spec, Conjecture::counts); }

} // namespace lcmid
