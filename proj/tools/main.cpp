#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lcm/errors.hpp"
#include "lcm/fixtures.hpp"
#include "lcm/identifiability.hpp"
#include "lcm/ioeq.hpp"
#include "lcm/lab.hpp"
#include "lcm/model_json.hpp"
#include "lcm/parallel.hpp"
#include "lcm/report_json.hpp"
#include "lcm/singular.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lcmid;

namespace {

enum Exit { ok = 0, failure = 1, invalid_model = 2, inapplicable = 3, counterexample = 4 };

int exit_code(ErrorKind k) {
    switch (k) {
    case ErrorKind::invalid_model: return invalid_model;
    case ErrorKind::budget_exceeded: return failure;
    default: return inapplicable;
    }
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
};

std::string set_string(const std::vector<int>& xs) {
    std::string s = "{";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
    return s + "}";
}

std::string describe(const Model& m) {
    return "n=" + std::to_string(m.size()) + ", " + std::to_string(m.edges().size()) + " edges, in "
        + set_string(m.inputs()) + ", out " + set_string(m.outputs()) + ", leak " + set_string(m.leaks());
}

Model load_checked(const std::string& path) {
    Model m = load_model(path);
    require_valid(m);
    return m;
}

json report(const std::string& command, const std::optional<Model>& m, std::optional<std::uint64_t> seed,
            json result, const Timer& t) {
    json r{{"command", command}, {"tool_version", kToolVersion}};
    r["model"] = m ? model_to_json(*m) : json(nullptr);
    r["seed"] = seed ? json(*seed) : json(nullptr);
    r["result"] = std::move(result);
    r["timing_ms"] = t.ms();
    return r;
}

void emit(const json& j) {
    std::cout << j.dump(2) << '\n';
}

std::pair<int, int> parse_pair(const std::string& s) {
    int a = 0, b = 0;
    char comma = 0;
    std::istringstream in(s);
    if (!(in >> a >> comma >> b) || comma != ',' || !in.eof()) {
        throw CLI::ValidationError("expected FROM,TO but got '" + s + "'");
    }
    return {a, b};
}

// ---------------------------------------------------------------- commands

struct AnalyzeArgs {
    std::string path;
    bool exact = false;
    std::size_t trials = 5;
    std::uint64_t seed = 0;
    std::size_t jobs = 0;
    bool json = false;
};

int cmd_analyze(const AnalyzeArgs& a) {
    Timer t;
    Model m = load_checked(a.path);
    DecideOptions opt;
    opt.trials = a.trials;
    opt.seed = a.seed;
    opt.jobs = a.jobs ? a.jobs : default_jobs();
    if (a.exact) opt.exact = ExactMode::always;
    const auto cmap = coefficient_map(m);
    const Verdict v = decide(m, cmap, opt);
    if (a.json) {
        emit(report("analyze", m, a.seed, to_json(v, cmap.vars), t));
        return ok;
    }
    std::cout << "model: " << describe(m) << '\n'
              << "parameters: " << v.parameters << ", coefficients: " << v.coefficients << '\n'
              << "verdict: " << to_string(v.status) << " (" << to_string(v.method)
              << (v.exact ? ", certified" : ", probabilistic") << ")\n";
    if (v.rank_info) {
        const auto& r = *v.rank_info;
        std::cout << "rank: " << v.rank << " of " << v.parameters << " (" << to_string(r.certainty) << ", "
                  << r.trial_ranks.size() << " trials, seed " << a.seed << ")\n"
                  << "Schwartz-Zippel bound: " << r.failure_bound << '\n';
    }
    if (v.certificate) {
        const auto& c = *v.certificate;
        if (c.kind == Certificate::Kind::nonzero_minor) {
            std::cout << "certificate: nonzero maximal minor on rows {";
            for (std::size_t i = 0; i < c.rows.size(); ++i) std::cout << (i ? "," : "") << c.rows[i] + 1;
            std::cout << "}\n  " << summarize(c.minor, cmap.vars) << '\n';
        } else {
            std::cout << "certificate: symbolic rank " << c.symbolic_rank << " < " << v.parameters
                      << ", so every maximal minor vanishes\n";
        }
    }
    return ok;
}

int cmd_io_equation(const std::string& path, bool as_json) {
    Timer t;
    Model m = load_checked(path);
    const auto eqs = io_equations(m);
    const auto cmap = coefficient_map(m, eqs);
    if (as_json) {
        json coeffs = json::array();
        for (const auto& c : cmap.entries) {
            coeffs.push_back({{"label", c.label.to_string()}, {"polynomial", to_string(c.poly, cmap.vars)}});
        }
        json eqj = json::array();
        for (const auto& e : eqs) eqj.push_back(to_json(e, cmap.vars));
        emit(report("io-equation", m, std::nullopt, {{"coefficients", coeffs}, {"equations", eqj}}, t));
        return ok;
    }
    std::cout << "model: " << describe(m) << '\n';
    int current = 0;
    for (const auto& c : all_coefficients(eqs)) {
        if (c.label.equation != current) {
            current = c.label.equation;
            std::cout << "equation for y" << current << ":\n";
        }
        std::cout << "  " << c.label.to_string() << ": " << summarize(c.poly, cmap.vars)
                  << (c.poly.is_constant() ? "  (trivial)" : "") << '\n';
    }
    std::cout << "nontrivial coefficients: " << cmap.size() << '\n';
    return ok;
}

void print_locus(const SingularLocusReport& rep) {
    std::cout << "shape: " << (rep.square ? "square" : "nonsquare") << " (" << rep.coefficients << " x "
              << rep.parameters << ")\n";
    if (rep.equation) {
        std::cout << "singular-locus equation:\n  " << summarize(*rep.equation, rep.vars) << '\n';
    } else {
        std::cout << "maximal minors: " << rep.minors.size() << '\n';
        for (const auto& mn : rep.minors) {
            std::cout << "  rows {";
            for (std::size_t i = 0; i < mn.rows.size(); ++i) std::cout << (i ? "," : "") << mn.rows[i] + 1;
            std::cout << "} divisible by [";
            bool first = true;
            for (std::size_t v = 0; v < mn.divisible.size(); ++v) {
                if (!mn.divisible[v]) continue;
                std::cout << (first ? "" : " ") << rep.vars[static_cast<VarId>(v)].name();
                first = false;
            }
            std::cout << "]: " << summarize(mn.value, rep.vars) << '\n';
        }
    }
}

void print_dividing(const SingularLocusReport& rep) {
    std::cout << "dividing edges:";
    if (rep.dividing_edges.empty()) std::cout << " none";
    for (const auto& d : rep.dividing_edges) {
        std::cout << ' ' << d.edge.name()
                  << (d.strongly_connected_after_removal ? "" : " (removal breaks strong connectivity)");
    }
    std::cout << '\n';
    for (const auto& [p, divides] : rep.leak_divides) {
        std::cout << "leak " << p.name() << (divides ? " divides" : " does not divide") << '\n';
    }
}

int cmd_singular_locus(const std::string& path, std::uint64_t seed, bool as_json) {
    Timer t;
    Model m = load_checked(path);
    DecideOptions opt;
    opt.seed = seed;
    opt.jobs = default_jobs();
    const auto rep = singular_locus(m, opt);
    if (as_json) {
        emit(report("singular-locus", m, seed, to_json(rep), t));
        return ok;
    }
    std::cout << "model: " << describe(m) << '\n';
    print_locus(rep);
    print_dividing(rep);
    return ok;
}

int cmd_dividing_edges(const std::string& path, std::uint64_t seed, bool removal, bool as_json) {
    Timer t;
    Model m = load_checked(path);
    DecideOptions opt;
    opt.seed = seed;
    opt.jobs = default_jobs();
    const auto rep = singular_locus(m, opt);
    std::vector<RemovalAnalysis> analysis;
    if (removal) analysis = dividing_edge_removal_analysis(m, rep, opt);
    if (as_json) {
        json edges = to_json(rep)["dividing_edges"];
        json result{{"dividing_edges", edges}, {"leak_divisibility", to_json(rep)["leak_divisibility"]}};
        if (removal) {
            json ra = json::array();
            for (const auto& r : analysis) ra.push_back(to_json(r, rep.vars));
            result["removal_analysis"] = std::move(ra);
        }
        emit(report("dividing-edges", m, seed, std::move(result), t));
        return ok;
    }
    print_dividing(rep);
    for (const auto& r : analysis) {
        std::cout << "remove " << r.edge.name() << ": " << to_string(r.outcome);
        if (r.path_before && r.path_after) {
            std::cout << ", input-output distance " << *r.path_before << " -> " << *r.path_after;
        }
        if (r.theorem_applies) std::cout << ", distance-increase hypothesis holds";
        std::cout << '\n';
    }
    return ok;
}

struct MutateArgs {
    std::string path;
    std::vector<std::string> add_edge, remove_edge;
    std::vector<int> add_leak, remove_leak;
};

int cmd_mutate(const MutateArgs& a) {
    Model m = load_checked(a.path);
    for (const auto& s : a.add_edge) {
        auto [f, to] = parse_pair(s);
        m = apply(m, Mutation::add_edge(f, to));
    }
    for (const auto& s : a.remove_edge) {
        auto [f, to] = parse_pair(s);
        m = apply(m, Mutation::remove_edge(f, to));
    }
    for (int c : a.add_leak) m = apply(m, Mutation::add_leak(c));
    for (int c : a.remove_leak) m = apply(m, Mutation::remove_leak(c));
    std::cout << model_to_json(m).dump() << '\n';
    return ok;
}

struct ScanArgs {
    ScanSpec spec;
    std::string conjecture = "counts";
    std::string placement = "all";
    std::string out;
    std::string cex_dir;
    long budget_ms = 10'000;
    int max_edges = -1;
    bool strict = false;
    bool as_json = false;
};

int cmd_scan(ScanArgs a) {
    Timer t;
    auto c = parse_conjecture(a.conjecture);
    if (!c) throw CLI::ValidationError("unknown conjecture '" + a.conjecture + "'");
    a.spec.conjecture = *c;
    a.spec.placement = a.placement == "fixed" ? Placement::fixed : Placement::all_single;
    a.spec.time_budget = std::chrono::milliseconds(a.budget_ms);
    if (a.max_edges >= 0) a.spec.max_edges = a.max_edges;
    if (a.spec.jobs == 0) a.spec.jobs = default_jobs();
    const ScanResult res = run_scan(a.spec);
    json j = report("scan", std::nullopt, a.spec.seed, to_json(res), t);

    if (!a.out.empty()) {
        std::ofstream(a.out) << j.dump(2) << '\n';
        fs::path dir = a.cex_dir.empty() ? fs::path(a.out).parent_path() / "counterexamples" : fs::path(a.cex_dir);
        if (!res.counterexamples.empty()) fs::create_directories(dir);
        for (std::size_t i = 0; i < res.counterexamples.size(); ++i) {
            const auto& ce = res.counterexamples[i];
            json model = model_to_json(ce.model);
            model["meta"] = {{"tally", ce.tally}, {"evidence", ce.evidence}};
            std::ofstream(dir / (ce.tally + "-" + std::to_string(i + 1) + ".json")) << model.dump(2) << '\n';
        }
    }
    if (a.as_json) {
        emit(j);
    } else {
        std::cout << "conjecture: " << to_string(a.spec.conjecture) << ", n " << a.spec.min_n << ".."
                  << a.spec.max_n << ", leak budget " << a.spec.leak_budget << ", seed " << a.spec.seed << '\n'
                  << "models examined: " << res.models_examined << '\n';
        for (const auto& [name, tally] : res.tallies) {
            std::cout << "  " << name << (tally.theorem_backed ? " [theorem]" : "") << ": examined "
                      << tally.examined << ", consistent " << tally.consistent << ", counterexample "
                      << tally.counterexample << ", skipped " << tally.skipped;
            for (const auto& [why, count] : tally.skipped_reasons) std::cout << " " << why << "=" << count;
            std::cout << '\n';
        }
        for (const auto& [k, v] : res.stats) std::cout << "  " << k << ": " << v << '\n';
        std::cout << "wall time: " << res.wall_seconds << " s\n";
    }
    const bool found = res.theorem_violations() + res.conjecture_counterexamples() > 0;
    return a.strict && found ? counterexample : ok;
}

int cmd_fixtures(const std::string& out_dir, bool list) {
    const auto all = bundled_fixtures();
    if (list || out_dir.empty()) {
        for (const auto& f : all) {
            std::cout << f.name << "  " << describe(f.model) << "  expected " << f.expected_status << '\n';
        }
        if (out_dir.empty()) return ok;
    }
    fs::create_directories(out_dir);
    for (const auto& f : all) {
        std::ofstream(fs::path(out_dir) / (f.name + ".json")) << fixture_to_json(f).dump(2) << '\n';
    }
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structural identifiability of linear compartmental models"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    AnalyzeArgs an;
    auto* analyze = app.add_subcommand("analyze", "decide generic local identifiability");
    analyze->add_option("model", an.path, "model JSON file, or - for stdin")->required();
    analyze->add_flag("--exact", an.exact, "always produce a symbolic certificate");
    analyze->add_option("--trials", an.trials, "modular rank trials")->check(CLI::PositiveNumber);
    analyze->add_option("--seed", an.seed, "random seed");
    analyze->add_option("--jobs", an.jobs, "worker threads (default: LCMIDENT_JOBS or all cores)");
    analyze->add_flag("--json", an.json, "machine-readable report");

    std::string io_path;
    bool io_json = false;
    auto* io = app.add_subcommand("io-equation", "print the input-output equations");
    io->add_option("model", io_path)->required();
    io->add_flag("--json", io_json);

    std::string sl_path;
    std::uint64_t sl_seed = 0;
    bool sl_json = false;
    auto* sl = app.add_subcommand("singular-locus", "singular-locus equation or maximal minors");
    sl->add_option("model", sl_path)->required();
    sl->add_option("--seed", sl_seed);
    sl->add_flag("--json", sl_json);

    std::string de_path;
    std::uint64_t de_seed = 0;
    bool de_json = false, de_removal = false;
    auto* de = app.add_subcommand("dividing-edges", "dividing edges of an identifiable model");
    de->add_option("model", de_path)->required();
    de->add_option("--seed", de_seed);
    de->add_flag("--analyze-removal", de_removal, "decide each reduced model");
    de->add_flag("--json", de_json);

    MutateArgs mu;
    auto* mutate = app.add_subcommand("mutate", "add or remove edges and leaks; prints model JSON");
    mutate->add_option("model", mu.path)->required();
    mutate->add_option("--add-edge", mu.add_edge, "FROM,TO")->take_all();
    mutate->add_option("--remove-edge", mu.remove_edge, "FROM,TO")->take_all();
    mutate->add_option("--add-leak", mu.add_leak, "compartment")->take_all();
    mutate->add_option("--remove-leak", mu.remove_leak, "compartment")->take_all();

    ScanArgs sc;
    auto* scan = app.add_subcommand("scan", "exhaustive conjecture and theorem scans");
    scan->add_option("--min-n", sc.spec.min_n)->capture_default_str();
    scan->add_option("--max-n", sc.spec.max_n)->capture_default_str();
    scan->add_option("--conjecture", sc.conjecture)
        ->check(CLI::IsMember({"remove-leak", "add-leak", "dividing-edge", "leak-divisibility", "counts"}))
        ->capture_default_str();
    scan->add_option("--leak-budget", sc.spec.leak_budget)->capture_default_str();
    scan->add_option("--placement", sc.placement)->check(CLI::IsMember({"all", "fixed"}))->capture_default_str();
    scan->add_option("--input", sc.spec.fixed_input, "input compartment with --placement fixed");
    scan->add_option("--output", sc.spec.fixed_output, "output compartment with --placement fixed");
    scan->add_option("--seed", sc.spec.seed);
    sc.spec.jobs = 0;
    scan->add_option("--jobs", sc.spec.jobs, "worker threads (default: LCMIDENT_JOBS or all cores)");
    scan->add_option("--budget-ms", sc.budget_ms, "per-model time budget")->capture_default_str();
    scan->add_option("--max-edges", sc.max_edges, "skip digraphs with more edges");
    scan->add_flag("--dedup", sc.spec.dedup_isomorphic, "one model per relabeling class");
    scan->add_option("--out", sc.out, "write results JSON here");
    scan->add_option("--counterexample-dir", sc.cex_dir, "default: <out dir>/counterexamples");
    scan->add_flag("--strict", sc.strict, "exit 4 when any counterexample is found");
    scan->add_flag("--json", sc.as_json);

    std::string fx_dir;
    bool fx_list = false;
    auto* fx = app.add_subcommand("fixtures", "bundled reference models");
    fx->add_option("--out-dir", fx_dir, "write one JSON file per fixture");
    fx->add_flag("--list", fx_list);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*analyze) return cmd_analyze(an);
        if (*io) return cmd_io_equation(io_path, io_json);
        if (*sl) return cmd_singular_locus(sl_path, sl_seed, sl_json);
        if (*de) return cmd_dividing_edges(de_path, de_seed, de_removal, de_json);
        if (*mutate) return cmd_mutate(mu);
        if (*scan) return cmd_scan(sc);
        if (*fx) return cmd_fixtures(fx_dir, fx_list);
    } catch (const AnalysisError& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return failure;
    }
    return failure;
}
