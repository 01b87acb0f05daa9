// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "lcm/errors.hpp"
#include "lcm/fixtures.hpp"
#include "lcm/lab.hpp"
#include "lcm/model_json.hpp"
#include "lcm/parallel.hpp"
#include "lcm/singular.hpp"
#include "support/oracle.hpp"

using namespace lcmid;

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
    std::ostringstream notes;
    bool ok = true;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_s, const std::function<void(Check&)>& body) {
    Check c;
    const auto t0 = Clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.notes << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (limit_s > 0 && secs > limit_s) {
        c.ok = false;
        c.notes << " [over time limit " << limit_s << " s]";
    }
    if (!c.ok) ++failures;
    std::printf("[%s] %2d %s (%.2f s)%s\n", c.ok ? "PASS" : "FAIL", id, title.c_str(), secs, c.notes.str().c_str());
    std::fflush(stdout);
}

bool equal_up_to_sign(const MultiPoly& a, const MultiPoly& b) { return a == b || a == -b; }

std::set<std::string> dividing_names(const SingularLocusReport& r) {
    std::set<std::string> out;
    for (const auto& d : r.dividing_edges) out.insert(d.edge.name());
    return out;
}

DecideOptions exact_options(std::uint64_t seed) {
    DecideOptions o;
    o.exact = ExactMode::always;
    o.seed = seed;
    return o;
}

bool has_keys(const nlohmann::json& j, std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
        if (!j.contains(k)) return false;
    }
    return true;
}

// Independent confirmation of a recorded counterexample with exact symbolic
// certificates and a fresh seed.
bool reverify(const CounterexampleRecord& rec, std::string& why) {
    const auto& ev = rec.evidence;
    if (!has_keys(ev, {"model", "coefficient_map"})) {
        why = "missing model or coefficient map";
        return false;
    }
    if (model_from_json(ev["model"]) != rec.model) {
        why = "evidence model differs from record";
        return false;
    }
    const auto opt = exact_options(0x5eed);
    const Model& m = rec.model;
    if (rec.tally == "remove-leak") {
        if (!has_keys(ev, {"verdict", "reduced_model", "reduced_coefficient_map", "reduced_verdict"})) {
            why = "incomplete remove-leak evidence";
            return false;
        }
        const Model reduced = model_from_json(ev["reduced_model"]);
        const auto v = decide(m, opt), w = decide(reduced, opt);
        const bool ok = v.status == Status::identifiable && v.certificate && w.status == Status::unidentifiable &&
                        w.exact && reduced.leaks().empty();
        if (!ok) why = "exact path disagrees";
        return ok;
    }
    if (rec.tally == "add-leak" || rec.tally == "add-leak-theorem") {
        if (!has_keys(ev, {"verdict", "failures"}) || ev["failures"].empty()) {
            why = "incomplete add-leak evidence";
            return false;
        }
        if (decide(m, opt).status != Status::unidentifiable) {
            why = "base model is not unidentifiable";
            return false;
        }
        for (const auto& f : ev["failures"]) {
            const Model grown = model_from_json(f.at("grown_model"));
            const auto v = decide(grown, opt);
            if (grown.leaks().size() != m.leaks().size() + 1 || v.status != Status::identifiable || !v.certificate) {
                why = "grown model not confirmed identifiable";
                return false;
            }
        }
        return true;
    }
    if (rec.tally == "dividing-edge" || rec.tally == "dividing-edge-theorem") {
        if (!has_keys(ev, {"singular_locus", "removals"})) {
            why = "incomplete dividing-edge evidence";
            return false;
        }
        const auto rep = singular_locus(m, opt);
        for (const auto& d : rep.dividing_edges) {
            const Model r = apply(m, Mutation::remove_edge(d.edge.from, d.edge.to));
            if (is_strongly_connected(r) && decide(r, opt).status == Status::identifiable) return true;
        }
        why = "no strongly connected identifiable removal";
        return false;
    }
    if (rec.tally == "leak-divisibility") {
        if (!has_keys(ev, {"singular_locus"})) {
            why = "incomplete leak-divisibility evidence";
            return false;
        }
        const auto c = coefficient_map(m);
        const auto j = jacobian(c).entries;
        if (!j.is_square()) {
            why = "non-square Jacobian";
            return false;
        }
        const MultiPoly det = oracle::leibniz_det(j);
        const auto lv = *c.vars.find(Parameter::leak(m.leaks().front()));
        const bool ok = !det.is_zero() && substitute_zero(det, lv).is_zero();
        if (!ok) why = "leak does not divide the Leibniz determinant";
        return ok;
    }
    why = "unknown tally " + rec.tally;
    return false;
}

} // namespace

int main() {
    const std::size_t jobs = default_jobs();

    criterion(1, "input-output coefficients of the four-compartment model", 1.0, [](Check& c) {
        const auto cm = coefficient_map(fig2_model());
        auto P = [&](const char* s) { return oracle::parse(s, cm.vars); };
        const std::pair<const char*, const char*> expected[] = {
            {"y1^(3)", "k12 + k21 + k23 + k31 + k34 + k42"},
            {"y1^(2)", "k12 k23 + k21 k23 + k12 k31 + k23 k31 + k12 k34 + k21 k34 + k23 k34 + k31 k34 + k21 k42"
                       " + k23 k42 + k31 k42 + k34 k42"},
            {"y1^(1)", "k12 k23 k34 + k21 k23 k34 + k12 k31 k34 + k23 k31 k34 + k21 k23 k42 + k23 k31 k42"
                       " + k21 k34 k42 + k31 k34 k42"},
            {"u2^(2)", "k12"},
            {"u2^(1)", "k12 k23 + k12 k34"},
            {"u2^(0)", "k12 k23 k34"},
        };
        c.expect(cm.size() == 6, "six nontrivial coefficients");
        for (const auto& [label, text] : expected) {
            bool found = false;
            for (const auto& e : cm.entries) {
                if (e.label.to_string() == label) {
                    found = true;
                    c.expect(e.poly == P(text), label);
                }
            }
            c.expect(found, std::string("missing ") + label);
        }
        const auto* y1 = cm.find({1, Side::output, 1, 1});
        c.expect(y1 && y1->poly.term_count() == 8, "eight-term y1' coefficient");
    });

    criterion(2, "singular-locus equation and dividing edges of the four-compartment model", 5.0, [](Check& c) {
        const auto rep = singular_locus(fig2_model());
        c.expect(rep.square && rep.equation.has_value(), "square Jacobian");
        if (!rep.equation) return;
        const auto expect = oracle::parse("k12^3 (k21 + k31 - k34 - k42)(k23 - k34) k23", rep.vars);
        c.expect(equal_up_to_sign(*rep.equation, expect), "determinant");
        c.expect(dividing_names(rep) == std::set<std::string>{"k_{1,2}", "k_{2,3}"}, "dividing edges");
    });

    criterion(3, "edge 1->4 versus 1->3 in the five-compartment model", 60.0, [](Check& c) {
        c.expect(decide(fig3_model()).status == Status::identifiable, "fig3 identifiable");
        c.expect(decide(fig4_model()).status == Status::unidentifiable, "fig4 unidentifiable");
        const auto rep = singular_locus(fig3_model());
        c.expect(dividing_names(rep) == std::set<std::string>{"k_{4,1}", "k_{4,3}", "k_{5,4}"}, "dividing edges");
        const Model r = apply(fig3_model(), Mutation::remove_edge(1, 4));
        c.expect(is_strongly_connected(r), "removal keeps strong connectivity");
        const auto j = jacobian(coefficient_map(r)).entries;
        c.expect(j.rows() == 8 && j.cols() == 7, "8x7 Jacobian");
        const auto minors = maximal_minors(j);
        c.expect(minors.size() == 8, "eight maximal minors");
        for (const auto& mv : minors) c.expect(mv.value.is_zero(), "minor vanishes");
    });

    criterion(4, "theorem-covered dividing edge of the input-3 output-4 model", 0, [](Check& c) {
        const Model m = fig5_model();
        const auto sq = square_jacobian(m);
        c.expect(decide(m).status == Status::identifiable, "identifiable");
        c.expect(sq.square && sq.parameters == 8, "square with 8 parameters");
        c.expect(coefficient_map(m).size() == sq.predicted_coefficients, "closed-form count");
        c.expect(count_check(m).agree, "lhs/rhs counts");
        const Model r = apply(m, Mutation::remove_edge(3, 4));
        c.expect(is_strongly_connected(r), "removal keeps strong connectivity");
        c.expect(shortest_io_path_length(m) == 1 && shortest_io_path_length(r) == 3, "path 1 -> 3");
        c.expect(decide(r).status == Status::unidentifiable, "reduced model unidentifiable");
        const auto a = dividing_edge_removal_analysis(m);
        c.expect(a.size() == 1 && a[0].theorem_applies && a[0].outcome == RemovalOutcome::unidentifiable,
                 "removal analysis");
    });

    criterion(5, "six maximal minors of the 6x5 example", 10.0, [](Check& c) {
        const auto rep = singular_locus(fig6_model());
        c.expect(rep.minors.size() == 6, "six minors");
        const char* reference[] = {
            "-(k13 k14^2 - k14^3 - k13 k14 k21 + k14^2 k21 - k13 k14 k32 + k14^2 k32 - k14 k21 k32 - k14^2 k41"
            " + k13 k32 k41) (k13 - k32)",
            "-(k13^2 k14^2 - k13 k14^3 - k13 k14^2 k21 + k14^3 k21 - 2 k13^2 k14 k32 + 3 k13 k14^2 k32 - k14^3 k32"
            " - k14^2 k21 k32 + k13^2 k32^2 - 2 k13 k14 k32^2 + k14^2 k32^2 - k13 k14^2 k41 + 2 k13 k14 k32 k41"
            " - k14^2 k32 k41) (k13 - k32)",
            "-(k13^3 k14^2 - k13^2 k14^3 - k13^2 k14^2 k21 + k13 k14^3 k21 - 2 k13^3 k14 k32 + 3 k13^2 k14^2 k32"
            " - k13 k14^3 k32 + 2 k13^2 k14 k21 k32 - 4 k13 k14^2 k21 k32 + k14^3 k21 k32 + k13^3 k32^2"
            " - 3 k13^2 k14 k32^2 + 3 k13 k14^2 k32^2 - k14^3 k32^2 - k13^2 k21 k32^2 + 2 k13 k14 k21 k32^2"
            " - k14^2 k21 k32^2 + k13^2 k32^3 - 2 k13 k14 k32^3 + k14^2 k32^3 - k13^2 k14^2 k41"
            " + 2 k13^2 k14 k32 k41 - k13 k14^2 k32 k41 - k13^2 k32^2 k41 + 2 k13 k14 k32^2 k41"
            " - k14^2 k32^2 k41) (k13 - k32)",
            "-(k13 - k14) (k13 - k32) (k14 - k32) k14",
            "-(k13 k14 - k13 k32 + k14 k32) (k13 - k14) (k13 - k32) (k14 - k32)",
            "-(k13^2 k14 - k13^2 k32 + k13 k14 k32 - k13 k32^2 + k14 k32^2) (k13 - k14) (k13 - k32) (k14 - k32)",
        };
        std::vector<bool> used(rep.minors.size(), false);
        std::size_t k14_index = rep.minors.size();
        for (int i = 0; i < 6; ++i) {
            const auto want = oracle::parse(reference[i], rep.vars);
            bool found = false;
            for (std::size_t k = 0; k < rep.minors.size() && !found; ++k) {
                if (!used[k] && equal_up_to_sign(rep.minors[k].value, want)) {
                    used[k] = found = true;
                    if (i == 3) k14_index = k;
                }
            }
            c.expect(found, "M" + std::to_string(i + 1));
        }
        for (std::size_t v = 0; v < rep.vars.size(); ++v) {
            bool all = true;
            for (const auto& mv : rep.minors) all = all && mv.divisible[v];
            c.expect(!all, "no common variable divisor");
        }
        const auto k14 = *rep.vars.find(Parameter::edge(4, 1));
        c.expect(k14_index < rep.minors.size() && rep.minors[k14_index].divisible[k14], "k14 divides M4");
    });

    criterion(6, "closed-form coefficient counts, n <= 4, up to two leaks", 600.0, [jobs](Check& c) {
        ScanSpec s;
        s.max_n = 4;
        s.leak_budget = 2;
        s.jobs = jobs;
        s.time_budget = std::chrono::minutes(5);
        const auto r = scan_counts(s);
        const auto& t = r.tallies.at("counts");
        c.notes << " models=" << r.models_examined << " agree=" << t.consistent;
        c.expect(t.counterexample == 0, "disagreements");
        c.expect(t.skipped == 0, "skipped models");
        c.expect(t.consistent == r.models_examined && r.models_examined > 0, "coverage");
    });

    criterion(7, "zero specialization of an added leak or edge, 100 random pairs", 0, [](Check& c) {
        std::mt19937_64 rng(20240607);
        int done = 0, failed = 0;
        while (done < 100) {
            const int n = 1 + static_cast<int>(rng() % 5);
            const Model m = oracle::random_model(rng, n, 2);
            const auto action = rng() % 2 ? Mutation::Action::add_leak : Mutation::Action::add_edge;
            const auto muts = applicable_mutations(m, action);
            if (muts.empty()) continue;
            failed += !leak_extension_check(m, muts[rng() % muts.size()]);
            ++done;
        }
        c.notes << " pairs=" << done;
        c.expect(failed == 0, std::to_string(failed) + " failures");
    });

    criterion(8, "leak-removal identity on one-leak identifiable models", 0, [](Check& c) {
        std::vector<std::pair<std::string, Model>> cases{
            {"catenary", Model(3, {{1, 2}, {2, 1}, {2, 3}, {3, 2}}, {1}, {1}, {1})},
            {"cycle3", Model(3, {{1, 2}, {2, 3}, {3, 1}}, {1}, {1}, {1})},
        };
        for (const auto& f : bundled_fixtures()) {
            const Model& m = f.model;
            if (!m.single_input_output()) continue;
            for (int l = 1; l <= m.size(); ++l) {
                const Model base(m.size(), m.edges(), m.inputs(), m.outputs(), {});
                cases.push_back({f.name + "+leak" + std::to_string(l), apply(base, Mutation::add_leak(l))});
            }
        }
        int applicable = 0, square = 0;
        for (const auto& [name, m] : cases) {
            const bool required = name == "catenary" || name == "cycle3";
            if (decide(m).status != Status::identifiable) {
                c.expect(!required, name + " identifiable");
                continue;
            }
            ++applicable;
            square += square_jacobian(m).square;
            c.expect(equivalence_identity_check(m), name);
        }
        c.notes << " models=" << applicable << " square=" << square;
        c.expect(square > 0, "square coverage");
    });

    criterion(9, "two leaks on a cycle force unidentifiability", 0, [](Check& c) {
        for (int n = 3; n <= 6; ++n) {
            for (int a = 1; a <= n; ++a) {
                c.expect(!too_many_leaks(cycle_model(n, {a})), "one leak, n=" + std::to_string(n));
                for (int b = a + 1; b <= n; ++b) {
                    const Model m = cycle_model(n, {a, b});
                    c.expect(too_many_leaks(m), "predicate, n=" + std::to_string(n));
                    c.expect(decide(m).status == Status::unidentifiable, "verdict, n=" + std::to_string(n));
                }
            }
        }
    });

    criterion(10, "probabilistic verdicts match brute-force minors, leak-free n <= 3", 0, [](Check& c) {
        ScanSpec s;
        s.max_n = 3;
        s.leak_budget = 0;
        int models = 0, disagree = 0;
        for (const auto& m : enumerate_models(s)) {
            DecideOptions opt;
            opt.exact = ExactMode::never;
            opt.seed = static_cast<std::uint64_t>(models);
            const auto v = decide(m, opt);
            const auto params = m.parameter_count();
            const bool full = oracle::symbolic_rank(oracle::coefficient_map(m), params) == params;
            disagree += (v.status == Status::identifiable) != full;
            ++models;
        }
        c.notes << " models=" << models;
        c.expect(disagree == 0, std::to_string(disagree) + " disagreements");
    });

    criterion(11, "conjecture scans, n <= 4: theorem tallies clean, counterexamples re-verified", 0, [jobs](Check& c) {
        std::size_t records = 0, confirmed = 0;
        for (auto conj : {Conjecture::remove_leak, Conjecture::add_leak, Conjecture::dividing_edge,
                          Conjecture::leak_divisibility}) {
            ScanSpec s;
            s.max_n = 4;
            s.leak_budget = 1;
            s.conjecture = conj;
            s.jobs = jobs;
            s.time_budget = std::chrono::minutes(2);
            const auto r = run_scan(s);
            for (const auto& [name, t] : r.tallies) {
                std::cout << "      " << name << (t.theorem_backed ? " [theorem]" : "") << ": consistent "
                          << t.consistent << ", counterexample " << t.counterexample << ", skipped " << t.skipped
                          << '\n';
                c.expect(t.conserved(), name + " conservation");
                if (t.theorem_backed) c.expect(t.counterexample == 0, name + " theorem violation");
            }
            for (const auto& rec : r.counterexamples) {
                ++records;
                std::string why;
                if (reverify(rec, why)) {
                    ++confirmed;
                } else {
                    c.expect(false, rec.tally + " " + encode(rec.model) + ": " + why);
                }
            }
        }
        c.notes << " counterexamples=" << records << " re-verified=" << confirmed;
    });

    return failures;
}
