#include <doctest.h>

#include <algorithm>
#include <functional>
#include <optional>
#include <set>

#include "lcm/errors.hpp"
#include "lcm/fixtures.hpp"
#include "lcm/singular.hpp"
#include "support/oracle.hpp"

using namespace lcmid;

namespace {

bool equal_up_to_sign(const MultiPoly& a, const MultiPoly& b) { return a == b || a == -b; }

std::set<std::string> edge_names(const SingularLocusReport& r) {
    std::set<std::string> out;
    for (const auto& d : r.dividing_edges) out.insert(d.edge.name());
    return out;
}

std::optional<ErrorKind> kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const AnalysisError& e) {
        return e.kind();
    }
    return std::nullopt;
}

} // namespace

TEST_CASE("singular-locus equation of the four-compartment example") {
    const auto rep = singular_locus(fig2_model());
    REQUIRE(rep.square);
    REQUIRE(rep.equation);
    const auto expect = oracle::parse("k12^3 (k21 + k31 - k34 - k42)(k23 - k34) k23", rep.vars);
    CHECK(equal_up_to_sign(*rep.equation, expect));
    CHECK(edge_names(rep) == std::set<std::string>{"k_{1,2}", "k_{2,3}"});
    for (const auto& d : rep.dividing_edges) CHECK_FALSE(d.strongly_connected_after_removal);
    CHECK(rep.leak_divides.empty());
    // the equation is the determinant of the Jacobian
    CHECK(*rep.equation == det_fraction_free(jacobian(coefficient_map(fig2_model())).entries));
}

TEST_CASE("dividing edges of the five-compartment examples") {
    const auto r3 = singular_locus(fig3_model());
    CHECK(edge_names(r3) == std::set<std::string>{"k_{4,1}", "k_{4,3}", "k_{5,4}"});
    for (const auto& d : r3.dividing_edges) CHECK(d.strongly_connected_after_removal == (d.edge.name() == "k_{4,1}"));

    const auto a3 = dividing_edge_removal_analysis(fig3_model(), r3);
    REQUIRE(a3.size() == 3);
    for (const auto& a : a3) {
        INFO(a.edge.name());
        if (a.edge.name() == "k_{4,1}") {
            CHECK(a.outcome == RemovalOutcome::unidentifiable);
            CHECK_FALSE(a.theorem_applies);
        } else {
            CHECK(a.outcome == RemovalOutcome::not_applicable);
        }
    }

    const auto a5 = dividing_edge_removal_analysis(fig5_model());
    REQUIRE(a5.size() == 1);
    CHECK(a5[0].edge.name() == "k_{4,3}");
    CHECK(a5[0].outcome == RemovalOutcome::unidentifiable);
    CHECK(a5[0].theorem_applies);
    CHECK(a5[0].path_before == 1);
    CHECK(a5[0].path_after == 3);
}

TEST_CASE("removing the strongly connected dividing edge zeroes every maximal minor") {
    const Model r = apply(fig3_model(), Mutation::remove_edge(1, 4));
    const auto j = jacobian(coefficient_map(r)).entries;
    REQUIRE(j.rows() == 8);
    REQUIRE(j.cols() == 7);
    const auto minors = maximal_minors(j);
    CHECK(minors.size() == 8);
    for (const auto& m : minors) CHECK(m.value.is_zero());
}

TEST_CASE("non-square example: six maximal minors") {
    const Model m = fig6_model();
    const auto rep = singular_locus(m);
    CHECK_FALSE(rep.square);
    CHECK_FALSE(rep.equation);
    REQUIRE(rep.minors.size() == 6);
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
    std::vector<bool> matched(6, false);
    for (const char* text : reference) {
        const auto want = oracle::parse(text, rep.vars);
        bool found = false;
        for (std::size_t i = 0; i < 6 && !found; ++i) {
            if (!matched[i] && equal_up_to_sign(rep.minors[i].value, want)) matched[i] = found = true;
        }
        INFO(text);
        CHECK(found);
    }
    CHECK(rep.dividing_edges.empty());
    const auto k14 = *rep.vars.find(Parameter::edge(4, 1));
    std::size_t dividing_k14 = 0;
    for (const auto& mv : rep.minors) dividing_k14 += mv.divisible[k14];
    CHECK(dividing_k14 == 1);
}

TEST_CASE("leaks and the equivalence identity") {
    // catenary with input, output and leak in the first compartment
    const Model cat(3, {{1, 2}, {2, 1}, {2, 3}, {3, 2}}, {1}, {1}, {1});
    REQUIRE(square_jacobian(cat).square);
    CHECK(equivalence_identity_check(cat));
    const auto ld = leak_divisibility(cat);
    REQUIRE(ld.size() == 1);
    CHECK(ld[0].first == Parameter::leak(1));
    CHECK_FALSE(ld[0].second);

    // cycle with input, output and leak together: 4 parameters, 5 coefficients
    const Model c3(3, {{1, 2}, {2, 3}, {3, 1}}, {1}, {1}, {1});
    CHECK_FALSE(square_jacobian(c3).square);
    CHECK(equivalence_identity_check(c3));
    CHECK_THROWS_AS(leak_divisibility(c3), AnalysisError);

    int checked = 0;
    for (int l = 1; l <= 4; ++l) {
        const Model m = apply(fig2_model(), Mutation::add_leak(l));
        if (!square_jacobian(m).square || decide(m).status != Status::identifiable) continue;
        INFO(l);
        CHECK(equivalence_identity_check(m));
        CHECK_FALSE(leak_divisibility(m)[0].second);
        ++checked;
    }
    CHECK(checked > 0);
}

TEST_CASE("deleting a non-dividing edge keeps a square model identifiable") {
    for (const auto& f : bundled_fixtures()) {
        if (f.expected_status != "identifiable") continue;
        const auto rep = singular_locus(f.model);
        if (!rep.square) continue;
        INFO(f.name);
        for (const auto& e : f.model.edges()) {
            const auto p = Parameter::edge(e.from, e.to);
            const auto v = *rep.vars.find(p);
            if (divisible_by_var(*rep.equation, v)) continue;
            const Model r = apply(f.model, Mutation::remove_edge(e.from, e.to));
            if (!is_strongly_connected(r)) continue;
            CHECK(decide(r).status == Status::identifiable);
        }
    }
}

TEST_CASE("preconditions") {
    CHECK(kind_of([] { singular_locus(fig4_model()); }) == ErrorKind::model_unidentifiable);
    CHECK(kind_of([] { leak_divisibility(fig2_model()); }) == ErrorKind::precondition);
    CHECK(kind_of([] { equivalence_identity_check(fig2_model()); }) == ErrorKind::precondition);
    CHECK(kind_of([] { equivalence_identity_check(fig1_model()); }) == ErrorKind::precondition);
    const auto sq = square_jacobian(fig2_model());
    CHECK(sq.square);
    CHECK(sq.parameters == 6);
    CHECK(sq.predicted_coefficients == 6);
    CHECK_FALSE(square_jacobian(fig6_model()).square);
}
