#pragma once

#include <optional>
#include <vector>

#include "lcm/identifiability.hpp"

namespace lcmid {

/// Whether |E| + |Leak| equals the closed-form coefficient count.
struct SquareJacobianFlag {
    bool square = false;
    std::size_t parameters = 0;
    std::size_t predicted_coefficients = 0;
};

SquareJacobianFlag square_jacobian(const Model& m);

struct MinorDivisibility {
    std::vector<std::size_t> rows;  // 0-based Jacobian rows of this minor
    MultiPoly value;
    /// divisible[v] for every parameter v of the model.
    std::vector<bool> divisible;
};

struct DividingEdge {
    Parameter edge;
    bool strongly_connected_after_removal = false;
};

struct SingularLocusReport {
    VarTable vars;
    bool square = false;
    std::size_t parameters = 0;
    std::size_t coefficients = 0;
    /// Square case: the determinant of the Jacobian (the singular-locus
    /// equation). Unset in the non-square case.
    std::optional<MultiPoly> equation;
    /// Every maximal minor; a single entry in the square case.
    std::vector<MinorDivisibility> minors;
    /// Edge parameters dividing the equation (square) or every maximal minor.
    std::vector<DividingEdge> dividing_edges;
    /// Leak parameters with the same divisibility test.
    std::vector<std::pair<Parameter, bool>> leak_divides;
};

/// Requires a strongly connected identifiable model.
SingularLocusReport singular_locus(const Model& m, const DecideOptions& opt = {});

/// For each leak parameter, whether it divides the singular-locus equation.
std::vector<std::pair<Parameter, bool>> leak_divisibility(const Model& m, const DecideOptions& opt = {});

/// Symbolically checks
///   det(J~)|_{k_0l = 0} == d(c~_r)/d(k_0l) * det(J)
/// for an identifiable one-leak model, where c~_r is the constant term of the
/// output side and J is the Jacobian of the leak-free model's coefficients.
/// Without a square Jacobian the identity is checked for every maximal minor
/// whose rows include c~_r.
bool equivalence_identity_check(const Model& leaky, const DecideOptions& opt = {});

enum class RemovalOutcome { not_applicable, identifiable, unidentifiable, undetermined };

const char* to_string(RemovalOutcome o);

struct RemovalAnalysis {
    Parameter edge;
    RemovalOutcome outcome = RemovalOutcome::not_applicable;
    std::optional<Verdict> verdict;
    /// Leak-free, square-Jacobian, and the input-output distance grew by >= 2.
    bool theorem_applies = false;
    std::optional<int> path_before;
    std::optional<int> path_after;
};

std::vector<RemovalAnalysis> dividing_edge_removal_analysis(const Model& m, const DecideOptions& opt = {});
std::vector<RemovalAnalysis> dividing_edge_removal_analysis(const Model& m, const SingularLocusReport& report,
                                                            const DecideOptions& opt = {});

} // namespace lcmid
