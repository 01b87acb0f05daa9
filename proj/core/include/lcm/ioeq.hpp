#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "lcm/model.hpp"
#include "lcm/poly_matrix.hpp"

namespace lcmid {

struct CompartmentalMatrix {
    VarTable vars;
    PolyMatrix a;
};

/// Diagonal: minus the leak rate (if any) minus all outgoing edge rates.
/// Off-diagonal (i, j): k_{i,j} when j -> i is an edge.
CompartmentalMatrix compartmental_matrix(const Model& m);

/// (d/dt) I - A as a matrix of differential-operator polynomials.
DiffOpMatrix operator_matrix(const CompartmentalMatrix& a);

struct RhsTerm {
    int input = 0;
    int sign = 1;  // (-1)^(i+j)
    DiffOpPoly minor;  // det of (dI - A) without row `input`, column `output`

    DiffOpPoly signed_operator() const { return sign > 0 ? minor : -minor; }
};

/// det(dI - A) y_j = sum_i (-1)^(i+j) det((dI - A)_{ij}) u_i
struct IoEquation {
    int output = 0;
    DiffOpPoly lhs;
    std::vector<RhsTerm> rhs;
};

IoEquation io_equation(const Model& m, int output, const Deadline& deadline = {});
/// One equation per output, ascending output index.
std::vector<IoEquation> io_equations(const Model& m, const Deadline& deadline = {});

enum class Side { output, input };

/// Position of a coefficient in an input-output equation: the derivative
/// order of y_signal (output side) or u_signal (input side). For multi-output
/// models `equation` is the output whose equation holds the coefficient.
struct CoeffLabel {
    int equation = 0;
    Side side = Side::output;
    int order = 0;
    int signal = 0;

    /// y1^(3), u2^(0), ...
    std::string to_string() const;

    friend auto operator<=>(const CoeffLabel&, const CoeffLabel&) = default;
};

struct Coefficient {
    CoeffLabel label;
    MultiPoly poly;
};

/// The nontrivial (non-constant) coefficients, ordered per equation by
/// output side with descending order, then input side (ascending input,
/// descending order).
struct CoefficientMap {
    VarTable vars;
    std::vector<Coefficient> entries;

    std::size_t size() const { return entries.size(); }
    const Coefficient* find(const CoeffLabel& label) const;
};

/// Every coefficient position of every equation, constants and zeros included.
std::vector<Coefficient> all_coefficients(const std::vector<IoEquation>& eqs);

CoefficientMap coefficient_map(const Model& m, const Deadline& deadline = {});
CoefficientMap coefficient_map(const Model& m, const std::vector<IoEquation>& eqs);

struct CoefficientCounts {
    std::size_t lhs = 0;
    std::size_t rhs = 0;

    std::size_t total() const { return lhs + rhs; }
    friend bool operator==(const CoefficientCounts&, const CoefficientCounts&) = default;
};

/// Closed-form counts for strongly connected single-input single-output
/// models: LHS n (leaky) or n-1, RHS n-1 (In = Out) or n-L.
CoefficientCounts predicted_counts(const Model& m);

struct CountCheck {
    CoefficientCounts predicted;
    CoefficientCounts actual;
    bool agree = false;
};

CountCheck count_check(const Model& m);
CountCheck count_check(const Model& m, const CoefficientMap& c);

/// Verifies that every coefficient of apply(m, mut), with the new parameter
/// set to zero, equals the corresponding coefficient of m. `specialize`
/// overrides the parameter that is set to zero.
bool leak_extension_check(const Model& m, const Mutation& mut,
                          std::optional<Parameter> specialize = std::nullopt);

/// Throws unless m is valid and strongly connected with at least one input.
void require_io_applicable(const Model& m);

} // namespace lcmid
