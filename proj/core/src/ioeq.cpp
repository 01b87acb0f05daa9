#include "lcm/ioeq.hpp"

#include <algorithm>
#include <map>

#include "lcm/errors.hpp"

namespace lcmid {

CompartmentalMatrix compartmental_matrix(const Model& m) {
    require_valid(m);
    VarTable vars = m.var_table();
    const auto n = static_cast<std::size_t>(m.size());
    PolyMatrix a(n, n);
    for (const auto& e : m.edges()) {
        MultiPoly k = MultiPoly::variable(vars.at(e.parameter()));
        auto src = static_cast<std::size_t>(e.from - 1);
        auto dst = static_cast<std::size_t>(e.to - 1);
        a(dst, src) += k;
        a(src, src) -= k;
    }
    for (int l : m.leaks()) {
        auto c = static_cast<std::size_t>(l - 1);
        a(c, c) -= MultiPoly::variable(vars.at(Parameter::leak(l)));
    }
    return {std::move(vars), std::move(a)};
}

DiffOpMatrix operator_matrix(const CompartmentalMatrix& a) {
    const std::size_t n = a.a.rows();
    DiffOpMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            DiffOpPoly entry(-a.a(i, j));
            if (i == j) entry = entry + DiffOpPoly::derivative();
            out(i, j) = std::move(entry);
        }
    }
    return out;
}

void require_io_applicable(const Model& m) {
    require_valid(m);
    if (!is_strongly_connected(m)) {
        throw AnalysisError(ErrorKind::not_strongly_connected,
                            "input-output equations need a strongly connected model");
    }
    if (m.inputs().empty()) {
        throw AnalysisError(ErrorKind::precondition, "model has no input");
    }
}

namespace {

IoEquation build_equation(const DiffOpMatrix& op, const DiffOpPoly& lhs, const Model& m, int output,
                          const Deadline& deadline) {
    IoEquation eq;
    eq.output = output;
    eq.lhs = lhs;
    for (int input : m.inputs()) {
        RhsTerm term;
        term.input = input;
        term.sign = ((input + output) % 2 == 0) ? 1 : -1;
        auto minor = op.minor_matrix(static_cast<std::size_t>(input - 1),
                                     static_cast<std::size_t>(output - 1));
        term.minor = det_diffop(minor, deadline);
        eq.rhs.push_back(std::move(term));
    }
    return eq;
}

} // namespace

IoEquation io_equation(const Model& m, int output, const Deadline& deadline) {
    require_io_applicable(m);
    if (!std::binary_search(m.outputs().begin(), m.outputs().end(), output)) {
        throw AnalysisError(ErrorKind::precondition, "compartment " + std::to_string(output) + " is not an output");
    }
    auto op = operator_matrix(compartmental_matrix(m));
    return build_equation(op, det_diffop(op, deadline), m, output, deadline);
}

std::vector<IoEquation> io_equations(const Model& m, const Deadline& deadline) {
    require_io_applicable(m);
    auto op = operator_matrix(compartmental_matrix(m));
    DiffOpPoly lhs = det_diffop(op, deadline);
    std::vector<IoEquation> eqs;
    for (int output : m.outputs()) eqs.push_back(build_equation(op, lhs, m, output, deadline));
    return eqs;
}

std::string CoeffLabel::to_string() const {
    std::string s = side == Side::output ? "y" : "u";
    s += std::to_string(signal) + "^(" + std::to_string(order) + ")";
    return s;
}

const Coefficient* CoefficientMap::find(const CoeffLabel& label) const {
    for (const auto& e : entries) {
        if (e.label == label) return &e;
    }
    return nullptr;
}

std::vector<Coefficient> all_coefficients(const std::vector<IoEquation>& eqs) {
    std::vector<Coefficient> out;
    for (const auto& eq : eqs) {
        for (int k = eq.lhs.degree(); k >= 0; --k) {
            out.push_back({{eq.output, Side::output, k, eq.output}, eq.lhs.coefficient(static_cast<std::size_t>(k))});
        }
        // The RHS operators have degree < n; emit every order up to n - 1.
        const int rhs_top = eq.lhs.degree() - 1;
        for (const auto& term : eq.rhs) {
            DiffOpPoly op = term.signed_operator();
            for (int k = rhs_top; k >= 0; --k) {
                out.push_back({{eq.output, Side::input, k, term.input}, op.coefficient(static_cast<std::size_t>(k))});
            }
        }
    }
    return out;
}

CoefficientMap coefficient_map(const Model& m, const std::vector<IoEquation>& eqs) {
    CoefficientMap c{m.var_table(), {}};
    for (auto& coeff : all_coefficients(eqs)) {
        if (!coeff.poly.is_constant()) c.entries.push_back(std::move(coeff));
    }
    return c;
}

CoefficientMap coefficient_map(const Model& m, const Deadline& deadline) {
    return coefficient_map(m, io_equations(m, deadline));
}

CoefficientCounts predicted_counts(const Model& m) {
    require_io_applicable(m);
    if (!m.single_input_output()) {
        throw AnalysisError(ErrorKind::unsupported, "coefficient-count formula needs |In| = |Out| = 1");
    }
    const auto n = static_cast<std::size_t>(m.size());
    CoefficientCounts p;
    p.lhs = m.leaks().empty() ? n - 1 : n;
    if (m.inputs() == m.outputs()) {
        p.rhs = n - 1;
    } else {
        p.rhs = n - static_cast<std::size_t>(shortest_io_path_length(m));
    }
    return p;
}

CountCheck count_check(const Model& m, const CoefficientMap& c) {
    CountCheck out;
    out.predicted = predicted_counts(m);
    for (const auto& e : c.entries) {
        if (e.label.side == Side::output) {
            ++out.actual.lhs;
        } else {
            ++out.actual.rhs;
        }
    }
    out.agree = out.predicted == out.actual;
    return out;
}

CountCheck count_check(const Model& m) {
    return count_check(m, coefficient_map(m));
}

bool leak_extension_check(const Model& m, const Mutation& mut, std::optional<Parameter> specialize) {
    if (!mut.is_addition()) {
        throw AnalysisError(ErrorKind::precondition, "leak_extension_check expects an add-edge or add-leak mutation");
    }
    Model extended = apply(m, mut);
    require_io_applicable(m);
    require_io_applicable(extended);

    const VarTable small = m.var_table();
    const VarTable big = extended.var_table();
    std::vector<VarId> mapping(small.size());
    for (VarId v = 0; v < small.size(); ++v) mapping[v] = big.at(small[v]);

    auto spec_var = big.find(specialize.value_or(mut.parameter()));
    if (!spec_var) {
        throw AnalysisError(ErrorKind::precondition, "specialized parameter is not a parameter of the extended model");
    }

    std::map<CoeffLabel, MultiPoly> base;
    for (auto& c : all_coefficients(io_equations(m))) base[c.label] = remap(c.poly, mapping);
    std::map<CoeffLabel, MultiPoly> grown;
    for (auto& c : all_coefficients(io_equations(extended))) grown[c.label] = std::move(c.poly);

    for (const auto& [label, poly] : grown) {
        auto it = base.find(label);
        MultiPoly expected = it == base.end() ? MultiPoly{} : it->second;
        if (!(substitute_zero(poly, *spec_var) == expected)) return false;
    }
    for (const auto& [label, poly] : base) {
        if (!grown.contains(label) && !poly.is_zero()) return false;
    }
    return true;
}

} // namespace lcmid
