#include "lcm/singular.hpp"

#include <algorithm>
#include <map>

#include "lcm/errors.hpp"

namespace lcmid {

const char* to_string(RemovalOutcome o) {
    switch (o) {
    case RemovalOutcome::not_applicable: return "not-applicable";
    case RemovalOutcome::identifiable: return "identifiable";
    case RemovalOutcome::unidentifiable: return "unidentifiable";
    case RemovalOutcome::undetermined: return "undetermined";
    }
    return "?";
}

SquareJacobianFlag square_jacobian(const Model& m) {
    SquareJacobianFlag f;
    f.parameters = m.parameter_count();
    f.predicted_coefficients = predicted_counts(m).total();
    f.square = f.parameters == f.predicted_coefficients;
    return f;
}

namespace {

std::vector<bool> divisibility_row(const MultiPoly& p, std::size_t nvars) {
    std::vector<bool> out(nvars);
    for (VarId v = 0; v < nvars; ++v) out[v] = divisible_by_var(p, v);
    return out;
}

} // namespace

SingularLocusReport singular_locus(const Model& m, const DecideOptions& opt) {
    require_io_applicable(m);
    const CoefficientMap cmap = coefficient_map(m, opt.deadline);
    const Verdict verdict = decide(m, cmap, opt);
    if (verdict.status != Status::identifiable) {
        throw AnalysisError(ErrorKind::model_unidentifiable,
                            "the singular locus is defined for identifiable models only");
    }
    const JacobianMatrix jac = jacobian(cmap);

    SingularLocusReport rep;
    rep.vars = cmap.vars;
    rep.parameters = m.parameter_count();
    rep.coefficients = cmap.size();
    rep.square = jac.entries.is_square();
    const std::size_t nvars = rep.vars.size();

    if (rep.square) {
        MultiPoly f = det_fraction_free(jac.entries, opt.deadline);
        if (f.is_zero()) {
            throw AnalysisError(ErrorKind::model_unidentifiable, "Jacobian determinant vanishes identically");
        }
        std::vector<std::size_t> rows(jac.entries.rows());
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
        rep.minors.push_back({rows, f, divisibility_row(f, nvars)});
        rep.equation = std::move(f);
    } else {
        for (auto& mv : maximal_minors(jac.entries, opt.jobs, opt.deadline)) {
            auto div = divisibility_row(mv.value, nvars);
            rep.minors.push_back({std::move(mv.rows), std::move(mv.value), std::move(div)});
        }
    }

    for (VarId v = 0; v < nvars; ++v) {
        bool all = std::all_of(rep.minors.begin(), rep.minors.end(),
                               [v](const MinorDivisibility& md) { return md.divisible[v]; });
        const Parameter& p = rep.vars[v];
        if (p.is_leak()) {
            rep.leak_divides.emplace_back(p, all);
        } else if (all) {
            Model reduced = apply(m, Mutation::remove_edge(p.from, p.to));
            rep.dividing_edges.push_back({p, is_strongly_connected(reduced)});
        }
    }
    return rep;
}

std::vector<std::pair<Parameter, bool>> leak_divisibility(const Model& m, const DecideOptions& opt) {
    if (m.leaks().empty()) throw AnalysisError(ErrorKind::precondition, "model has no leak");
    auto rep = singular_locus(m, opt);
    if (!rep.square) {
        throw AnalysisError(ErrorKind::precondition, "leak divisibility is defined for square Jacobians");
    }
    return rep.leak_divides;
}

bool equivalence_identity_check(const Model& leaky, const DecideOptions& opt) {
    require_io_applicable(leaky);
    if (!leaky.single_input_output() || leaky.leaks().size() != 1) {
        throw AnalysisError(ErrorKind::precondition, "identity check needs |In| = |Out| = |Leak| = 1");
    }
    const CoefficientMap ctilde = coefficient_map(leaky, opt.deadline);
    if (decide(leaky, ctilde, opt).status != Status::identifiable) {
        throw AnalysisError(ErrorKind::precondition, "identity check needs an identifiable model");
    }
    const int leak = leaky.leaks().front();
    const int out = leaky.outputs().front();
    const Model base = apply(leaky, Mutation::remove_leak(leak));

    const VarTable& vars = ctilde.vars;
    const VarId leak_var = vars.at(Parameter::leak(leak));
    const CoeffLabel constant_label{out, Side::output, 0, out};

    // Row order: every nontrivial coefficient but the output-side constant
    // term, which goes last.
    std::vector<const Coefficient*> rows;
    const Coefficient* last = nullptr;
    for (const auto& e : ctilde.entries) {
        if (e.label == constant_label) {
            last = &e;
        } else {
            rows.push_back(&e);
        }
    }
    if (last == nullptr) throw std::logic_error("leaky model lacks an output-side constant term");
    const std::size_t nvars = vars.size();
    if (rows.size() + 1 < nvars) {
        throw AnalysisError(ErrorKind::precondition, "identity check needs at least as many coefficients as parameters");
    }

    PolyMatrix jt(rows.size() + 1, nvars);
    for (std::size_t i = 0; i <= rows.size(); ++i) {
        const MultiPoly& c = i < rows.size() ? rows[i]->poly : last->poly;
        for (VarId v = 0; v < nvars; ++v) jt(i, v) = partial(c, v);
    }

    // Leak-free coefficients, re-indexed into the leaky model's table.
    const VarTable base_vars = base.var_table();
    std::vector<VarId> mapping(base_vars.size());
    for (VarId v = 0; v < base_vars.size(); ++v) mapping[v] = vars.at(base_vars[v]);
    std::map<CoeffLabel, MultiPoly> base_coeffs;
    for (auto& c : all_coefficients(io_equations(base, opt.deadline))) {
        base_coeffs[c.label] = remap(c.poly, mapping);
    }
    std::vector<VarId> edge_vars;
    std::vector<std::size_t> all_cols;
    for (VarId v = 0; v < nvars; ++v) {
        all_cols.push_back(v);
        if (v != leak_var) edge_vars.push_back(v);
    }
    PolyMatrix j(rows.size(), edge_vars.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto it = base_coeffs.find(rows[i]->label);
        const MultiPoly c = it == base_coeffs.end() ? MultiPoly{} : it->second;
        for (std::size_t col = 0; col < edge_vars.size(); ++col) j(i, col) = partial(c, edge_vars[col]);
    }
    std::vector<std::size_t> edge_cols(edge_vars.size());
    for (std::size_t col = 0; col < edge_cols.size(); ++col) edge_cols[col] = col;

    // Every maximal minor through the constant-term row; one in the square case.
    const MultiPoly factor = partial(last->poly, leak_var);
    const std::size_t k = nvars - 1;
    std::vector<bool> pick(rows.size(), false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
        opt.deadline.check();
        std::vector<std::size_t> sel;
        for (std::size_t i = 0; i < pick.size(); ++i) {
            if (pick[i]) sel.push_back(i);
        }
        std::vector<std::size_t> tilde_rows = sel;
        tilde_rows.push_back(rows.size());
        const MultiPoly lhs = substitute_zero(det_fraction_free(jt.submatrix(tilde_rows, all_cols), opt.deadline), leak_var);
        const MultiPoly rhs = factor * det_fraction_free(j.submatrix(sel, edge_cols), opt.deadline);
        if (lhs != rhs) return false;
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return true;
}

std::vector<RemovalAnalysis> dividing_edge_removal_analysis(const Model& m, const SingularLocusReport& report,
                                                            const DecideOptions& opt) {
    std::vector<RemovalAnalysis> out;
    const bool single = m.single_input_output();
    const bool theorem_shape = single && m.leaks().empty() && square_jacobian(m).square;
    std::optional<int> before;
    if (single) before = shortest_io_path_length(m);
    for (const auto& de : report.dividing_edges) {
        RemovalAnalysis ra;
        ra.edge = de.edge;
        ra.path_before = before;
        Model reduced = apply(m, Mutation::remove_edge(de.edge.from, de.edge.to));
        if (!is_strongly_connected(reduced)) {
            ra.outcome = RemovalOutcome::not_applicable;
            out.push_back(std::move(ra));
            continue;
        }
        if (single) ra.path_after = shortest_io_path_length(reduced);
        ra.theorem_applies = theorem_shape && *ra.path_after - *ra.path_before >= 2;
        Verdict v = decide(reduced, opt);
        switch (v.status) {
        case Status::identifiable: ra.outcome = RemovalOutcome::identifiable; break;
        case Status::unidentifiable: ra.outcome = RemovalOutcome::unidentifiable; break;
        case Status::undetermined: ra.outcome = RemovalOutcome::undetermined; break;
        }
        ra.verdict = std::move(v);
        out.push_back(std::move(ra));
    }
    return out;
}

std::vector<RemovalAnalysis> dividing_edge_removal_analysis(const Model& m, const DecideOptions& opt) {
    return dividing_edge_removal_analysis(m, singular_locus(m, opt), opt);
}

} // namespace lcmid
