#include "lcm/poly_matrix.hpp"

#include <algorithm>
#include <utility>

namespace lcmid {

// ---------------------------------------------------------------- DiffOpPoly

DiffOpPoly::DiffOpPoly(std::vector<MultiPoly> coeffs) : coeffs_(std::move(coeffs)) {
    trim();
}

DiffOpPoly::DiffOpPoly(MultiPoly constant) {
    if (!constant.is_zero()) coeffs_.push_back(std::move(constant));
}

DiffOpPoly DiffOpPoly::derivative() {
    return DiffOpPoly(std::vector<MultiPoly>{MultiPoly{}, MultiPoly(1)});
}

void DiffOpPoly::trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

const MultiPoly& DiffOpPoly::coefficient(std::size_t order) const {
    static const MultiPoly zero;
    return order < coeffs_.size() ? coeffs_[order] : zero;
}

bool DiffOpPoly::is_monic() const {
    return !coeffs_.empty() && coeffs_.back() == MultiPoly(1);
}

DiffOpPoly DiffOpPoly::operator-() const {
    DiffOpPoly r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

DiffOpPoly operator+(const DiffOpPoly& a, const DiffOpPoly& b) {
    std::vector<MultiPoly> out(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a.coefficient(k) + b.coefficient(k);
    return DiffOpPoly(std::move(out));
}

DiffOpPoly operator-(const DiffOpPoly& a, const DiffOpPoly& b) {
    return a + (-b);
}

DiffOpPoly operator*(const DiffOpPoly& a, const DiffOpPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<MultiPoly> out(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
            out[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
    }
    return DiffOpPoly(std::move(out));
}

// ---------------------------------------------------------------- determinants

namespace {

void require_square(const PolyMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("determinant of a non-square matrix");
}

MultiPoly cofactor_rec(const PolyMatrix& m, std::vector<std::size_t>& cols, std::size_t row) {
    if (row == m.rows()) return MultiPoly(1);
    MultiPoly acc;
    for (std::size_t idx = 0; idx < cols.size(); ++idx) {
        const auto& entry = m(row, cols[idx]);
        if (entry.is_zero()) continue;
        std::size_t c = cols[idx];
        cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(idx));
        MultiPoly sub = cofactor_rec(m, cols, row + 1);
        cols.insert(cols.begin() + static_cast<std::ptrdiff_t>(idx), c);
        if (sub.is_zero()) continue;
        MultiPoly t = entry * sub;
        if (idx % 2 == 0) {
            acc += t;
        } else {
            acc -= t;
        }
    }
    return acc;
}

} // namespace

MultiPoly det_cofactor(const PolyMatrix& m) {
    require_square(m);
    std::vector<std::size_t> cols(m.cols());
    for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = i;
    return cofactor_rec(m, cols, 0);
}

MultiPoly det_bareiss(const PolyMatrix& input, const Deadline& deadline) {
    require_square(input);
    const std::size_t n = input.rows();
    if (n == 0) return MultiPoly(1);
    PolyMatrix a = input;
    MultiPoly prev(1);
    bool negate = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        deadline.check();
        // Prefer the sparsest nonzero pivot to limit intermediate swell.
        std::size_t pivot = n;
        for (std::size_t r = k; r < n; ++r) {
            if (a(r, k).is_zero()) continue;
            if (pivot == n || a(r, k).term_count() < a(pivot, k).term_count()) pivot = r;
        }
        if (pivot == n) return MultiPoly{};
        if (pivot != k) {
            for (std::size_t c = k; c < n; ++c) std::swap(a(pivot, c), a(k, c));
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                MultiPoly num = a(k, k) * a(i, j);
                if (!a(i, k).is_zero() && !a(k, j).is_zero()) num -= a(i, k) * a(k, j);
                auto q = divide_exact(num, prev);
                if (!q) throw std::logic_error("det_bareiss: inexact division");
                a(i, j) = std::move(*q);
            }
            deadline.check();
        }
        prev = a(k, k);
    }
    MultiPoly det = std::move(a(n - 1, n - 1));
    return negate ? -det : det;
}

SymbolicRank symbolic_rank(const PolyMatrix& input, const Deadline& deadline) {
    PolyMatrix a = input;
    const std::size_t rows = a.rows(), cols = a.cols();
    std::vector<std::size_t> order(rows);
    for (std::size_t i = 0; i < rows; ++i) order[i] = i;
    SymbolicRank out;
    MultiPoly prev(1);
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        deadline.check();
        std::size_t pivot = rows;
        for (std::size_t i = r; i < rows; ++i) {
            if (a(i, c).is_zero()) continue;
            if (pivot == rows || a(i, c).term_count() < a(pivot, c).term_count()) pivot = i;
        }
        if (pivot == rows) continue;
        if (pivot != r) {
            for (std::size_t j = c; j < cols; ++j) std::swap(a(pivot, j), a(r, j));
            std::swap(order[pivot], order[r]);
        }
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                MultiPoly num = a(r, c) * a(i, j);
                if (!a(i, c).is_zero() && !a(r, j).is_zero()) num -= a(i, c) * a(r, j);
                auto q = divide_exact(num, prev);
                if (!q) throw std::logic_error("symbolic_rank: inexact division");
                a(i, j) = std::move(*q);
            }
            a(i, c) = MultiPoly{};
            deadline.check();
        }
        prev = a(r, c);
        out.pivot_rows.push_back(order[r]);
        ++r;
    }
    out.rank = r;
    return out;
}

MultiPoly det_fraction_free(const PolyMatrix& m, const Deadline& deadline) {
    require_square(m);
    if (m.rows() <= 4) return det_cofactor(m);
    return det_bareiss(m, deadline);
}

DiffOpPoly det_diffop(const DiffOpMatrix& m, const Deadline& deadline) {
    if (!m.is_square()) throw std::invalid_argument("det_diffop: non-square matrix");
    PolyMatrix lifted(m.rows(), m.cols());
    const MultiPoly d = MultiPoly::variable(kOperatorVar);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const auto& op = m(i, j);
            MultiPoly entry;
            MultiPoly power(1);
            for (int k = 0; k <= op.degree(); ++k) {
                if (!op.coefficient(k).is_zero()) entry += op.coefficient(k) * power;
                if (k < op.degree()) power *= d;
            }
            lifted(i, j) = std::move(entry);
        }
    }
    MultiPoly det = det_fraction_free(lifted, deadline);

    std::vector<std::vector<Term>> by_order;
    for (const auto& t : det.terms()) {
        unsigned e = t.monomial.exponent(kOperatorVar);
        if (by_order.size() <= e) by_order.resize(e + 1);
        by_order[e].push_back({t.monomial.with_exponent(kOperatorVar, 0), t.coeff});
    }
    std::vector<MultiPoly> coeffs;
    coeffs.reserve(by_order.size());
    for (auto& terms : by_order) coeffs.push_back(MultiPoly::from_terms(std::move(terms)));
    return DiffOpPoly(std::move(coeffs));
}

} // namespace lcmid
