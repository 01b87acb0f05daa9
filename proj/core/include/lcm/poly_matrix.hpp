#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "lcm/errors.hpp"
#include "lcm/polynomial.hpp"

namespace lcmid {

/// Polynomial in the differential operator d/dt with MultiPoly coefficients.
/// Index k of the coefficient vector multiplies the k-th derivative. The
/// leading stored coefficient is always nonzero; the zero operator is empty.
class DiffOpPoly {
public:
    DiffOpPoly() = default;
    explicit DiffOpPoly(std::vector<MultiPoly> coeffs);
    DiffOpPoly(MultiPoly constant);  // NOLINT(google-explicit-constructor)

    /// The operator d/dt itself.
    static DiffOpPoly derivative();

    bool is_zero() const { return coeffs_.empty(); }
    /// -1 for the zero operator.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    /// Zero beyond the degree.
    const MultiPoly& coefficient(std::size_t order) const;
    std::span<const MultiPoly> coefficients() const { return coeffs_; }
    bool is_monic() const;

    DiffOpPoly operator-() const;
    friend DiffOpPoly operator+(const DiffOpPoly& a, const DiffOpPoly& b);
    friend DiffOpPoly operator-(const DiffOpPoly& a, const DiffOpPoly& b);
    friend DiffOpPoly operator*(const DiffOpPoly& a, const DiffOpPoly& b);
    friend bool operator==(const DiffOpPoly&, const DiffOpPoly&) = default;

private:
    void trim();

    std::vector<MultiPoly> coeffs_;
};

/// Dense row-major rectangular matrix.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Matrix submatrix(std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) const {
        Matrix out(row_idx.size(), col_idx.size());
        for (std::size_t i = 0; i < row_idx.size(); ++i) {
            for (std::size_t j = 0; j < col_idx.size(); ++j) {
                out(i, j) = (*this)(row_idx[i], col_idx[j]);
            }
        }
        return out;
    }

    /// Deletes one row and one column (0-based).
    Matrix minor_matrix(std::size_t row, std::size_t col) const {
        if (row >= rows_ || col >= cols_) throw std::out_of_range("Matrix::minor_matrix");
        Matrix out(rows_ - 1, cols_ - 1);
        for (std::size_t i = 0, oi = 0; i < rows_; ++i) {
            if (i == row) continue;
            for (std::size_t j = 0, oj = 0; j < cols_; ++j) {
                if (j == col) continue;
                out(oi, oj++) = (*this)(i, j);
            }
            ++oi;
        }
        return out;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using PolyMatrix = Matrix<MultiPoly>;
using DiffOpMatrix = Matrix<DiffOpPoly>;

/// Reserved variable id standing for d/dt inside det_diffop.
inline constexpr VarId kOperatorVar = 0xFFFF;

/// Exact determinant. Bareiss fraction-free elimination with exact
/// polynomial division; cofactor expansion for dimension <= 4.
MultiPoly det_fraction_free(const PolyMatrix& m, const Deadline& deadline = {});

/// Bareiss elimination only, whatever the size.
MultiPoly det_bareiss(const PolyMatrix& m, const Deadline& deadline = {});

/// Laplace expansion along the first row. Exponential; intended for small
/// matrices and as a cross-check.
MultiPoly det_cofactor(const PolyMatrix& m);

struct SymbolicRank {
    std::size_t rank = 0;
    /// Original indices of the pivot rows, in elimination order. These rows
    /// are independent over the fraction field.
    std::vector<std::size_t> pivot_rows;
};

/// Rank over Q(k) by fraction-free row echelon elimination. rank < cols is
/// equivalent to every maximal minor vanishing identically.
SymbolicRank symbolic_rank(const PolyMatrix& m, const Deadline& deadline = {});

/// Determinant of a matrix of differential-operator polynomials, treating
/// d/dt as one more commuting indeterminate.
DiffOpPoly det_diffop(const DiffOpMatrix& m, const Deadline& deadline = {});

} // namespace lcmid
