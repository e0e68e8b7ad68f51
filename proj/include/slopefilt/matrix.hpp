#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "slopefilt/poly.hpp"
#include "slopefilt/rational.hpp"

namespace slopefilt {

/// Dense row-major matrix with explicit shape. Zero-row and zero-column
/// matrices are valid.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
    Matrix(size_t rows, size_t cols, std::vector<T> data) : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows * cols) throw Error(ErrorCode::DimensionMismatch, "matrix data size");
    }

    static Matrix from_rows(const std::vector<std::vector<T>>& rows, size_t cols) {
        Matrix m(0, cols);
        for (const auto& r : rows) m.append_row(r);
        return m;
    }

    static Matrix identity(size_t n) {
        Matrix m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0; }

    T& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

    std::vector<T> row(size_t r) const {
        return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                              data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
    }

    void append_row(const std::vector<T>& r) {
        if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "row length");
        data_.insert(data_.end(), r.begin(), r.end());
        ++rows_;
    }

    void swap_rows(size_t a, size_t b) {
        if (a == b) return;
        for (size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (size_t r = 0; r < rows_; ++r)
            for (size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    /// Rows of `this` followed by rows of `o`.
    Matrix stacked(const Matrix& o) const {
        if (o.cols_ != cols_ && !(o.rows_ == 0) && !(rows_ == 0))
            throw Error(ErrorCode::DimensionMismatch, "stack column mismatch");
        Matrix m = rows_ == 0 ? Matrix(0, o.cols_) : *this;
        m.data_.insert(m.data_.end(), o.data_.begin(), o.data_.end());
        m.rows_ += o.rows_;
        return m;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;
using PolyMatrix = Matrix<Poly>;

template <class T>
std::vector<T> mat_vec(const Matrix<T>& m, const std::vector<T>& v) {
    if (v.size() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "mat_vec");
    std::vector<T> out(m.rows(), T(0));
    for (size_t r = 0; r < m.rows(); ++r)
        for (size_t c = 0; c < m.cols(); ++c) out[r] += m(r, c) * v[c];
    return out;
}

// ---------------------------------------------------------------------------
// Rational linear algebra

/// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<size_t> rref_in_place(RatMatrix& m) {
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t c = 0; c < m.cols() && row < m.rows(); ++c) {
        size_t p = row;
        while (p < m.rows() && m(p, c) == 0) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(p, row);
        Rational inv = 1 / m(row, c);
        for (size_t j = c; j < m.cols(); ++j) m(row, j) *= inv;
        for (size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, c) == 0) continue;
            Rational f = m(r, c);
            for (size_t j = c; j < m.cols(); ++j) m(r, j) -= f * m(row, j);
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

/// RREF with the zero rows dropped (canonical basis of the row space).
inline RatMatrix rref(RatMatrix m) {
    auto pivots = rref_in_place(m);
    RatMatrix out(0, m.cols());
    for (size_t r = 0; r < pivots.size(); ++r) out.append_row(m.row(r));
    return out;
}

inline size_t rank(RatMatrix m) { return rref_in_place(m).size(); }

/// Rows form a basis of the right kernel. Canonical: one vector per free
/// column f, with entry 1 at f and 0 at the other free columns.
inline RatMatrix nullspace(RatMatrix m) {
    auto pivots = rref_in_place(m);
    RatMatrix basis(0, m.cols());
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    for (size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> v(m.cols(), Rational(0));
        v[f] = 1;
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, f);
        basis.append_row(v);
    }
    return basis;
}

// ---------------------------------------------------------------------------
// Fraction-free (Bareiss) elimination over the polynomial ring

struct BareissResult {
    PolyMatrix echelon;               ///< nonzero rows only
    std::vector<size_t> pivot_cols;
    std::vector<size_t> source_rows;  ///< original row index of each echelon row
    Poly last_pivot = Poly(1L);
    int sign = 1;
};

/// Fraction-free forward elimination. Every division is exact because the
/// surviving entries are minors of the input.
inline BareissResult bareiss(PolyMatrix m) {
    BareissResult res;
    std::vector<size_t> order(m.rows());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    Poly prev(1L);
    size_t k = 0;
    for (size_t c = 0; c < m.cols() && k < m.rows(); ++c) {
        size_t p = k;
        // prefer the lowest-degree nonzero pivot to limit growth
        size_t best = m.rows();
        for (; p < m.rows(); ++p) {
            if (m(p, c).is_zero()) continue;
            if (best == m.rows() || m(p, c).terms().size() < m(best, c).terms().size()) best = p;
        }
        if (best == m.rows()) continue;
        if (best != k) {
            m.swap_rows(best, k);
            std::swap(order[best], order[k]);
            res.sign = -res.sign;
        }
        for (size_t i = k + 1; i < m.rows(); ++i) {
            for (size_t j = c + 1; j < m.cols(); ++j) {
                Poly v = m(k, c) * m(i, j) - m(i, c) * m(k, j);
                m(i, j) = v.divexact(prev);
            }
            m(i, c) = Poly();
        }
        // Row k entries beyond pivot are already minors of order k+1.
        prev = m(k, c);
        res.pivot_cols.push_back(c);
        res.source_rows.push_back(order[k]);
        ++k;
    }
    res.echelon = PolyMatrix(0, m.cols());
    for (size_t r = 0; r < k; ++r) res.echelon.append_row(m.row(r));
    res.last_pivot = prev;
    return res;
}

inline size_t rank(const PolyMatrix& m) { return bareiss(m).pivot_cols.size(); }

/// Determinant of a square polynomial matrix (Bareiss).
inline Poly det(const PolyMatrix& m) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "det of non-square matrix");
    if (m.rows() == 0) return Poly(1L);
    auto res = bareiss(m);
    if (res.pivot_cols.size() < m.rows()) return Poly();
    return res.sign > 0 ? res.last_pivot : -res.last_pivot;
}

/// Right kernel over the fraction field of the symbol ring, with polynomial
/// basis vectors (Cramer's rule on the echelon form, no denominators).
inline PolyMatrix poly_nullspace(const PolyMatrix& m) {
    auto res = bareiss(m);
    const size_t k = res.pivot_cols.size(), n = m.cols();
    PolyMatrix basis(0, n);
    std::vector<bool> is_pivot(n, false);
    for (auto p : res.pivot_cols) is_pivot[p] = true;
    PolyMatrix square(k, k);
    for (size_t r = 0; r < k; ++r)
        for (size_t i = 0; i < k; ++i) square(r, i) = res.echelon(r, res.pivot_cols[i]);
    Poly d = det(square);
    for (size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Poly> v(n);
        v[f] = d;
        for (size_t i = 0; i < k; ++i) {
            PolyMatrix replaced = square;
            for (size_t r = 0; r < k; ++r) replaced(r, i) = -res.echelon(r, f);
            v[res.pivot_cols[i]] = det(replaced);
        }
        basis.append_row(v);
    }
    return basis;
}

inline PolyMatrix to_poly_matrix(const RatMatrix& m) {
    PolyMatrix p(m.rows(), m.cols());
    for (size_t r = 0; r < m.rows(); ++r)
        for (size_t c = 0; c < m.cols(); ++c) p(r, c) = Poly(m(r, c));
    return p;
}

inline bool is_constant(const PolyMatrix& m) {
    for (size_t r = 0; r < m.rows(); ++r)
        for (size_t c = 0; c < m.cols(); ++c)
            if (!m(r, c).is_constant()) return false;
    return true;
}

inline RatMatrix constant_part(const PolyMatrix& m) {
    RatMatrix q(m.rows(), m.cols());
    for (size_t r = 0; r < m.rows(); ++r)
        for (size_t c = 0; c < m.cols(); ++c) q(r, c) = m(r, c).constant_value();
    return q;
}

/// Rank over the fraction field; constant matrices take the rational route.
inline size_t field_rank(const PolyMatrix& m) {
    return is_constant(m) ? rank(constant_part(m)) : rank(m);
}

} // namespace slopefilt
