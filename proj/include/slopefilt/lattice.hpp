#pragma once

#include <vector>

#include "slopefilt/matrix.hpp"

namespace slopefilt {

// Integer lattices are carried as row bases in Hermite normal form: pivots
// strictly move right, pivots are positive, entries above a pivot lie in
// [0, pivot), zero rows are dropped. HNF equality is lattice equality.

namespace detail {

inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline void row_axpy(IntMatrix& m, size_t dst, const Integer& f, size_t src) {
    if (f == 0) return;
    for (size_t c = 0; c < m.cols(); ++c) m(dst, c) -= f * m(src, c);
}

/// Unimodular row reduction restricted to the first `limit` columns; returns
/// the number of pivot rows. Rows beyond that are zero in those columns.
inline size_t hnf_in_place(IntMatrix& m, size_t limit) {
    size_t row = 0;
    for (size_t c = 0; c < limit && row < m.rows(); ++c) {
        while (true) {
            size_t best = m.rows();
            for (size_t r = row; r < m.rows(); ++r) {
                if (m(r, c) == 0) continue;
                if (best == m.rows() || abs(m(r, c)) < abs(m(best, c))) best = r;
            }
            if (best == m.rows()) break;
            m.swap_rows(best, row);
            bool done = true;
            for (size_t r = row + 1; r < m.rows(); ++r) {
                if (m(r, c) == 0) continue;
                row_axpy(m, r, floor_div(m(r, c), m(row, c)), row);
                if (m(r, c) != 0) done = false;
            }
            if (done) break;
        }
        if (m(row, c) == 0) continue;
        if (m(row, c) < 0)
            for (size_t j = 0; j < m.cols(); ++j) m(row, j) = -m(row, j);
        for (size_t r = 0; r < row; ++r) row_axpy(m, r, floor_div(m(r, c), m(row, c)), row);
        ++row;
    }
    return row;
}

inline IntMatrix to_integer_rows(const RatMatrix& m) {
    IntMatrix out(m.rows(), m.cols());
    for (size_t r = 0; r < m.rows(); ++r) {
        Integer l = 1;
        for (size_t c = 0; c < m.cols(); ++c) {
            Integer d = m(r, c).get_den();
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
        }
        for (size_t c = 0; c < m.cols(); ++c) {
            Rational v = m(r, c) * l;
            out(r, c) = v.get_num();
        }
    }
    return out;
}

} // namespace detail

inline IntMatrix hnf(IntMatrix a) {
    size_t rk = detail::hnf_in_place(a, a.cols());
    IntMatrix out(0, a.cols());
    for (size_t r = 0; r < rk; ++r) out.append_row(a.row(r));
    return out;
}

/// Integer kernel lattice {v in Z^cols : M v = 0} of a rational matrix, HNF basis.
inline IntMatrix integer_kernel(const RatMatrix& m) {
    const size_t l = m.cols(), k = m.rows();
    IntMatrix im = detail::to_integer_rows(m);
    IntMatrix aug(l, k + l);
    for (size_t i = 0; i < l; ++i) {
        for (size_t r = 0; r < k; ++r) aug(i, r) = im(r, i);
        aug(i, k + i) = 1;
    }
    size_t rk = detail::hnf_in_place(aug, k);
    IntMatrix ker(0, l);
    for (size_t i = rk; i < l; ++i) {
        std::vector<Integer> v(l);
        for (size_t j = 0; j < l; ++j) v[j] = aug(i, k + j);
        ker.append_row(v);
    }
    return hnf(ker);
}

inline RatMatrix to_rational(const IntMatrix& a) {
    RatMatrix q(a.rows(), a.cols());
    for (size_t r = 0; r < a.rows(); ++r)
        for (size_t c = 0; c < a.cols(); ++c) q(r, c) = Rational(a(r, c));
    return q;
}

inline size_t rank(const IntMatrix& a) { return rank(to_rational(a)); }

/// (row lattice tensor Q) intersected with Z^ambient_l, as an HNF basis.
inline IntMatrix saturate(const IntMatrix& a, size_t ambient_l) {
    if (a.rows() > 0 && a.cols() != ambient_l)
        throw Error(ErrorCode::DimensionMismatch, "saturate: column count differs from ambient rank");
    if (a.rows() == 0) return IntMatrix(0, ambient_l);
    IntMatrix orth = integer_kernel(to_rational(a));
    return integer_kernel(to_rational(orth.rows() == 0 ? IntMatrix(0, ambient_l) : orth));
}

/// HNF basis of the intersection of two row lattices.
inline IntMatrix lattice_intersect(const IntMatrix& a0, const IntMatrix& b0) {
    if (a0.cols() != b0.cols()) throw Error(ErrorCode::DimensionMismatch, "lattice_intersect column counts");
    const size_t l = a0.cols();
    IntMatrix a = hnf(a0), b = hnf(b0);
    if (a.rows() == 0 || b.rows() == 0) return IntMatrix(0, l);
    // Solve u A - w B = 0 over Z; the intersection is spanned by the u A.
    RatMatrix sys(l, a.rows() + b.rows());
    for (size_t c = 0; c < l; ++c) {
        for (size_t i = 0; i < a.rows(); ++i) sys(c, i) = Rational(a(i, c));
        for (size_t i = 0; i < b.rows(); ++i) sys(c, a.rows() + i) = Rational(-b(i, c));
    }
    IntMatrix sol = integer_kernel(sys);
    IntMatrix gens(sol.rows(), l);
    for (size_t s = 0; s < sol.rows(); ++s)
        for (size_t i = 0; i < a.rows(); ++i)
            for (size_t c = 0; c < l; ++c) gens(s, c) += sol(s, i) * a(i, c);
    return hnf(gens);
}

/// Canonical representative of v + L, for L given in HNF.
inline std::vector<Integer> reduce_mod(std::vector<Integer> v, const IntMatrix& lattice_hnf) {
    for (size_t r = 0; r < lattice_hnf.rows(); ++r) {
        size_t p = 0;
        while (lattice_hnf(r, p) == 0) ++p;
        Integer f = detail::floor_div(v[p], lattice_hnf(r, p));
        if (f == 0) continue;
        for (size_t c = 0; c < v.size(); ++c) v[c] -= f * lattice_hnf(r, c);
    }
    return v;
}

inline bool in_lattice(const std::vector<Integer>& v, const IntMatrix& lattice_hnf) {
    auto red = reduce_mod(v, lattice_hnf);
    for (const auto& x : red)
        if (x != 0) return false;
    return true;
}

/// True when every row of `inner` lies in the lattice spanned by `outer_hnf`.
inline bool lattice_contains(const IntMatrix& outer_hnf, const IntMatrix& inner) {
    for (size_t r = 0; r < inner.rows(); ++r)
        if (!in_lattice(inner.row(r), outer_hnf)) return false;
    return true;
}

} // namespace slopefilt
