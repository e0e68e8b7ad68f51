#pragma once
// Test-only reference computations. Deliberately naive and independent of the
// library's elimination code paths.

#include <functional>
#include <set>
#include <vector>

#include "slopefilt/matrix.hpp"

namespace oracle {

using slopefilt::Integer;
using slopefilt::Poly;
using slopefilt::PolyMatrix;
using slopefilt::Rational;

/// Laplace expansion along the first row.
inline Poly laplace_det(const PolyMatrix& m) {
    const size_t n = m.rows();
    if (n == 0) return Poly(1L);
    if (n == 1) return m(0, 0);
    Poly total;
    for (size_t c = 0; c < n; ++c) {
        PolyMatrix minor(n - 1, n - 1);
        for (size_t r = 1; r < n; ++r)
            for (size_t cc = 0, k = 0; cc < n; ++cc) {
                if (cc == c) continue;
                minor(r - 1, k++) = m(r, cc);
            }
        Poly term = m(0, c) * laplace_det(minor);
        total = (c % 2 == 0) ? total + term : total - term;
    }
    return total;
}

/// Rank as the largest k with a nonzero k x k minor (exhaustive over subsets).
inline size_t minor_rank(const PolyMatrix& m) {
    size_t best = 0;
    const size_t R = m.rows(), C = m.cols();
    for (size_t k = 1; k <= std::min(R, C); ++k) {
        bool found = false;
        for (unsigned rmask = 0; rmask < (1u << R) && !found; ++rmask) {
            if (static_cast<size_t>(__builtin_popcount(rmask)) != k) continue;
            for (unsigned cmask = 0; cmask < (1u << C) && !found; ++cmask) {
                if (static_cast<size_t>(__builtin_popcount(cmask)) != k) continue;
                PolyMatrix sub(k, k);
                size_t rr = 0;
                for (size_t r = 0; r < R; ++r) {
                    if (!(rmask >> r & 1)) continue;
                    size_t cc = 0;
                    for (size_t c = 0; c < C; ++c)
                        if (cmask >> c & 1) sub(rr, cc++) = m(r, c);
                    ++rr;
                }
                if (!laplace_det(sub).is_zero()) found = true;
            }
        }
        if (found) best = k;
        else break;
    }
    return best;
}

/// All integer combinations of the rows with coefficients in [-box, box].
inline std::set<std::vector<long>> lattice_points(const std::vector<std::vector<long>>& rows, size_t l, long box) {
    std::set<std::vector<long>> out;
    std::vector<long> coef(rows.size(), -box);
    while (true) {
        std::vector<long> v(l, 0);
        for (size_t i = 0; i < rows.size(); ++i)
            for (size_t c = 0; c < l; ++c) v[c] += coef[i] * rows[i][c];
        out.insert(v);
        size_t i = 0;
        while (i < coef.size() && coef[i] == box) coef[i++] = -box;
        if (i == coef.size()) break;
        ++coef[i];
    }
    return out;
}

/// Calls f on every integer vector of length l with entries in [-h, h].
inline void for_each_box_vector(size_t l, long h, const std::function<void(const std::vector<long>&)>& f) {
    std::vector<long> v(l, -h);
    if (l == 0) {
        f(v);
        return;
    }
    while (true) {
        f(v);
        size_t i = 0;
        while (i < l && v[i] == h) v[i++] = -h;
        if (i == l) break;
        ++v[i];
    }
}

inline std::vector<Integer> to_integers(const std::vector<long>& v) {
    return std::vector<Integer>(v.begin(), v.end());
}

} // namespace oracle
