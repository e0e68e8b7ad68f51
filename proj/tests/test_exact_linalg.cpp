#include <gtest/gtest.h>

#include "oracles.hpp"
#include "slopefilt/lattice.hpp"

using namespace slopefilt;

namespace {

RatMatrix rat(const std::vector<std::vector<long>>& rows, size_t cols) {
    RatMatrix m(0, cols);
    for (const auto& r : rows) {
        std::vector<Rational> q(r.begin(), r.end());
        m.append_row(q);
    }
    return m;
}

IntMatrix ints(const std::vector<std::vector<long>>& rows, size_t cols) {
    IntMatrix m(0, cols);
    for (const auto& r : rows) m.append_row(std::vector<Integer>(r.begin(), r.end()));
    return m;
}

const Poly tau = Poly::variable(0);

RatMatrix random_rat(SeededRng& rng, size_t r, size_t c) {
    RatMatrix m(r, c);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < c; ++j) m(i, j) = rng.uniform(0, 2) == 0 ? Rational(0) : rng.rational(3);
    return m;
}

} // namespace

TEST(Rational, ParseCanonicalizes) {
    EXPECT_EQ(parse_rational("4/6"), Rational(2, 3));
    EXPECT_EQ(parse_rational("-3"), Rational(-3));
    EXPECT_EQ(parse_rational("4/6").get_den(), 3);
    EXPECT_THROW(parse_rational("1/0"), Error);
    EXPECT_THROW(parse_rational("1/-2"), Error);
    EXPECT_THROW(parse_rational("abc"), Error);
    EXPECT_THROW(parse_rational(""), Error);
}

TEST(Poly, ExactDivisionAndRejection) {
    Poly a = tau * tau - Poly(1L);
    Poly b = tau - Poly(1L);
    EXPECT_EQ(a.divexact(b), tau + Poly(1L));
    EXPECT_THROW((tau * tau + Poly(1L)).divexact(b), Error);
    Poly s = Poly::variable(1);
    Poly prod = (tau + s) * (tau - s.scaled(2)) * (s + Poly(3L));
    EXPECT_EQ(prod.divexact(tau + s), (tau - s.scaled(2)) * (s + Poly(3L)));
}

TEST(Rank, SpecExamples) {
    EXPECT_EQ(rank(RatMatrix::identity(2)), 2u);
    PolyMatrix prop(2, 2);
    prop(0, 0) = Poly(1L); prop(0, 1) = tau;
    prop(1, 0) = Poly(2L); prop(1, 1) = tau.scaled(2);
    EXPECT_EQ(rank(prop), 1u);
    PolyMatrix gen(2, 2);
    gen(0, 0) = Poly(1L); gen(0, 1) = tau;
    gen(1, 0) = tau; gen(1, 1) = Poly(1L);
    // 2x2 determinant oracle: 1 - tau^2 is a nonzero polynomial.
    EXPECT_EQ(oracle::laplace_det(gen), Poly(1L) - tau * tau);
    EXPECT_EQ(rank(gen), 2u);
    EXPECT_EQ(det(gen), Poly(1L) - tau * tau);
}

TEST(Rank, TransposeAndNullityProperty) {
    SeededRng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        size_t r = rng.uniform(0, 5), c = rng.uniform(0, 5);
        RatMatrix m = random_rat(rng, r, c);
        EXPECT_EQ(rank(m), rank(m.transpose()));
        RatMatrix ns = nullspace(m);
        EXPECT_EQ(rank(ns) + rank(m), c);
        for (size_t k = 0; k < ns.rows(); ++k)
            for (const auto& x : mat_vec(m, ns.row(k))) EXPECT_EQ(x, 0);
    }
}

TEST(Nullspace, SpecExamples) {
    RatMatrix k1 = nullspace(rat({{1, 1}}, 2));
    ASSERT_EQ(k1.rows(), 1u);
    EXPECT_EQ(k1.row(0), (std::vector<Rational>{-1, 1}));
    EXPECT_EQ(nullspace(RatMatrix::identity(3)).rows(), 0u);
    RatMatrix m = rat({{1, 2, 3}, {2, 4, 6}}, 3);
    RatMatrix k2 = nullspace(m);
    EXPECT_EQ(k2.rows(), 2u);
    for (size_t r = 0; r < k2.rows(); ++r)
        for (const auto& x : mat_vec(m, k2.row(r))) EXPECT_EQ(x, 0);
    // deterministic reruns
    EXPECT_EQ(nullspace(m), k2);
}

TEST(PolyRank, MatchesMinorOracleAndRandomSubstitution) {
    SeededRng rng(11);
    Poly vars[2] = {Poly::variable(0), Poly::variable(1)};
    for (int trial = 0; trial < 60; ++trial) {
        size_t r = rng.uniform(1, 4), c = rng.uniform(1, 4);
        PolyMatrix m(r, c);
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < c; ++j) {
                Poly e(Rational(rng.uniform(-2, 2)));
                for (auto& v : vars) e += v.scaled(Rational(rng.uniform(-1, 1)));
                m(i, j) = e;
            }
        if (trial % 3 == 0 && r > 1) // force a dependent row over Q(t)
            for (size_t j = 0; j < c; ++j) m(r - 1, j) = m(0, j) * vars[0];
        size_t exact = rank(m);
        EXPECT_EQ(exact, oracle::minor_rank(m));
        size_t sampled = 0;
        for (int s = 0; s < 20; ++s) {
            std::vector<Rational> at = {rng.rational(1000), rng.rational(1000)};
            RatMatrix q(r, c);
            for (size_t i = 0; i < r; ++i)
                for (size_t j = 0; j < c; ++j) q(i, j) = m(i, j).evaluate(at);
            sampled = std::max(sampled, rank(q));
        }
        EXPECT_EQ(exact, sampled);
        PolyMatrix ns = poly_nullspace(m);
        EXPECT_EQ(ns.rows(), c - exact);
        for (size_t k = 0; k < ns.rows(); ++k)
            for (const auto& x : mat_vec(m, ns.row(k))) EXPECT_TRUE(x.is_zero());
    }
}

TEST(Hnf, SpecExamples) {
    EXPECT_EQ(hnf(ints({{2, 0}, {0, 3}}, 2)), ints({{2, 0}, {0, 3}}, 2));
    EXPECT_EQ(hnf(ints({{1, 1}, {1, -1}}, 2)), ints({{1, 1}, {0, 2}}, 2));
    EXPECT_EQ(hnf(ints({{0, 0}}, 2)).rows(), 0u);
}

TEST(Hnf, SameLatticeIdempotentProperty) {
    // For full-row-rank inputs: every HNF row solves x A = h with integral x
    // (rational solve), and the Gram determinants agree, so the lattices match.
    SeededRng rng(3);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        size_t l = rng.uniform(1, 4), r = rng.uniform(1, static_cast<long>(l));
        std::vector<std::vector<long>> rows(r, std::vector<long>(l));
        for (auto& row : rows)
            for (auto& x : row) x = rng.uniform(-3, 3);
        IntMatrix a = ints(rows, l);
        IntMatrix h = hnf(a);
        EXPECT_EQ(hnf(h), h);
        if (rank(a) != r) continue;
        ++checked;
        ASSERT_EQ(h.rows(), r);
        RatMatrix at = to_rational(a).transpose();
        for (size_t k = 0; k < h.rows(); ++k) {
            RatMatrix aug(l, r + 1);
            for (size_t i = 0; i < l; ++i) {
                for (size_t j = 0; j < r; ++j) aug(i, j) = at(i, j);
                aug(i, r) = Rational(h(k, i));
            }
            auto piv = rref_in_place(aug);
            ASSERT_EQ(piv.size(), r) << "HNF row outside the rational span";
            for (size_t j = 0; j < r; ++j) EXPECT_EQ(aug(j, r).get_den(), 1) << "non-integral coefficient";
        }
        auto gram = [](const IntMatrix& m) {
            PolyMatrix g(m.rows(), m.rows());
            for (size_t i = 0; i < m.rows(); ++i)
                for (size_t j = 0; j < m.rows(); ++j) {
                    Integer s = 0;
                    for (size_t c = 0; c < m.cols(); ++c) s += m(i, c) * m(j, c);
                    g(i, j) = Poly(Rational(s));
                }
            return oracle::laplace_det(g);
        };
        EXPECT_EQ(gram(a), gram(h));
    }
    EXPECT_GT(checked, 100);
}

TEST(Saturate, SpecExamples) {
    EXPECT_EQ(saturate(ints({{2, 0}}, 2), 2), ints({{1, 0}}, 2));
    EXPECT_EQ(saturate(ints({{2, 2}}, 2), 2), ints({{1, 1}}, 2));
    EXPECT_EQ(saturate(ints({{1, 1}, {1, -1}}, 2), 2), IntMatrix::identity(2));
}

TEST(Saturate, IdempotentRankPreservingProperty) {
    SeededRng rng(5);
    for (int trial = 0; trial < 150; ++trial) {
        size_t r = rng.uniform(1, 3), l = rng.uniform(1, 4);
        std::vector<std::vector<long>> rows(r, std::vector<long>(l));
        for (auto& row : rows)
            for (auto& x : row) x = rng.uniform(-4, 4);
        IntMatrix a = ints(rows, l);
        IntMatrix s = saturate(a, l);
        EXPECT_EQ(saturate(s, l), s);
        EXPECT_EQ(s.rows(), rank(a));
        // brute force: every integer vector of small height in the rational
        // span of a belongs to s.
        oracle::for_each_box_vector(l, 2, [&](const std::vector<long>& v) {
            RatMatrix stacked = to_rational(a);
            stacked.append_row(std::vector<Rational>(v.begin(), v.end()));
            bool in_span = rank(stacked) == rank(a);
            EXPECT_EQ(in_span, in_lattice(oracle::to_integers(v), s));
        });
    }
}

TEST(LatticeIntersect, SpecExamples) {
    EXPECT_EQ(lattice_intersect(IntMatrix::identity(2), ints({{1, 0}, {0, 2}}, 2)), ints({{1, 0}, {0, 2}}, 2));
    EXPECT_EQ(lattice_intersect(ints({{1, 0}}, 2), ints({{0, 1}}, 2)).rows(), 0u);
    EXPECT_EQ(lattice_intersect(ints({{1, 1}}, 2), ints({{1, -1}}, 2)).rows(), 0u);
}

TEST(LatticeIntersect, BruteForceMembership) {
    SeededRng rng(9);
    for (int trial = 0; trial < 60; ++trial) {
        const size_t l = 2;
        std::vector<std::vector<long>> ra(rng.uniform(1, 2), std::vector<long>(l)), rb(rng.uniform(1, 2), std::vector<long>(l));
        for (auto* rows : {&ra, &rb})
            for (auto& row : *rows)
                for (auto& x : row) x = rng.uniform(-3, 3);
        IntMatrix meet = lattice_intersect(ints(ra, l), ints(rb, l));
        auto pa = oracle::lattice_points(ra, l, 12);
        auto pb = oracle::lattice_points(rb, l, 12);
        oracle::for_each_box_vector(l, 4, [&](const std::vector<long>& v) {
            bool both = pa.count(v) && pb.count(v);
            EXPECT_EQ(both, in_lattice(oracle::to_integers(v), meet));
        });
    }
}
