#include <gtest/gtest.h>

#include "models.hpp"
#include "oracles.hpp"
#include "slopefilt/group_model.hpp"

using namespace slopefilt;

namespace {

IntMatrix ints(const std::vector<std::vector<long>>& rows, size_t cols) {
    IntMatrix m(0, cols);
    for (const auto& r : rows) m.append_row(std::vector<Integer>(r.begin(), r.end()));
    return m;
}

Subgroup line(const GroupModel& g, std::vector<long> dir) {
    PolyMatrix rows(0, g.n());
    std::vector<Poly> row;
    for (auto x : dir) row.emplace_back(Rational(x));
    rows.append_row(row);
    return span_subgroup(g, rows);
}

} // namespace

TEST(BuildModel, SortsScalesAndRecordsPermutation) {
    auto g = models::rational(2, {{1, 0}, {0, 1}}, {10, 100});
    EXPECT_EQ(g.scales(), (std::vector<Rational>{100, 10}));
    EXPECT_EQ(g.permutation(), (std::vector<size_t>{1, 0}));
    EXPECT_EQ(g.generators()[0].rational_coords(), (std::vector<Rational>{0, 1}));
}

TEST(BuildModel, EmptyGeneratorsAndValidation) {
    auto g = models::rational(1, {}, {});
    EXPECT_EQ(g.l(), 0u);
    EXPECT_EQ(g.kernel().rank(), 0u);
    try {
        models::rational(1, {{1}}, {Rational(1, 2)});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidScale);
    }
    try {
        models::rational(2, {{1}}, {3});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
    ModelConfig dup;
    dup.n = 1;
    dup.symbols = {"t", "t"};
    try {
        build_model(dup);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DuplicateSymbol);
    }
}

TEST(KernelLattice, Examples) {
    EXPECT_EQ(models::rational(1, {{1}, {2}}, {3, 3}).kernel().basis, ints({{2, -1}}, 2));
    EXPECT_EQ(models::rational(2, {{1, 0}, {0, 1}}, {3, 3}).kernel().rank(), 0u);
    EXPECT_EQ(models::rational(2, {{0, 0}, {0, 1}}, {3, 3}).kernel().basis, ints({{1, 0}}, 2));
}

TEST(Closure, Examples) {
    auto b = models::model_b(5, 5);
    Subgroup x = closure(b, Sublattice(ints({{1, 0}}, 2)));
    EXPECT_EQ(x.dim, 1u);
    EXPECT_EQ(x.coeff_lattice, Sublattice::full(2));

    Subgroup z = closure(b, Sublattice::zero(2));
    EXPECT_EQ(z.dim, 0u);
    EXPECT_EQ(z.coeff_lattice, b.kernel());

    auto g = models::rational(2, {{1, 0}, {0, 1}}, {3, 3});
    Subgroup d = closure(g, Sublattice(ints({{1, 1}}, 2)));
    EXPECT_EQ(d.dim, 1u);
    EXPECT_EQ(d.coeff_lattice.basis, ints({{1, 1}}, 2));
}

TEST(Closure, SymbolicGeneratorsAreNotCollapsed) {
    // gamma_1 = (1, 0), gamma_2 = (0, tau), gamma_3 = (1, tau): the closure of
    // <e_3> is a line over Q(tau) containing only multiples of gamma_3.
    ModelConfig cfg;
    cfg.n = 2;
    cfg.symbols = {"tau"};
    cfg.generators = {{1, 0}, {0, models::sym(0, 0, 1)}, {1, models::sym(0, 0, 1)}};
    cfg.scales = {3, 3, 3};
    auto g = build_model(cfg);
    EXPECT_EQ(g.kernel().basis, ints({{1, 1, -1}}, 3));
    Subgroup h = closure(g, Sublattice(ints({{0, 0, 1}}, 3)));
    EXPECT_EQ(h.dim, 1u);
    EXPECT_EQ(h.coeff_lattice.rank(), 2u);  // <e_3> plus the kernel
}

TEST(RankProfile, Examples) {
    auto g = models::rational(2, {{1, 0}, {0, 1}}, {5, 3});
    EXPECT_EQ(rank_profile(g, full_subgroup(g)).gamma_ranks, (std::vector<long>{1, 2}));
    EXPECT_EQ(rank_profile(g, zero_subgroup(g)).gamma_ranks, (std::vector<long>{0, 0}));
    auto b = models::model_b(5, 5);
    auto p = rank_profile(b, closure(b, Sublattice(ints({{1, 0}}, 2))));
    EXPECT_EQ(p.dim, 1u);
    EXPECT_EQ(p.gamma_ranks, (std::vector<long>{1, 2}));
}

TEST(Specialize, Examples) {
    auto b = models::model_b(5, 5);
    auto s = specialize(b, {{"tau", Rational(22, 7)}}, 0);
    EXPECT_TRUE(s.is_rational());
    EXPECT_EQ(s.generators()[1].rational_coords(), (std::vector<Rational>{Rational(22, 7), 0}));
    EXPECT_EQ(s.provenance().at("specialize.tau"), "22/7");
    auto g = models::rational(2, {{1, 2}}, {3});
    auto same = specialize(g, {}, 0);
    EXPECT_EQ(same.generators(), g.generators());
    auto r1 = specialize(b, {}, 42), r2 = specialize(b, {}, 42);
    EXPECT_EQ(r1.generators(), r2.generators());
    try {
        specialize(b, {{"sigma", Rational(1)}}, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownSymbol);
    }
    ModelConfig two;
    two.n = 1;
    two.symbols = {"a", "b"};
    two.generators = {{models::sym(0, 0, 1)}};
    two.scales = {2};
    try {
        specialize(build_model(two), {{"a", Rational(1)}}, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingSymbol);
    }
}

TEST(Closure, IdempotentMonotoneFlagProperties) {
    SeededRng rng(31);
    for (int t = 0; t < 80; ++t) {
        auto g = models::random_rational(rng, 3, 3);
        const size_t l = g.l();
        if (l == 0) continue;
        std::vector<std::vector<long>> gens(static_cast<size_t>(rng.uniform(1, static_cast<long>(l))), std::vector<long>(l));
        for (auto& v : gens)
            for (auto& x : v) x = rng.uniform(-2, 2);
        Sublattice lam(ints(gens, l));
        Subgroup h = closure(g, lam);
        Subgroup again = closure(g, h.coeff_lattice);
        EXPECT_TRUE(same_subgroup(h, again));
        EXPECT_TRUE(h.coeff_lattice.contains(g.kernel()));
        EXPECT_TRUE(h.coeff_lattice.contains(lam));
        // Enlarge by one more vector: monotone.
        auto bigger_rows = gens;
        std::vector<long> extra(l);
        for (auto& x : extra) x = rng.uniform(-2, 2);
        bigger_rows.push_back(extra);
        Subgroup big = closure(g, Sublattice(ints(bigger_rows, l)));
        EXPECT_TRUE(big.coeff_lattice.contains(h.coeff_lattice));
        EXPECT_LE(h.dim, big.dim);
        // Flag property and the rational-model identity rk = dim(H cap span Gamma_j).
        auto p = rank_profile(g, h);
        for (size_t j = 0; j < l; ++j) {
            long step = p.gamma_ranks[j] - (j ? p.gamma_ranks[j - 1] : 0);
            EXPECT_TRUE(step == 0 || step == 1);
            RatMatrix span_j(0, g.n());
            for (size_t i = 0; i <= j; ++i) span_j.append_row(g.generators()[i].rational_coords());
            RatMatrix hb = constant_part(h.span_basis);
            size_t meet = rank(span_j) + h.dim - rank(hb.rows() ? hb.stacked(span_j) : span_j);
            EXPECT_EQ(static_cast<size_t>(p.gamma_ranks[j]), meet);
        }
    }
}

TEST(Closure, PointMembershipMatchesLatticeMembership) {
    // iota(v) in H  <=>  v in coeff_lattice(H), exhaustively on a box.
    auto g = models::rational(2, {{1, 0}, {0, 1}, {1, 1}, {2, 0}}, {5, 4, 3, 2});
    Subgroup d = line(g, {1, 1});
    RatMatrix basis = constant_part(d.span_basis);
    oracle::for_each_box_vector(4, 2, [&](const std::vector<long>& v) {
        auto p = g.image(oracle::to_integers(v)).rational_coords();
        RatMatrix st = basis;
        st.append_row(p);
        bool in_h = rank(st) == d.dim;
        EXPECT_EQ(in_h, d.coeff_lattice.contains(oracle::to_integers(v)));
    });
}
