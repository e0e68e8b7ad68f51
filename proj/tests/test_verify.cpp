#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "models.hpp"
#include "slopefilt/verify.hpp"

using namespace slopefilt;

namespace {

Subgroup line(const GroupModel& g, std::vector<long> dir) {
    PolyMatrix rows(0, g.n());
    std::vector<Poly> row;
    for (auto x : dir) row.emplace_back(Rational(x));
    rows.append_row(row);
    return span_subgroup(g, rows);
}

double phi_float(const GroupModel& g, const RankProfile& p) {
    double v = 0;
    long prev = 0;
    for (size_t j = 0; j < g.l(); ++j) {
        v += (p.gamma_ranks[j] - prev) * std::log(g.scales()[j].get_d());
        prev = p.gamma_ranks[j];
    }
    return v;
}

} // namespace

TEST(PrimitiveBoxVectors, CountsMatchBruteForce) {
    EXPECT_EQ(primitive_box_vectors(2, 2).size(), 8u);
    EXPECT_EQ(primitive_box_vectors(4, 2).size(), 272u);
    EXPECT_TRUE(primitive_box_vectors(0, 2).empty());
}

TEST(SmallSubspace, CanonicalKeysAreBasisIndependent) {
    using small::canonical;
    auto a = canonical({1, 2, 0, 0, 1, 1}, 2, 3);
    auto b = canonical({1, 3, 1, 2, 4, 2}, 2, 3);
    auto c = canonical({1, 2, 0, 1, 3, 1}, 2, 3);
    EXPECT_EQ(a, c);
    EXPECT_EQ(small::dim(b, 3), 2u);
    EXPECT_TRUE(small::in_span(a, {2, 5, 1}, 3));
    EXPECT_FALSE(small::in_span(a, {0, 0, 1}, 3));
    auto hp = small::hyperplane(small::normal(canonical({1, 2, 0}, 1, 3), {0, 1, 1}, 3), 3);
    EXPECT_EQ(hp, a);
}

TEST(Verify, SpecExamplesPass) {
    auto g = models::rational(2, {{1, 0}, {0, 1}}, {100, 10});
    Chain c = build_chain(g);
    auto cert = verify_chain(g, c);
    EXPECT_TRUE(cert.slopes_decreasing);
    EXPECT_TRUE(cert.frak_ordered);
    EXPECT_TRUE(cert.telescoping);
    EXPECT_EQ(cert.telescoping_value, 1000);
    EXPECT_TRUE(cert.psi_injective);
    EXPECT_TRUE(cert.scaling_invariant);
    EXPECT_GT(cert.candidates, 3u);
    for (const auto& p : cert.profiles)
        for (int s : p.chi_sign) EXPECT_LE(s, 0);
}

TEST(Verify, CorruptedChainIsRejectedAtChi) {
    auto g = models::rational(2, {{1, 0}, {0, 1}}, {100, 10});
    Chain c = build_chain(g);
    c.nodes[1] = make_node(g, line(g, {1, 1}));
    try {
        verify_chain(g, c);
        FAIL() << "expected a certificate violation";
    } catch (const CertificateViolation& v) {
        EXPECT_EQ(v.check(), "chi<=0");
        EXPECT_EQ(v.step(), 0);
    }
}

TEST(Verify, ScalingSquaresRadicands) {
    auto g = models::rational(2, {{1, 0}, {0, 1}}, {100, 10});
    Chain c = build_chain(g);
    Chain sq = build_chain(g.with_scales({10000, 100}));
    EXPECT_TRUE(same_chain(c, sq));
    EXPECT_EQ(sq.steps[0].frak.radicand, 10000);
    EXPECT_EQ(sq.steps[1].frak.radicand, 100);
}

TEST(Verify, SymbolicModelBAtHeightThree) {
    auto b = models::model_b(5, 5);
    Chain c = build_chain(b);
    VerifyOptions opt;
    opt.height = 3;
    auto cert = verify_chain(b, c, opt);
    EXPECT_TRUE(cert.psi_injective);
    EXPECT_EQ(cert.telescoping_value, 25);
}

TEST(Verify, Int64EngineMatchesGeneralClosureEnumeration) {
    // The general closure path (used for symbolic models) serves as the
    // oracle for the integer subspace engine on small rational models.
    SeededRng rng(77);
    for (int t = 0; t < 40; ++t) {
        auto g = models::random_rational(rng, 3, 3);
        VerifyOptions opt;
        auto general = detail::symbolic_candidates(g, opt);
        detail::RationalEngine eng(g);
        eng.enumerate(g, opt, {});
        std::multiset<RankProfile> a, b;
        for (const auto& h : general) a.insert(rank_profile(g, h));
        for (size_t k = 0; k < eng.size(); ++k) b.insert(eng.profile(k));
        // The general path always contains ZERO; the engine does too.
        EXPECT_EQ(a, b) << "trial " << t;
    }
}

TEST(Verify, RandomRationalModelsPassWithFloatChiOracle) {
    SeededRng rng(2024);
    for (int t = 0; t < 60; ++t) {
        auto g = models::random_rational(rng, 3, 4);
        Chain c = build_chain(g);
        VerifyOptions opt;
        opt.random_count = 10;
        ChainCertificate cert;
        ASSERT_NO_THROW(cert = verify_chain(g, c, opt)) << "trial " << t;
        // Independent floating-point evaluation of chi with a tolerance that
        // is only used to double-check signs far from zero.
        for (const auto& p : cert.profiles) {
            double fk = phi_float(g, p.psi);
            for (size_t i = 0; i < c.r(); ++i) {
                double fi = phi_float(g, c.nodes[i].profile), fn = phi_float(g, c.nodes[i + 1].profile);
                double di = static_cast<double>(c.nodes[i].dim), dn = static_cast<double>(c.nodes[i + 1].dim);
                double chi = (dn - di) * fk - (fn - fi) * p.psi.dim + fn * di - fi * dn;
                if (std::abs(chi) > 1e-7) {
                    EXPECT_EQ(p.chi_sign[i], chi > 0 ? 1 : -1);
                }
            }
        }
    }
}

TEST(Verify, CertificateCandidatesAreClosed) {
    auto g = models::rational(2, {{1, 0}, {0, 1}, {1, 1}}, {9, 5, 3});
    for (const auto& h : certificate_candidates(g)) {
        auto again = closure(g, h.coeff_lattice);
        EXPECT_TRUE(same_subgroup(again, h) || h.dim == 0);
        EXPECT_TRUE(h.coeff_lattice.contains(g.kernel()));
    }
}
