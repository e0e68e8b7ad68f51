#pragma once
// Small model builders shared by the test binaries.

#include <string>
#include <vector>

#include "slopefilt/group_model.hpp"

namespace models {

using namespace slopefilt;

inline GroupModel rational(size_t n, const std::vector<std::vector<long>>& gens, const std::vector<Rational>& scales) {
    ModelConfig cfg;
    cfg.n = n;
    for (const auto& g : gens) {
        std::vector<SymbolicScalar> row;
        for (auto x : g) row.emplace_back(Rational(x));
        cfg.generators.push_back(row);
    }
    cfg.scales = scales;
    return build_model(cfg);
}

inline SymbolicScalar sym(long constant, size_t symbol, long coeff) {
    SymbolicScalar s(constant);
    s.symbol_coeffs[symbol] = coeff;
    s.normalize();
    return s;
}

/// gamma_1 = (1, 0), gamma_2 = (tau, 0) in G_a^2.
inline GroupModel model_b(const Rational& s1, const Rational& s2) {
    ModelConfig cfg;
    cfg.n = 2;
    cfg.symbols = {"tau"};
    cfg.generators = {{SymbolicScalar(1), SymbolicScalar(0)}, {sym(0, 0, 1), SymbolicScalar(0)}};
    cfg.scales = {s1, s2};
    return build_model(cfg);
}

/// Uniformly drawn small rational model (n <= 4, l <= 4, integer entries in
/// [-2, 2], scales integer or p/q in [1, 100]).
inline GroupModel random_rational(SeededRng& rng, size_t max_n = 4, size_t max_l = 4) {
    size_t n = static_cast<size_t>(rng.uniform(1, static_cast<long>(max_n)));
    size_t l = static_cast<size_t>(rng.uniform(0, static_cast<long>(max_l)));
    std::vector<std::vector<long>> gens(l, std::vector<long>(n));
    for (auto& g : gens)
        for (auto& x : g) x = rng.uniform(0, 2) == 0 ? 0 : rng.uniform(-2, 2);
    std::vector<Rational> scales;
    for (size_t j = 0; j < l; ++j) {
        Rational s(rng.uniform(100, 10000), 100);
        s.canonicalize();
        if (rng.uniform(0, 3) == 0) s = Rational(rng.uniform(1, 5));  // frequent ties and S = 1
        scales.push_back(s);
    }
    return rational(n, gens, scales);
}

} // namespace models
