#pragma once

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "slopefilt/verify.hpp"

namespace slopefilt {

inline constexpr std::uint64_t kDefaultEnumerationLimit = 10000000;

/// Points of Gamma(lambda S). witnesses[k] is a box vector mapping to
/// points[k]; entries are ordered by the kernel-reduced witness.
struct GammaSet {
    std::vector<Point> points;
    std::vector<std::vector<Integer>> witnesses;
    std::vector<Rational> scale_used;
    Rational lambda = 1;
    std::vector<long> bounds;  ///< |n_j| <= bounds[j]

    size_t size() const { return witnesses.size(); }
};

/// Largest integer strictly below q (q > 0).
inline long strict_floor(const Rational& q) {
    Integer c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return c.get_si() - 1;
}

inline GammaSet enumerate_gamma(const GroupModel& model, const Rational& lambda,
                                std::uint64_t limit = kDefaultEnumerationLimit) {
    if (lambda <= 0) throw Error(ErrorCode::ValidationError, "lambda must be positive");
    const size_t l = model.l();
    GammaSet out;
    out.lambda = lambda;
    out.scale_used = model.scales();
    Integer total = 1;
    for (size_t j = 0; j < l; ++j) {
        long b = std::max(0L, strict_floor(lambda * model.scales()[j]));
        out.bounds.push_back(b);
        total *= 2 * b + 1;
    }
    if (total > Integer(static_cast<unsigned long>(limit)))
        throw Error(ErrorCode::EnumerationTooLarge,
                    "box of " + total.get_str() + " coefficient tuples exceeds limit " + std::to_string(limit));
    if (l == 0) {
        out.witnesses.push_back({});
        out.points.push_back(model.image({}));
        return out;
    }
    const bool dedup = model.kernel().rank() > 0;
    std::map<std::vector<Integer>, std::vector<Integer>> seen;
    std::vector<long> v(l);
    for (size_t j = 0; j < l; ++j) v[j] = -out.bounds[j];
    while (true) {
        std::vector<Integer> z(v.begin(), v.end());
        if (dedup) {
            auto key = reduce_mod(z, model.kernel().basis);
            seen.try_emplace(std::move(key), std::move(z));
        } else {
            out.witnesses.push_back(std::move(z));
        }
        size_t i = l;
        while (i > 0 && v[i - 1] == out.bounds[i - 1]) {
            v[i - 1] = -out.bounds[i - 1];
            --i;
        }
        if (i == 0) break;
        ++v[i - 1];
    }
    for (auto& [key, w] : seen) out.witnesses.push_back(std::move(w));
    out.points.reserve(out.witnesses.size());
    for (const auto& w : out.witnesses) out.points.push_back(model.image(w));
    return out;
}

inline void require_nested(const Subgroup& hp, const Subgroup& hdp) {
    if (!hp.coeff_lattice.contains(hdp.coeff_lattice)) throw Error(ErrorCode::NotNested, "H'' is not contained in H'");
}

/// Card(Omega cap H' mod H'').
inline size_t card_mod(const GammaSet& omega, const Subgroup& hp, const Subgroup& hdp) {
    require_nested(hp, hdp);
    std::set<std::vector<Integer>> classes;
    for (const auto& v : omega.witnesses)
        if (hp.coeff_lattice.contains(v)) classes.insert(reduce_mod(v, hdp.coeff_lattice.basis));
    return classes.size();
}

/// Number of points of Omega in the coset x + H', x given by a coefficient vector.
inline size_t coset_count(const GammaSet& omega, const std::vector<Integer>& x, const Subgroup& hp) {
    size_t count = 0;
    for (const auto& v : omega.witnesses) {
        std::vector<Integer> d(v.size());
        for (size_t j = 0; j < v.size(); ++j) d[j] = v[j] - x[j];
        if (hp.coeff_lattice.contains(d)) ++count;
    }
    return count;
}

enum class CombineMode { Sumset, Diffset };

/// Omega[n] (all sums of n elements) or Omega{n} = Omega[n] - Omega[n].
inline std::set<Point> combine(const std::vector<Point>& omega, size_t n, CombineMode mode,
                               std::uint64_t limit = kDefaultEnumerationLimit) {
    if (omega.empty()) return {};
    auto guard = [&](size_t a, size_t b) {
        if (static_cast<long double>(a) * static_cast<long double>(b) > static_cast<long double>(limit))
            throw Error(ErrorCode::EnumerationTooLarge, "combined set exceeds limit " + std::to_string(limit));
    };
    std::set<Point> base(omega.begin(), omega.end());
    Point zero;
    zero.coords.assign(omega.front().size(), SymbolicScalar());
    std::set<Point> acc{zero};
    for (size_t k = 0; k < n; ++k) {
        guard(acc.size(), base.size());
        std::set<Point> next;
        for (const auto& a : acc)
            for (const auto& b : base) next.insert(a + b);
        acc = std::move(next);
    }
    if (mode == CombineMode::Sumset) return acc;
    guard(acc.size(), acc.size());
    std::set<Point> diff;
    for (const auto& a : acc)
        for (const auto& b : acc) diff.insert(a - b);
    return diff;
}

inline std::set<Point> combine(const GammaSet& omega, size_t n, CombineMode mode,
                               std::uint64_t limit = kDefaultEnumerationLimit) {
    return combine(omega.points, n, mode, limit);
}

struct SweepRow {
    Rational lambda;
    size_t count = 0;
    long predicted_exponent = 0;
    Rational ratio;  ///< count / (lambda^rk N)
};

struct CountReport {
    size_t raw_count = 0;  ///< at lambda = 1
    Rational n_formula_value;
    Rational ratio;
    long rank = 0;  ///< rk((Gamma cap H') / (Gamma cap H''))
    std::vector<SweepRow> sweep;
    Rational ratio_min, ratio_max;
    double fitted_exponent = 0;  ///< least-squares slope of log count on log lambda (display)
    bool exponent_match = false;
};

inline CountReport counting_check(const GroupModel& model, const Subgroup& hp, const Subgroup& hdp,
                                  const std::vector<Rational>& lambdas,
                                  std::uint64_t limit = kDefaultEnumerationLimit) {
    require_nested(hp, hdp);
    CountReport rep;
    rep.n_formula_value = n_formula(model, hp, hdp);
    for (auto x : double_quotient_exponents(model, hp, hdp)) rep.rank += x;
    rep.raw_count = card_mod(enumerate_gamma(model, 1, limit), hp, hdp);
    rep.ratio = Rational(static_cast<long>(rep.raw_count)) / rep.n_formula_value;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t k = 0; k < lambdas.size(); ++k) {
        SweepRow row;
        row.lambda = lambdas[k];
        row.count = card_mod(enumerate_gamma(model, lambdas[k], limit), hp, hdp);
        row.predicted_exponent = rep.rank;
        row.ratio = Rational(static_cast<long>(row.count)) / (rpow(lambdas[k], rep.rank) * rep.n_formula_value);
        if (k == 0 || row.ratio < rep.ratio_min) rep.ratio_min = row.ratio;
        if (k == 0 || row.ratio > rep.ratio_max) rep.ratio_max = row.ratio;
        double x = std::log(lambdas[k].get_d()), y = std::log(static_cast<double>(row.count));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        rep.sweep.push_back(row);
    }
    const double m = static_cast<double>(lambdas.size());
    const double var = sxx - sx * sx / m;
    if (lambdas.size() >= 2 && var > 0) {
        rep.fitted_exponent = (sxy - sx * sy / m) / var;
        rep.exponent_match = std::lround(rep.fitted_exponent) == rep.rank;
    }
    return rep;
}

/// Extremal count ratio over candidates at one chain step; the ratio is
/// count / S_i^{k/p}, stored exactly as (count^p / radicand^k)^(1/p).
struct RatioEntry {
    size_t step = 0;
    size_t candidates = 0;
    std::optional<RootedRational> extreme;
    std::string witness;
};

struct DistributionReport {
    Rational epsilon;
    long bracket = 1;                              ///< allowed drift factor F across scales
    std::vector<long> alphas;
    std::vector<std::vector<RatioEntry>> upper;    ///< [alpha][i]: max over H_i < H
    std::vector<std::vector<RatioEntry>> lower;    ///< [alpha][i-1]: min over H < H_i
    bool bounded = true;
};

namespace detail {

inline RootedRational count_ratio(size_t count, const RootedRational& frak, long k) {
    Rational num = rpow(Rational(static_cast<long>(count)), frak.root);
    return {num / rpow(frak.radicand, k), frak.root};
}

} // namespace detail

/// Empirical form of the upper and lower distribution bounds along the chain,
/// at the scales S^alpha for alpha = 1..scale_factor.
inline DistributionReport distribution_checks(const GroupModel& model, const Chain& chain, const Rational& epsilon,
                                              long scale_factor = 2, const VerifyOptions& cand_opt = {},
                                              std::uint64_t limit = kDefaultEnumerationLimit) {
    if (!(epsilon > 0 && epsilon < 1)) throw Error(ErrorCode::ValidationError, "epsilon must lie in (0, 1)");
    DistributionReport rep;
    rep.epsilon = epsilon;
    rep.bracket = 1;
    for (size_t j = 0; j < model.l(); ++j) rep.bracket *= 4;
    auto cands = certificate_candidates(model, cand_opt);
    const size_t r = chain.r();
    const long n = static_cast<long>(model.n());
    for (long alpha = 1; alpha <= scale_factor; ++alpha) {
        std::vector<Rational> powered;
        for (const auto& s : model.scales()) powered.push_back(rpow(s, alpha));
        GroupModel scaled = model.with_scales(powered);
        rep.alphas.push_back(alpha);
        GammaSet big = enumerate_gamma(scaled, Rational(2 * n), limit);
        std::vector<RatioEntry> up, low;
        for (size_t i = 0; i < r; ++i) {
            const auto& hi = chain.nodes[i].subgroup;
            RootedRational frak = frak_S(scaled, chain, i);
            RatioEntry e;
            e.step = i;
            for (const auto& h : cands) {
                if (h.dim <= hi.dim || !contains(h, hi)) continue;
                ++e.candidates;
                auto q = detail::count_ratio(card_mod(big, h, hi), frak, static_cast<long>(h.dim - hi.dim));
                if (!e.extreme || compare(q, *e.extreme) == Ordering::Greater) {
                    e.extreme = q;
                    e.witness = describe(h);
                }
            }
            up.push_back(e);
        }
        for (size_t i = 1; i <= r; ++i) {
            const auto& hi = chain.nodes[i].subgroup;
            RootedRational frak = frak_S(scaled, chain, i - 1);
            GammaSet small_set = enumerate_gamma(scaled, epsilon / Rational(static_cast<long>(hi.dim)), limit);
            RatioEntry e;
            e.step = i;
            for (const auto& h : cands) {
                if (h.dim >= hi.dim || !contains(hi, h)) continue;
                ++e.candidates;
                auto q = detail::count_ratio(card_mod(small_set, hi, h), frak, static_cast<long>(hi.dim - h.dim));
                if (!e.extreme || compare(q, *e.extreme) == Ordering::Less) {
                    e.extreme = q;
                    e.witness = describe(h);
                }
            }
            low.push_back(e);
        }
        rep.upper.push_back(std::move(up));
        rep.lower.push_back(std::move(low));
    }
    // Boundedness independent of S: compare every scale against alpha = 1.
    for (size_t a = 1; a < rep.alphas.size(); ++a) {
        for (size_t i = 0; i < rep.upper[a].size(); ++i) {
            const auto& base = rep.upper[0][i].extreme;
            const auto& now = rep.upper[a][i].extreme;
            if (base && now && compare(*now, {base->radicand * rpow(Rational(rep.bracket), base->root), base->root}) ==
                                   Ordering::Greater)
                rep.bounded = false;
        }
        for (size_t i = 0; i < rep.lower[a].size(); ++i) {
            const auto& base = rep.lower[0][i].extreme;
            const auto& now = rep.lower[a][i].extreme;
            if (!base || !now) continue;
            if (now->radicand <= 0 ||
                compare(*now, {base->radicand / rpow(Rational(rep.bracket), base->root), base->root}) == Ordering::Less)
                rep.bounded = false;
        }
    }
    for (const auto& row : rep.lower)
        for (const auto& e : row)
            if (e.extreme && e.extreme->radicand <= 0) rep.bounded = false;
    return rep;
}

} // namespace slopefilt
