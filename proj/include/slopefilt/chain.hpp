#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "slopefilt/group_model.hpp"

namespace slopefilt {

/// sum_j e_j log S_j, kept as the integer vector e.
struct PhiValue {
    std::vector<long> e;

    PhiValue() = default;
    explicit PhiValue(std::vector<long> exps) : e(std::move(exps)) {}
    static PhiValue zero(size_t l) { return PhiValue(std::vector<long>(l, 0)); }

    size_t size() const { return e.size(); }
    PhiValue times(long k) const {
        PhiValue r = *this;
        for (auto& x : r.e) x *= k;
        return r;
    }
    friend PhiValue operator+(PhiValue a, const PhiValue& b) {
        check_len(a, b);
        for (size_t j = 0; j < a.e.size(); ++j) a.e[j] += b.e[j];
        return a;
    }
    friend PhiValue operator-(PhiValue a, const PhiValue& b) {
        check_len(a, b);
        for (size_t j = 0; j < a.e.size(); ++j) a.e[j] -= b.e[j];
        return a;
    }
    friend bool operator==(const PhiValue& a, const PhiValue& b) { return a.e == b.e; }

private:
    static void check_len(const PhiValue& a, const PhiValue& b) {
        if (a.e.size() != b.e.size()) throw Error(ErrorCode::DimensionMismatch, "phi length mismatch");
    }
};

struct SlopeValue {
    PhiValue num;
    long den = 1;

    friend bool operator==(const SlopeValue& a, const SlopeValue& b) { return a.num == b.num && a.den == b.den; }
};

enum class Ordering { Less, Equal, Greater };

inline std::string to_string(Ordering o) {
    switch (o) {
    case Ordering::Less: return "Less";
    case Ordering::Equal: return "Equal";
    case Ordering::Greater: return "Greater";
    }
    return "?";
}

/// Sign of sum_j e_j log S_j, decided by comparing prod S_j^{e_j} with 1.
inline int log_sign(const std::vector<Rational>& scales, const std::vector<long>& e) {
    Rational p = power_product(scales, e);
    return p > 1 ? 1 : (p < 1 ? -1 : 0);
}

inline Ordering compare_slopes(const std::vector<Rational>& scales, const SlopeValue& a, const SlopeValue& b) {
    if (a.den < 1 || b.den < 1) throw Error(ErrorCode::ValidationError, "slope denominator must be >= 1");
    std::vector<long> d(a.num.size());
    for (size_t j = 0; j < d.size(); ++j) d[j] = b.den * a.num.e[j] - a.den * b.num.e[j];
    int s = log_sign(scales, d);
    return s > 0 ? Ordering::Greater : (s < 0 ? Ordering::Less : Ordering::Equal);
}

inline Ordering compare_slopes(const GroupModel& model, const SlopeValue& a, const SlopeValue& b) {
    return compare_slopes(model.scales(), a, b);
}

/// radicand^(1/root).
struct RootedRational {
    Rational radicand = 1;
    long root = 1;

    double approx() const { return std::exp(std::log(radicand.get_d()) / static_cast<double>(root)); }
    RootedRational pow(long alpha) const { return {rpow(radicand, alpha), root}; }
};

inline Ordering compare(const RootedRational& a, const RootedRational& b) {
    Rational x = rpow(a.radicand, b.root), y = rpow(b.radicand, a.root);
    return x < y ? Ordering::Less : (x > y ? Ordering::Greater : Ordering::Equal);
}

inline bool operator==(const RootedRational& a, const RootedRational& b) { return compare(a, b) == Ordering::Equal; }

struct ChainNode {
    Subgroup subgroup;
    size_t dim = 0;
    PhiValue phi;
    RankProfile profile;
};

struct ChainStep {
    SlopeValue slope;
    RootedRational frak;
};

struct Chain {
    std::vector<ChainNode> nodes;  ///< H_0 .. H_r
    std::vector<ChainStep> steps;  ///< step i joins H_i and H_{i+1}
    std::string method;

    size_t r() const { return nodes.empty() ? 0 : nodes.size() - 1; }
};

/// phi from the rank jumps; cross-checked against the telescoped form
/// sum_j rk(Gamma_j cap H) log(S_j / S_{j+1}) with S_{l+1} = 1.
inline PhiValue phi_from_profile(const GroupModel& model, const RankProfile& p) {
    const size_t l = model.l();
    PhiValue v = PhiValue::zero(l);
    for (size_t j = 0; j < l; ++j) v.e[j] = p.gamma_ranks[j] - (j ? p.gamma_ranks[j - 1] : 0);
    Rational telescoped = 1;
    for (size_t j = 0; j < l; ++j) {
        Rational next = j + 1 < l ? model.scales()[j + 1] : Rational(1);
        telescoped *= rpow(model.scales()[j] / next, p.gamma_ranks[j]);
    }
    if (telescoped != power_product(model.scales(), v.e))
        throw CertificateViolation("phi-dual-route", 0, "rank-jump and telescoped forms disagree");
    return v;
}

inline PhiValue phi(const GroupModel& model, const Subgroup& h) { return phi_from_profile(model, rank_profile(model, h)); }

inline SlopeValue slope_between(const ChainNode& lo, const ChainNode& hi) {
    return {hi.phi - lo.phi, static_cast<long>(hi.dim - lo.dim)};
}

/// Rank jumps of (Gamma_j cap H') / (Gamma_j cap H'') for j = 1..l.
inline std::vector<long> double_quotient_exponents(const GroupModel& model, const Subgroup& hp, const Subgroup& hdp) {
    const size_t l = model.l();
    std::vector<long> e(l);
    long prev = 0;
    for (size_t j = 1; j <= l; ++j) {
        IntMatrix pj = prefix_lattice(l, j);
        long a = static_cast<long>(lattice_intersect(hp.coeff_lattice.basis, pj).rows());
        long b = static_cast<long>(lattice_intersect(hdp.coeff_lattice.basis, pj).rows());
        e[j - 1] = (a - b) - prev;
        prev = a - b;
    }
    return e;
}

/// S-frak_i, computed from the double-quotient rank jumps and checked against
/// the exponential of the step slope.
inline RootedRational frak_S(const GroupModel& model, const Chain& chain, size_t i) {
    if (i + 1 >= chain.nodes.size())
        throw Error(ErrorCode::IndexOutOfRange, "step index " + std::to_string(i) + " outside 0.." +
                                                     std::to_string(static_cast<long>(chain.r()) - 1));
    const auto& lo = chain.nodes[i];
    const auto& hi = chain.nodes[i + 1];
    auto e = double_quotient_exponents(model, hi.subgroup, lo.subgroup);
    RootedRational direct{power_product(model.scales(), e), static_cast<long>(hi.dim - lo.dim)};
    SlopeValue s = slope_between(lo, hi);
    RootedRational via_slope{power_product(model.scales(), s.num.e), s.den};
    if (!(direct == via_slope)) throw CertificateViolation("frak-S-formulas", i, "definition and slope form disagree");
    return direct;
}

inline ChainNode make_node(const GroupModel& model, Subgroup h) {
    ChainNode node;
    node.profile = rank_profile(model, h);
    node.phi = phi_from_profile(model, node.profile);
    node.dim = h.dim;
    node.subgroup = std::move(h);
    return node;
}

inline void fill_steps(const GroupModel& model, Chain& chain) {
    chain.steps.clear();
    for (size_t i = 0; i + 1 < chain.nodes.size(); ++i)
        chain.steps.push_back({slope_between(chain.nodes[i], chain.nodes[i + 1]), frak_S(model, chain, i)});
}

/// Closed form for rational models: the segment over [d, d+1] has slope
/// log S_j for the (d+1)-th rank jump j of the prefix flag (0 past rk Gamma);
/// vertices sit where that slope strictly drops.
inline Chain build_chain_fast(const GroupModel& model) {
    if (!model.is_rational())
        throw Error(ErrorCode::SymbolicModelNotSpecialized, "fast path requires a rational model");
    const size_t n = model.n(), l = model.l();
    auto r = prefix_ranks(model);
    const long rk = l ? r[l - 1] : 0;
    auto seg_scale = [&](size_t d) -> Rational {
        if (static_cast<long>(d) >= rk) return 1;
        for (size_t j = 0; j < l; ++j)
            if (r[j] >= static_cast<long>(d) + 1) return model.scales()[j];
        return 1;
    };
    Chain chain;
    chain.method = "fast";
    chain.nodes.push_back(make_node(model, zero_subgroup(model)));
    for (size_t d = 1; d < n; ++d) {
        if (!(seg_scale(d - 1) > seg_scale(d))) continue;
        size_t jmax = 0;
        for (size_t j = 1; j <= l; ++j)
            if (r[j - 1] == static_cast<long>(d)) jmax = j;
        Subgroup h = closure(model, Sublattice(prefix_lattice(l, jmax)));
        if (h.dim != d) throw CertificateViolation("fast-path-vertex", chain.nodes.size(), describe(h));
        chain.nodes.push_back(make_node(model, std::move(h)));
    }
    chain.nodes.push_back(make_node(model, full_subgroup(model)));
    fill_steps(model, chain);
    return chain;
}

inline Subgroup subgroup_sum(const GroupModel& model, const Subgroup& a, const Subgroup& b) {
    return span_subgroup(model, a.span_basis.stacked(b.span_basis));
}

namespace detail {

/// Greedy maximal-slope chain over a finite candidate family, for a functional
/// given as exponents over `scales`.
inline std::vector<Subgroup> greedy_chain(const GroupModel& model, std::vector<Subgroup> candidates,
                                          const std::vector<Rational>& scales,
                                          const std::function<PhiValue(const Subgroup&)>& fn) {
    auto add_unique = [](std::vector<Subgroup>& set, Subgroup h) {
        for (const auto& x : set)
            if (same_subgroup(x, h)) return;
        set.push_back(std::move(h));
    };
    std::vector<Subgroup> pool;
    for (auto& c : candidates) add_unique(pool, std::move(c));
    add_unique(pool, full_subgroup(model));

    std::vector<Subgroup> out{zero_subgroup(model)};
    while (out.back().dim < model.n()) {
        const Subgroup& h = out.back();
        PhiValue fh = fn(h);
        std::vector<Subgroup> step_pool;
        for (const auto& k : pool) {
            if (k.dim > h.dim) add_unique(step_pool, k);
            if (!contains(k, h)) {
                Subgroup s = subgroup_sum(model, k, h);
                if (s.dim > h.dim) add_unique(step_pool, std::move(s));
            }
        }
        std::optional<size_t> best;
        SlopeValue best_slope;
        bool ambiguous = false;
        for (size_t c = 0; c < step_pool.size(); ++c) {
            const auto& k = step_pool[c];
            SlopeValue s{fn(k) - fh, static_cast<long>(k.dim - h.dim)};
            if (!best) {
                best = c;
                best_slope = s;
                continue;
            }
            Ordering o = compare_slopes(scales, s, best_slope);
            if (o == Ordering::Greater || (o == Ordering::Equal && k.dim > step_pool[*best].dim)) {
                best = c;
                best_slope = s;
                ambiguous = false;
            } else if (o == Ordering::Equal && k.dim == step_pool[*best].dim) {
                ambiguous = true;
            }
        }
        if (ambiguous)
            throw Error(ErrorCode::AmbiguousCandidates,
                        "two distinct maximal-dimension slope maximizers at step " + std::to_string(out.size() - 1));
        if (!contains(step_pool[*best], h))
            throw CertificateViolation("greedy-nesting", out.size() - 1, describe(step_pool[*best]));
        out.push_back(step_pool[*best]);
    }
    return out;
}

} // namespace detail

/// The prefix closures closure(P_j), j = 0..l.
inline std::vector<Subgroup> prefix_closures(const GroupModel& model) {
    std::vector<Subgroup> out;
    for (size_t j = 0; j <= model.l(); ++j) out.push_back(closure(model, Sublattice(prefix_lattice(model.l(), j))));
    return out;
}

inline Chain build_chain_greedy(const GroupModel& model, const std::vector<Subgroup>& extra = {}) {
    auto cands = prefix_closures(model);
    cands.insert(cands.end(), extra.begin(), extra.end());
    auto subs = detail::greedy_chain(model, std::move(cands), model.scales(),
                                     [&](const Subgroup& h) { return phi(model, h); });
    Chain chain;
    chain.method = "greedy";
    for (auto& h : subs) chain.nodes.push_back(make_node(model, std::move(h)));
    fill_steps(model, chain);
    return chain;
}

enum class ChainPath { Auto, Fast, Greedy };

inline Chain build_chain(const GroupModel& model, ChainPath path = ChainPath::Auto,
                         const std::vector<Subgroup>& extra = {}) {
    if (path == ChainPath::Fast || (path == ChainPath::Auto && model.is_rational() && extra.empty()))
        return build_chain_fast(model);
    return build_chain_greedy(model, extra);
}

inline bool same_chain(const Chain& a, const Chain& b) {
    if (a.nodes.size() != b.nodes.size()) return false;
    for (size_t i = 0; i < a.nodes.size(); ++i)
        if (!same_subgroup(a.nodes[i].subgroup, b.nodes[i].subgroup)) return false;
    return true;
}

/// N_{H',H''}(S) = prod_j S_j^{double rank jump}.
inline Rational n_formula(const GroupModel& model, const Subgroup& hp, const Subgroup& hdp) {
    if (!hp.coeff_lattice.contains(hdp.coeff_lattice))
        throw Error(ErrorCode::NotNested, "H'' is not contained in H'");
    return power_product(model.scales(), double_quotient_exponents(model, hp, hdp));
}

struct MuReport {
    Rational mu;
    Rational mu_star;
    std::vector<Rational> mu_list;
    std::vector<SlopeValue> slopes;  ///< equal-scale chain slopes, in units of log S
    bool well_distributed = false;
    Chain chain;
};

/// mu, mu* and mu_i from the equal-scale chain (every S_j = 2).
inline MuReport mu_exponents(const GroupModel& model) {
    GroupModel eq = model.with_scales(std::vector<Rational>(model.l(), Rational(2)));
    MuReport rep;
    rep.chain = build_chain(eq);
    const auto& nodes = rep.chain.nodes;
    auto total = [](const RankProfile& p) { return p.gamma_ranks.empty() ? 0L : p.gamma_ranks.back(); };
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
        long drk = total(nodes[i + 1].profile) - total(nodes[i].profile);
        long ddim = static_cast<long>(nodes[i + 1].dim - nodes[i].dim);
        Rational mu_i(drk, ddim);
        mu_i.canonicalize();
        const auto& s = rep.chain.steps[i].slope;
        long esum = 0;
        for (auto x : s.num.e) esum += x;
        Rational from_slope(esum, s.den);
        from_slope.canonicalize();
        if (from_slope != mu_i) throw CertificateViolation("mu-slope", i, "rank-jump ratio differs from slope");
        rep.mu_list.push_back(mu_i);
        rep.slopes.push_back(s);
    }
    rep.mu_star = rep.mu_list.front();
    rep.mu = rep.mu_list.back();
    rep.well_distributed = rep.chain.r() == 1;
    return rep;
}

struct PhiST {
    PhiValue s_part;
    std::vector<long> t_part;  ///< e'_j = dim(W_j cap H) - dim(W_{j-1} cap H)
};

inline PhiST phi_st(const GroupModel& model, const Subgroup& h, const PolyMatrix& w, const std::vector<Rational>& t_orders) {
    if (w.rows() > 0 && w.cols() != model.n())
        throw Error(ErrorCode::DimensionMismatch, "derivation flag rows must have n columns");
    if (t_orders.size() != w.rows())
        throw Error(ErrorCode::DimensionMismatch, "one order T_j per derivation flag row required");
    for (size_t j = 0; j < t_orders.size(); ++j)
        if (t_orders[j] < 1 || (j && t_orders[j] > t_orders[j - 1]))
            throw Error(ErrorCode::ValidationError, "orders must satisfy T_1 >= ... >= T_d >= 1");
    PhiST out;
    out.s_part = phi(model, h);
    long prev = 0;
    PolyMatrix wj(0, model.n());
    for (size_t j = 0; j < w.rows(); ++j) {
        wj.append_row(w.row(j));
        long dw = static_cast<long>(field_rank(wj));
        long sum = static_cast<long>(field_rank(wj.stacked(h.span_basis.rows() ? h.span_basis : PolyMatrix(0, model.n()))));
        long meet = dw + static_cast<long>(h.dim) - sum;
        out.t_part.push_back(meet - prev);
        prev = meet;
    }
    return out;
}

/// Experimental: greedy chain for the two-flag functional over the same
/// candidate family. Not certified.
inline Chain build_chain_st_experimental(const GroupModel& model, const PolyMatrix& w,
                                         const std::vector<Rational>& t_orders) {
    std::vector<Rational> scales = model.scales();
    scales.insert(scales.end(), t_orders.begin(), t_orders.end());
    auto fn = [&](const Subgroup& h) {
        auto v = phi_st(model, h, w, t_orders);
        PhiValue out = v.s_part;
        out.e.insert(out.e.end(), v.t_part.begin(), v.t_part.end());
        return out;
    };
    auto subs = detail::greedy_chain(model, prefix_closures(model), scales, fn);
    Chain chain;
    chain.method = "greedy-st-experimental";
    for (auto& h : subs) {
        ChainNode node = make_node(model, std::move(h));
        node.phi = fn(node.subgroup);
        chain.nodes.push_back(std::move(node));
    }
    for (size_t i = 0; i + 1 < chain.nodes.size(); ++i) {
        SlopeValue s = slope_between(chain.nodes[i], chain.nodes[i + 1]);
        chain.steps.push_back({s, {power_product(scales, s.num.e), s.den}});
    }
    return chain;
}

} // namespace slopefilt
