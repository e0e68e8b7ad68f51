#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slopefilt/gamma_sets.hpp"

namespace slopefilt {

inline constexpr std::uint64_t kDefaultMatrixLimit = 10000000;

/// Monomials x^a with |a| <= D in the affine chart X_0 != 0, graded, and
/// within one degree ordered by descending exponent of x_1, then x_2, ...
struct MonomialBasis {
    size_t n = 0;
    long D = 0;
    std::vector<std::vector<long>> exps;

    MonomialBasis() = default;
    MonomialBasis(size_t n_, long D_) : n(n_), D(D_) {
        for (long d = 0; d <= D; ++d) {
            std::vector<long> a(n, 0);
            fill(a, 0, d);
        }
    }
    size_t size() const { return exps.size(); }

private:
    void fill(std::vector<long>& a, size_t k, long rest) {
        if (n == 0) {
            if (rest == 0) exps.push_back(a);
            return;
        }
        if (k + 1 == n) {
            a[k] = rest;
            exps.push_back(a);
            return;
        }
        for (long e = rest; e >= 0; --e) {
            a[k] = e;
            fill(a, k + 1, rest - e);
        }
        a[k] = 0;
    }
};

inline std::vector<Rational> rational_point(const Point& p) { return p.rational_coords(); }

inline std::string point_string(const std::vector<Rational>& x) {
    std::string s = "(";
    for (size_t k = 0; k < x.size(); ++k) s += (k ? ", " : "") + x[k].get_str();
    return s + ")";
}

namespace detail {

inline void require_rational(const GroupModel& model) {
    if (!model.is_rational())
        throw Error(ErrorCode::SymbolicModelNotSpecialized, "base-locus computations need a rational model; specialize first");
}

inline void jet_size_guard(size_t n, long D, size_t points, long T, std::uint64_t limit) {
    if (D < 0 || T < 1) throw Error(ErrorCode::ValidationError, "need T >= 1 and D >= 0");
    Integer size = binomial(n + static_cast<unsigned long>(D), n) * Integer(static_cast<unsigned long>(points)) *
                   binomial(n + static_cast<unsigned long>(T) - 1, n);
    if (size > Integer(static_cast<unsigned long>(limit)))
        throw Error(ErrorCode::MatrixTooLarge, "jet matrix has " + size.get_str() + " entries, limit " + std::to_string(limit));
}

/// Powers x_k^0..x_k^D for every coordinate.
inline std::vector<std::vector<Rational>> power_table(const std::vector<Rational>& x, long D) {
    std::vector<std::vector<Rational>> t(x.size(), std::vector<Rational>(static_cast<size_t>(D) + 1));
    for (size_t k = 0; k < x.size(); ++k) {
        t[k][0] = 1;
        for (long e = 1; e <= D; ++e) t[k][static_cast<size_t>(e)] = t[k][static_cast<size_t>(e) - 1] * x[k];
    }
    return t;
}

} // namespace detail

struct JetMatrix {
    MonomialBasis basis;
    std::vector<std::vector<long>> orders;  ///< sigma with |sigma| < T, in graded order
    long T = 1;
    size_t point_count = 0;
    RatMatrix m;  ///< row (omega_index * orders.size() + sigma_index)
};

/// Hasse-normalized jet evaluation at rational points.
inline JetMatrix jet_matrix(size_t n, const std::vector<std::vector<Rational>>& omega, long T, long D,
                            std::uint64_t limit = kDefaultMatrixLimit) {
    detail::jet_size_guard(n, D, omega.size(), T, limit);
    JetMatrix j;
    j.basis = MonomialBasis(n, D);
    j.orders = MonomialBasis(n, T - 1).exps;
    j.T = T;
    j.point_count = omega.size();
    j.m = RatMatrix(0, j.basis.size());
    for (const auto& w : omega) {
        if (w.size() != n) throw Error(ErrorCode::DimensionMismatch, "point dimension differs from n");
        auto pw = detail::power_table(w, D);
        for (const auto& sigma : j.orders) {
            std::vector<Rational> row(j.basis.size(), Rational(0));
            for (size_t c = 0; c < j.basis.size(); ++c) {
                const auto& a = j.basis.exps[c];
                Rational v = 1;
                for (size_t k = 0; k < n && v != 0; ++k) {
                    if (a[k] < sigma[k]) {
                        v = 0;
                        break;
                    }
                    v *= Rational(binomial(static_cast<unsigned long>(a[k]), static_cast<unsigned long>(sigma[k]))) *
                         pw[k][static_cast<size_t>(a[k] - sigma[k])];
                }
                row[c] = v;
            }
            j.m.append_row(row);
        }
    }
    return j;
}

inline std::vector<std::vector<Rational>> rational_points(const GroupModel& model, const std::vector<Point>& omega) {
    detail::require_rational(model);
    std::vector<std::vector<Rational>> out;
    out.reserve(omega.size());
    for (const auto& p : omega) out.push_back(p.rational_coords());
    return out;
}

inline JetMatrix jet_matrix(const GroupModel& model, const std::vector<Point>& omega, long T, long D,
                            std::uint64_t limit = kDefaultMatrixLimit) {
    detail::require_rational(model);
    return jet_matrix(model.n(), rational_points(model, omega), T, D, limit);
}

struct KernelBasis {
    MonomialBasis monomials;
    long T = 1;
    size_t rank = 0;
    size_t rows = 0;
    RatMatrix basis;  ///< one polynomial per row, coefficients over `monomials`
    std::string provenance;

    size_t nullity() const { return basis.rows(); }
};

struct EvalRank {
    size_t rank = 0;
    size_t rows = 0;
    size_t cols = 0;
    bool injective = false;
    bool surjective = false;
};

namespace detail {

/// RREF of the row space, eliminating in batches so that at most about
/// 2 * cols rows are held at once.
inline RatMatrix row_space_rref(const RatMatrix& m) {
    RatMatrix acc(0, m.cols());
    RatMatrix batch = acc;
    auto flush = [&] {
        RatMatrix st = acc.stacked(batch);
        acc = rref(st);
        batch = RatMatrix(0, m.cols());
    };
    for (size_t r = 0; r < m.rows(); ++r) {
        batch.append_row(m.row(r));
        if (batch.rows() >= std::max<size_t>(m.cols(), 8)) flush();
    }
    flush();
    return acc;
}

} // namespace detail

inline KernelBasis kernel_basis(const JetMatrix& j) {
    KernelBasis k;
    k.monomials = j.basis;
    k.T = j.T;
    k.rows = j.m.rows();
    RatMatrix echelon = detail::row_space_rref(j.m);
    k.rank = echelon.rows();
    k.basis = nullspace(echelon);
    for (size_t b = 0; b < k.basis.rows(); ++b)
        for (size_t r = 0; r < j.m.rows(); ++r) {
            Rational s = 0;
            for (size_t c = 0; c < j.m.cols(); ++c)
                if (j.m(r, c) != 0) s += j.m(r, c) * k.basis(b, c);
            if (s != 0) throw CertificateViolation("kernel-reverify", static_cast<int>(b), "constraint row " + std::to_string(r));
        }
    k.provenance = std::to_string(j.point_count) + " points, T=" + std::to_string(j.T) + ", D=" + std::to_string(j.basis.D);
    return k;
}

inline KernelBasis kernel_basis(const GroupModel& model, const std::vector<Point>& omega, long T, long D,
                                std::uint64_t limit = kDefaultMatrixLimit) {
    return kernel_basis(jet_matrix(model, omega, T, D, limit));
}

inline EvalRank eval_rank(const JetMatrix& j) {
    EvalRank e;
    e.rows = j.m.rows();
    e.cols = j.m.cols();
    e.rank = detail::row_space_rref(j.m).rows();
    e.injective = e.rank == e.cols;
    e.surjective = e.rank == e.rows;
    return e;
}

inline EvalRank eval_rank(const GroupModel& model, const std::vector<Point>& omega, long T, long D,
                          std::uint64_t limit = kDefaultMatrixLimit) {
    return eval_rank(jet_matrix(model, omega, T, D, limit));
}

inline Rational evaluate(const MonomialBasis& mb, const std::vector<Rational>& coeffs, const std::vector<Rational>& x) {
    auto pw = detail::power_table(x, mb.D);
    Rational s = 0;
    for (size_t c = 0; c < mb.size(); ++c) {
        if (coeffs[c] == 0) continue;
        Rational t = coeffs[c];
        for (size_t k = 0; k < mb.n; ++k) t *= pw[k][static_cast<size_t>(mb.exps[c][k])];
        s += t;
    }
    return s;
}

/// x lies in the common zero set of the kernel (all of G when the kernel is 0).
inline bool in_base_locus(const KernelBasis& k, const std::vector<Rational>& x) {
    if (k.basis.rows() == 0) return true;
    auto pw = detail::power_table(x, k.monomials.D);
    std::vector<Rational> mono(k.monomials.size());
    for (size_t c = 0; c < mono.size(); ++c) {
        Rational t = 1;
        for (size_t i = 0; i < k.monomials.n; ++i) t *= pw[i][static_cast<size_t>(k.monomials.exps[c][i])];
        mono[c] = t;
    }
    for (size_t b = 0; b < k.basis.rows(); ++b) {
        Rational s = 0;
        for (size_t c = 0; c < mono.size(); ++c)
            if (k.basis(b, c) != 0) s += k.basis(b, c) * mono[c];
        if (s != 0) return false;
    }
    return true;
}

inline bool in_base_locus(const KernelBasis& k, const Point& x) { return in_base_locus(k, x.rational_coords()); }

/// Coefficients of P(x - g).
inline std::vector<Rational> translate_poly(const MonomialBasis& mb, const std::vector<Rational>& p,
                                            const std::vector<Rational>& g) {
    std::map<std::vector<long>, size_t> index;
    for (size_t c = 0; c < mb.size(); ++c) index[mb.exps[c]] = c;
    std::vector<Rational> out(mb.size(), Rational(0));
    for (size_t c = 0; c < mb.size(); ++c) {
        if (p[c] == 0) continue;
        const auto& a = mb.exps[c];
        std::vector<long> b(mb.n, 0);
        // Expand prod_k (x_k - g_k)^{a_k} over all beta <= alpha.
        while (true) {
            Rational coef = p[c];
            for (size_t k = 0; k < mb.n; ++k)
                coef *= Rational(binomial(static_cast<unsigned long>(a[k]), static_cast<unsigned long>(b[k]))) *
                        rpow(-g[k], a[k] - b[k]);
            out[index.at(b)] += coef;
            size_t k = 0;
            while (k < mb.n && b[k] == a[k]) b[k++] = 0;
            if (k == mb.n) break;
            ++b[k];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Probes

struct ProbeOptions {
    Rational epsilon{1, 2};
    size_t samples = 40;
    std::uint64_t seed = 1;
    long coeff_height = 5;  ///< numerators/denominators of sampled H_i coefficients
    std::uint64_t limit = kDefaultMatrixLimit;
};

struct StepVerdict {
    size_t i = 0;
    bool lower = true;   ///< sampled Gamma((1-eps)S) + H_i lies in the locus
    bool upper = true;   ///< sampled points outside Gamma(S) + H_i lie outside the locus
    bool upper_vacuous = false;  ///< H_i = G
    size_t lower_samples = 0;
    size_t upper_samples = 0;
    std::vector<std::string> witnesses;
};

struct LocusEntry {
    long T = 1;
    long D = 0;
    size_t rank = 0;
    size_t rows = 0;
    size_t nullity = 0;
    std::vector<StepVerdict> verdicts;
    std::optional<size_t> achieved;  ///< smallest i with both verdicts true
};

struct Transition {
    size_t i = 0;
    std::optional<long> lower_lost;    ///< first D with a false lower verdict
    std::optional<long> upper_gained;  ///< first D with a true upper verdict
    double reference = 0;              ///< T * frak_S_i, display only
};

struct LocusReport {
    std::vector<LocusEntry> entries;
    std::vector<Transition> transitions;
    bool achieved_monotone = true;
};

namespace detail {

/// Linear functionals vanishing on span H.
inline RatMatrix annihilator(const Subgroup& h, size_t n) {
    RatMatrix b = constant_part(h.span_basis);
    if (b.rows() == 0) return RatMatrix::identity(n);
    return nullspace(b);
}

inline std::vector<Rational> apply_functionals(const RatMatrix& f, const std::vector<Rational>& x) {
    std::vector<Rational> out(f.rows(), Rational(0));
    for (size_t r = 0; r < f.rows(); ++r)
        for (size_t c = 0; c < f.cols(); ++c) out[r] += f(r, c) * x[c];
    return out;
}

struct ProbePlan {
    std::vector<std::vector<Rational>> omega;  ///< Gamma(S)
    std::vector<std::vector<std::vector<Rational>>> lower, upper;
    std::vector<bool> vacuous;
};

inline ProbePlan make_plan(const GroupModel& model, const Chain& chain, const ProbeOptions& opt) {
    require_rational(model);
    if (!(opt.epsilon > 0 && opt.epsilon < 1)) throw Error(ErrorCode::ValidationError, "epsilon must lie in (0, 1)");
    ProbePlan plan;
    const size_t n = model.n();
    plan.omega = rational_points(model, enumerate_gamma(model, 1, opt.limit).points);
    auto inner = rational_points(model, enumerate_gamma(model, 1 - opt.epsilon, opt.limit).points);
    auto outer = rational_points(model, enumerate_gamma(model, 2, opt.limit).points);
    Rational box = 1;
    for (const auto& w : plan.omega)
        for (const auto& x : w) box = std::max(box, Rational(abs(x) + 1));
    Integer bz;
    mpz_cdiv_q(bz.get_mpz_t(), box.get_num_mpz_t(), box.get_den_mpz_t());
    const long B = bz.get_si();

    for (size_t i = 0; i <= chain.r(); ++i) {
        SeededRng rng(opt.seed * 1000003ULL + i);
        const Subgroup& h = chain.nodes[i].subgroup;
        RatMatrix hb = constant_part(h.span_basis);
        std::vector<std::vector<Rational>> low, up;
        for (size_t s = 0; s < opt.samples; ++s) {
            auto x = inner[static_cast<size_t>(rng.uniform(0, static_cast<long>(inner.size()) - 1))];
            for (size_t b = 0; b < hb.rows(); ++b) {
                Rational c = rng.rational(opt.coeff_height);
                for (size_t k = 0; k < n; ++k) x[k] += c * hb(b, k);
            }
            low.push_back(std::move(x));
        }
        const bool full = h.dim == n;
        plan.vacuous.push_back(full);
        if (!full) {
            RatMatrix f = annihilator(h, n);
            std::set<std::vector<Rational>> classes;
            for (const auto& w : plan.omega) classes.insert(apply_functionals(f, w));
            auto outside = [&](const std::vector<Rational>& x) { return !classes.count(apply_functionals(f, x)); };
            std::vector<std::vector<Rational>> pool;
            for (const auto& w : outer)
                if (outside(w)) pool.push_back(w);
            for (size_t s = 0; s < opt.samples / 2 && !pool.empty(); ++s) {
                size_t k = static_cast<size_t>(rng.uniform(0, static_cast<long>(pool.size()) - 1));
                up.push_back(pool[k]);
            }
            size_t attempts = 0;
            while (up.size() < opt.samples && attempts < 20 * opt.samples + 20) {
                ++attempts;
                std::vector<Rational> x(n);
                for (auto& c : x) {
                    c = Rational(rng.uniform(-B, B)) + Rational(rng.uniform(0, opt.coeff_height - 1), opt.coeff_height);
                    c.canonicalize();
                }
                if (outside(x)) up.push_back(std::move(x));
            }
            if (up.empty())
                throw Error(ErrorCode::SamplingExhausted, "no sample outside Gamma(S) + H_" + std::to_string(i));
        }
        plan.lower.push_back(std::move(low));
        plan.upper.push_back(std::move(up));
    }
    return plan;
}

inline LocusEntry run_plan(const GroupModel& model, const ProbePlan& plan, long T, long D, const ProbeOptions& opt) {
    auto jm = jet_matrix(model.n(), plan.omega, T, D, opt.limit);
    KernelBasis k = kernel_basis(jm);
    LocusEntry e;
    e.T = T;
    e.D = D;
    e.rank = k.rank;
    e.rows = k.rows;
    e.nullity = k.nullity();
    for (size_t i = 0; i < plan.lower.size(); ++i) {
        StepVerdict v;
        v.i = i;
        v.upper_vacuous = plan.vacuous[i];
        v.lower_samples = plan.lower[i].size();
        v.upper_samples = plan.upper[i].size();
        for (const auto& x : plan.lower[i])
            if (!in_base_locus(k, x)) {
                if (v.lower) v.witnesses.push_back("lower " + point_string(x));
                v.lower = false;
            }
        for (const auto& x : plan.upper[i])
            if (in_base_locus(k, x)) {
                if (v.upper) v.witnesses.push_back("upper " + point_string(x));
                v.upper = false;
            }
        if (!e.achieved && v.lower && v.upper) e.achieved = i;
        e.verdicts.push_back(std::move(v));
    }
    return e;
}

} // namespace detail

/// Lower and upper locus tests for every chain index at one (T, D).
inline LocusEntry locus_probe(const GroupModel& model, const Chain& chain, long T, long D, const ProbeOptions& opt = {}) {
    return detail::run_plan(model, detail::make_plan(model, chain, opt), T, D, opt);
}

inline LocusReport threshold_sweep(const GroupModel& model, const Chain& chain, long T, long d_min, long d_max,
                                   const ProbeOptions& opt = {}) {
    if (d_min > d_max) throw Error(ErrorCode::ValidationError, "empty degree range");
    auto plan = detail::make_plan(model, chain, opt);
    LocusReport rep;
    for (long D = d_min; D <= d_max; ++D) rep.entries.push_back(detail::run_plan(model, plan, T, D, opt));
    for (size_t k = 1; k < rep.entries.size(); ++k) {
        const auto& a = rep.entries[k - 1];
        const auto& b = rep.entries[k];
        if (b.nullity < a.nullity) throw CertificateViolation("locus-monotone", static_cast<int>(b.D), "nullity decreased");
        for (size_t i = 0; i < a.verdicts.size(); ++i)
            if ((b.verdicts[i].lower && !a.verdicts[i].lower) || (a.verdicts[i].upper && !b.verdicts[i].upper))
                throw CertificateViolation("locus-monotone", static_cast<int>(i), "verdict flipped back at D=" + std::to_string(b.D));
        if (a.achieved && b.achieved && *b.achieved > *a.achieved) rep.achieved_monotone = false;
        if (a.achieved && !b.achieved) rep.achieved_monotone = false;
    }
    for (size_t i = 0; i <= chain.r(); ++i) {
        Transition t;
        t.i = i;
        for (const auto& e : rep.entries) {
            if (!t.lower_lost && !e.verdicts[i].lower) t.lower_lost = e.D;
            if (!t.upper_gained && e.verdicts[i].upper) t.upper_gained = e.D;
        }
        t.reference = i < chain.r() ? static_cast<double>(T) * frak_S(model, chain, i).approx() : 0.0;
        rep.transitions.push_back(t);
    }
    return rep;
}

} // namespace slopefilt
