#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "slopefilt/lattice.hpp"
#include "slopefilt/matrix.hpp"
#include "slopefilt/poly.hpp"

namespace slopefilt {

/// A point of the vector group G_a^n.
struct Point {
    std::vector<SymbolicScalar> coords;

    size_t size() const { return coords.size(); }
    bool is_rational() const {
        return std::all_of(coords.begin(), coords.end(), [](const auto& s) { return s.is_rational(); });
    }
    std::vector<Rational> rational_coords() const {
        std::vector<Rational> out;
        out.reserve(coords.size());
        for (const auto& s : coords) {
            if (!s.is_rational()) throw Error(ErrorCode::SymbolicModelNotSpecialized, "point has symbolic coordinates");
            out.push_back(s.const_part);
        }
        return out;
    }
    static Point from_rationals(const std::vector<Rational>& xs) {
        Point p;
        for (const auto& x : xs) p.coords.emplace_back(x);
        return p;
    }

    friend Point operator+(const Point& a, const Point& b) {
        Point r = a;
        for (size_t i = 0; i < r.size(); ++i) r.coords[i] = r.coords[i] + b.coords[i];
        return r;
    }
    friend Point operator-(const Point& a, const Point& b) {
        Point r = a;
        for (size_t i = 0; i < r.size(); ++i) r.coords[i] = r.coords[i] - b.coords[i];
        return r;
    }
    friend bool operator==(const Point& a, const Point& b) { return a.coords == b.coords; }
    friend bool operator<(const Point& a, const Point& b) {
        return std::lexicographical_compare(a.coords.begin(), a.coords.end(), b.coords.begin(), b.coords.end());
    }
};

/// Sublattice of Z^l kept in Hermite normal form.
struct Sublattice {
    IntMatrix basis;

    Sublattice() = default;
    explicit Sublattice(IntMatrix b) : basis(hnf(std::move(b))) {}
    static Sublattice full(size_t l) { return Sublattice(IntMatrix::identity(l)); }
    static Sublattice zero(size_t l) { return Sublattice(IntMatrix(0, l)); }

    size_t rank() const { return basis.rows(); }
    size_t ambient() const { return basis.cols(); }
    bool contains(const std::vector<Integer>& v) const { return in_lattice(v, basis); }
    bool contains(const Sublattice& o) const { return lattice_contains(basis, o.basis); }

    friend bool operator==(const Sublattice& a, const Sublattice& b) { return a.basis == b.basis; }
};

/// Connected algebraic subgroup of G_a^n (a linear subspace), together with
/// its coefficient lattice iota^{-1}(H), which always contains iota^{-1}(0).
struct Subgroup {
    size_t dim = 0;
    Sublattice coeff_lattice;
    PolyMatrix span_basis;  ///< rows span H over the symbol fraction field
};

struct RankProfile {
    size_t dim = 0;
    std::vector<long> gamma_ranks;  ///< entry j-1 is rk(Gamma_j cap H)

    friend bool operator==(const RankProfile& a, const RankProfile& b) {
        return a.dim == b.dim && a.gamma_ranks == b.gamma_ranks;
    }
    friend bool operator<(const RankProfile& a, const RankProfile& b) {
        if (a.dim != b.dim) return a.dim < b.dim;
        return a.gamma_ranks < b.gamma_ranks;
    }
};

struct ModelConfig {
    size_t n = 0;
    std::vector<std::string> symbols;
    std::vector<std::vector<SymbolicScalar>> generators;
    std::vector<Rational> scales;
};

/// G = G_a^n with generators gamma_1..gamma_l sorted so that S_1 >= ... >= S_l.
class GroupModel {
public:
    size_t n() const { return n_; }
    size_t m() const { return symbols_.size(); }
    size_t l() const { return generators_.size(); }
    bool is_rational() const { return m() == 0; }

    const std::vector<std::string>& symbols() const { return symbols_; }
    const std::vector<Point>& generators() const { return generators_; }
    const std::vector<Rational>& scales() const { return scales_; }
    /// permutation()[k] is the 0-based input index of sorted generator k.
    const std::vector<size_t>& permutation() const { return permutation_; }
    const std::map<std::string, std::string>& provenance() const { return provenance_; }
    const Sublattice& kernel() const { return kernel_; }

    /// Rational components of gamma_j: coordinate c contributes m+1 entries
    /// (constant, t_1..t_m).
    const RatMatrix& components() const { return components_; }

    Point image(const std::vector<Integer>& v) const {
        Point p;
        p.coords.assign(n_, SymbolicScalar());
        for (size_t j = 0; j < l(); ++j) {
            if (v[j] == 0) continue;
            for (size_t c = 0; c < n_; ++c) p.coords[c] = p.coords[c] + generators_[j].coords[c].scaled(Rational(v[j]));
        }
        return p;
    }

    std::vector<Poly> image_poly(const std::vector<Integer>& v) const {
        std::vector<Poly> out(n_);
        auto p = image(v);
        for (size_t c = 0; c < n_; ++c) out[c] = p.coords[c].to_poly();
        return out;
    }

    /// Same generators with every scale replaced by S_j^alpha.
    GroupModel with_scales(std::vector<Rational> scales) const {
        GroupModel g = *this;
        g.scales_ = std::move(scales);
        return g;
    }

    friend GroupModel build_model(const ModelConfig& config);
    friend GroupModel specialize(const GroupModel& model, const std::map<std::string, Rational>& assignment,
                                 std::uint64_t seed);

private:
    void finalize() {
        const size_t width = n_ * (m() + 1);
        components_ = RatMatrix(l(), width);
        for (size_t j = 0; j < l(); ++j)
            for (size_t c = 0; c < n_; ++c) {
                const auto& s = generators_[j].coords[c];
                components_(j, c * (m() + 1)) = s.const_part;
                for (const auto& [t, q] : s.symbol_coeffs) components_(j, c * (m() + 1) + 1 + t) = q;
            }
        kernel_ = Sublattice(integer_kernel(components_.transpose()));
        if (l() == 0) kernel_ = Sublattice::zero(0);
    }

    size_t n_ = 1;
    std::vector<std::string> symbols_;
    std::vector<Point> generators_;
    std::vector<Rational> scales_;
    std::vector<size_t> permutation_;
    std::map<std::string, std::string> provenance_;
    RatMatrix components_;
    Sublattice kernel_;
};

inline GroupModel build_model(const ModelConfig& config) {
    if (config.n < 1) throw Error(ErrorCode::DimensionMismatch, "ambient dimension n must be >= 1");
    if (config.scales.size() != config.generators.size())
        throw Error(ErrorCode::DimensionMismatch, "one scale per generator required");
    std::set<std::string> seen;
    for (const auto& s : config.symbols)
        if (!seen.insert(s).second) throw Error(ErrorCode::DuplicateSymbol, "symbol '" + s + "' declared twice");
    for (size_t j = 0; j < config.generators.size(); ++j) {
        if (config.generators[j].size() != config.n)
            throw Error(ErrorCode::DimensionMismatch,
                        "generator " + std::to_string(j + 1) + " has length " +
                            std::to_string(config.generators[j].size()) + ", expected " + std::to_string(config.n));
        for (const auto& s : config.generators[j])
            for (const auto& [t, q] : s.symbol_coeffs)
                if (t >= config.symbols.size())
                    throw Error(ErrorCode::UnknownSymbol, "symbol index out of range in generator " + std::to_string(j + 1));
        if (config.scales[j] < 1)
            throw Error(ErrorCode::InvalidScale, "scale S_" + std::to_string(j + 1) + " = " + config.scales[j].get_str() + " < 1");
    }
    GroupModel g;
    g.n_ = config.n;
    g.symbols_ = config.symbols;
    std::vector<size_t> perm(config.generators.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](size_t a, size_t b) { return config.scales[a] > config.scales[b]; });
    for (auto j : perm) {
        Point p;
        p.coords = config.generators[j];
        for (auto& s : p.coords) s.normalize();
        g.generators_.push_back(std::move(p));
        g.scales_.push_back(config.scales[j]);
    }
    g.permutation_ = perm;
    g.finalize();
    return g;
}

inline Sublattice kernel_lattice(const GroupModel& model) { return model.kernel(); }

/// Prefix lattice P_j = Z^j x 0^{l-j}.
inline IntMatrix prefix_lattice(size_t l, size_t j) {
    IntMatrix p(j, l);
    for (size_t i = 0; i < j; ++i) p(i, i) = 1;
    return p;
}

/// The subgroup spanned (over the symbol field) by the given rows, with its
/// coefficient lattice {v : iota(v) in span}.
inline Subgroup span_subgroup(const GroupModel& model, const PolyMatrix& rows) {
    const size_t n = model.n(), l = model.l();
    Subgroup h;
    PolyMatrix input = rows.rows() == 0 ? PolyMatrix(0, n) : rows;
    if (input.cols() != n) throw Error(ErrorCode::DimensionMismatch, "span rows must have n columns");
    PolyMatrix annihilator;
    if (is_constant(input)) {
        RatMatrix q = rref(constant_part(input));
        h.dim = q.rows();
        h.span_basis = to_poly_matrix(q);
        annihilator = to_poly_matrix(nullspace(q));
    } else {
        auto ech = bareiss(input);
        h.dim = ech.pivot_cols.size();
        h.span_basis = ech.echelon;
        annihilator = poly_nullspace(ech.echelon);
    }
    if (annihilator.rows() == 0 || l == 0) {
        h.coeff_lattice = Sublattice::full(l);
        return h;
    }
    // iota(v) . w = sum_j v_j (gamma_j . w) must vanish as a polynomial: one
    // rational equation per (annihilator vector, monomial).
    std::vector<std::vector<Rational>> eqs;
    for (size_t a = 0; a < annihilator.rows(); ++a) {
        std::vector<Poly> dots(l);
        std::set<Monomial> monos;
        for (size_t j = 0; j < l; ++j) {
            for (size_t c = 0; c < n; ++c)
                dots[j] += model.generators()[j].coords[c].to_poly() * annihilator(a, c);
            for (const auto& [mono, q] : dots[j].terms()) monos.insert(mono);
        }
        for (const auto& mono : monos) {
            std::vector<Rational> row(l);
            for (size_t j = 0; j < l; ++j) row[j] = dots[j].coefficient(mono);
            eqs.push_back(std::move(row));
        }
    }
    RatMatrix sys(0, l);
    for (auto& e : eqs) sys.append_row(e);
    h.coeff_lattice = Sublattice(integer_kernel(sys));
    return h;
}

inline Subgroup zero_subgroup(const GroupModel& model) {
    Subgroup h;
    h.dim = 0;
    h.coeff_lattice = model.kernel();
    h.span_basis = PolyMatrix(0, model.n());
    return h;
}

inline Subgroup full_subgroup(const GroupModel& model) {
    Subgroup h;
    h.dim = model.n();
    h.coeff_lattice = Sublattice::full(model.l());
    h.span_basis = PolyMatrix::identity(model.n());
    return h;
}

/// Smallest connected algebraic subgroup containing iota(lambda).
inline Subgroup closure(const GroupModel& model, const Sublattice& lambda) {
    if (lambda.ambient() != model.l() && lambda.rank() > 0)
        throw Error(ErrorCode::DimensionMismatch, "sublattice must have l columns");
    if (lambda.rank() == 0) return zero_subgroup(model);
    PolyMatrix rows(0, model.n());
    for (size_t r = 0; r < lambda.rank(); ++r) rows.append_row(model.image_poly(lambda.basis.row(r)));
    return span_subgroup(model, rows);
}

/// B subset of A, tested on spans.
inline bool contains(const Subgroup& a, const Subgroup& b) {
    if (b.dim > a.dim) return false;
    if (b.dim == 0) return true;
    return field_rank(a.span_basis.stacked(b.span_basis)) == a.dim;
}

inline bool same_subgroup(const Subgroup& a, const Subgroup& b) {
    return a.dim == b.dim && a.coeff_lattice == b.coeff_lattice && contains(a, b);
}

inline RankProfile rank_profile(const GroupModel& model, const Subgroup& h) {
    RankProfile p;
    p.dim = h.dim;
    const size_t l = model.l();
    p.gamma_ranks.resize(l);
    for (size_t j = 1; j <= l; ++j) {
        IntMatrix pj = prefix_lattice(l, j);
        long a = static_cast<long>(lattice_intersect(h.coeff_lattice.basis, pj).rows());
        long k = static_cast<long>(lattice_intersect(model.kernel().basis, pj).rows());
        p.gamma_ranks[j - 1] = a - k;
    }
    return p;
}

/// rk(Gamma_j) for j = 1..l.
inline std::vector<long> prefix_ranks(const GroupModel& model) {
    return rank_profile(model, full_subgroup(model)).gamma_ranks;
}

/// Substitutes every symbol; an empty assignment on a symbolic model draws
/// large-height rationals from `seed`.
inline GroupModel specialize(const GroupModel& model, const std::map<std::string, Rational>& assignment,
                             std::uint64_t seed) {
    std::vector<Rational> values(model.m());
    std::map<std::string, std::string> prov = model.provenance_;
    if (assignment.empty() && model.m() > 0) {
        SeededRng rng(seed);
        for (size_t t = 0; t < model.m(); ++t) {
            Rational q(Integer(static_cast<long>(rng.uniform(100000007, 999999937))),
                       Integer(static_cast<long>(rng.uniform(1000003, 9999991))));
            q.canonicalize();
            values[t] = q;
        }
        prov["specialize.seed"] = std::to_string(seed);
    } else {
        for (const auto& [name, q] : assignment)
            if (std::find(model.symbols_.begin(), model.symbols_.end(), name) == model.symbols_.end())
                throw Error(ErrorCode::UnknownSymbol, "assignment names unknown symbol '" + name + "'");
        for (size_t t = 0; t < model.m(); ++t) {
            auto it = assignment.find(model.symbols_[t]);
            if (it == assignment.end())
                throw Error(ErrorCode::MissingSymbol, "no value for symbol '" + model.symbols_[t] + "'");
            values[t] = it->second;
        }
    }
    for (size_t t = 0; t < model.m(); ++t) prov["specialize." + model.symbols_[t]] = values[t].get_str();
    GroupModel g = model;
    g.symbols_.clear();
    for (auto& p : g.generators_)
        for (auto& s : p.coords) {
            Rational v = s.to_poly().evaluate(values);
            s = SymbolicScalar(v);
        }
    g.provenance_ = prov;
    g.finalize();
    return g;
}

inline std::string describe(const Subgroup& h) {
    std::string s = "subgroup(dim=" + std::to_string(h.dim) + ", lattice=[";
    for (size_t r = 0; r < h.coeff_lattice.basis.rows(); ++r) {
        s += r ? ",(" : "(";
        for (size_t c = 0; c < h.coeff_lattice.basis.cols(); ++c)
            s += (c ? "," : "") + h.coeff_lattice.basis(r, c).get_str();
        s += ")";
    }
    return s + "])";
}

} // namespace slopefilt
