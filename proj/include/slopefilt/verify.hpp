#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <unordered_set>
#include <vector>

#include "slopefilt/chain.hpp"

namespace slopefilt {

struct VerifyOptions {
    long height = 2;               ///< coefficient height of exhaustive generators
    size_t random_count = 0;       ///< extra seeded random sublattices
    long random_height = 5;
    std::uint64_t seed = 1;
    std::vector<long> alphas{2, 3};
    size_t max_candidates = 2000000;
};

/// Aggregate over all candidates sharing one rank profile psi(K).
struct ProfileRecord {
    RankProfile psi;
    PhiValue phi;
    size_t multiplicity = 0;
    std::vector<PhiValue> chi;  ///< per step
    std::vector<int> chi_sign;
};

struct ChainCertificate {
    size_t candidates = 0;
    std::vector<ProfileRecord> profiles;
    size_t equality_cases = 0;  ///< candidates with chi = 0 at some step, all verified nested
    bool slopes_decreasing = false;
    bool frak_ordered = false;
    bool telescoping = false;
    Rational telescoping_value = 1;
    bool psi_injective = false;
    bool scaling_invariant = false;
    std::vector<long> alphas;
};

namespace small {

// Subspaces of Q^n with integer spanning rows, kept as reduced echelon rows
// scaled to primitive integer vectors with positive pivots (a canonical key).

using Key = std::vector<std::int64_t>;

struct KeyHash {
    size_t operator()(const Key& k) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        for (auto x : k) h = (h ^ static_cast<std::uint64_t>(x)) * 1099511628211ull;
        return static_cast<size_t>(h);
    }
};

inline std::int64_t checked(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw Error(ErrorCode::Overflow, "int64 subspace arithmetic overflow");
    return static_cast<std::int64_t>(v);
}

inline void make_primitive(std::int64_t* row, size_t n) {
    std::int64_t g = 0;
    for (size_t c = 0; c < n; ++c) g = std::gcd(g, row[c] < 0 ? -row[c] : row[c]);
    if (g > 1)
        for (size_t c = 0; c < n; ++c) row[c] /= g;
}

/// Canonical key of the span of `rows` (flattened, `count` rows of length n).
inline Key canonical(std::vector<std::int64_t> m, size_t count, size_t n) {
    size_t r = 0;
    for (size_t c = 0; c < n && r < count; ++c) {
        size_t p = r;
        while (p < count && m[p * n + c] == 0) ++p;
        if (p == count) continue;
        if (p != r)
            for (size_t k = 0; k < n; ++k) std::swap(m[p * n + k], m[r * n + k]);
        std::int64_t* pr = &m[r * n];
        make_primitive(pr, n);
        if (pr[c] < 0)
            for (size_t k = 0; k < n; ++k) pr[k] = -pr[k];
        for (size_t i = 0; i < count; ++i) {
            if (i == r || m[i * n + c] == 0) continue;
            std::int64_t* ri = &m[i * n];
            std::int64_t a = pr[c], b = ri[c];
            for (size_t k = 0; k < n; ++k) ri[k] = checked(static_cast<__int128>(a) * ri[k] - static_cast<__int128>(b) * pr[k]);
            make_primitive(ri, n);
            if (i < r) {
                size_t pc = 0;
                while (ri[pc] == 0) ++pc;
                if (ri[pc] < 0)
                    for (size_t k = 0; k < n; ++k) ri[k] = -ri[k];
            }
        }
        ++r;
    }
    m.resize(r * n);
    return m;
}

inline size_t dim(const Key& k, size_t n) { return n ? k.size() / n : 0; }

inline Key join(const Key& a, const Key& b, size_t n) {
    Key m = a;
    m.insert(m.end(), b.begin(), b.end());
    return canonical(std::move(m), dim(a, n) + dim(b, n), n);
}

/// True when v lies in the span keyed by k (k is reduced, so reduce v by pivots).
inline bool in_span(const Key& k, std::vector<std::int64_t> v, size_t n) {
    for (size_t r = 0; r < dim(k, n); ++r) {
        const std::int64_t* row = &k[r * n];
        size_t pc = 0;
        while (row[pc] == 0) ++pc;
        if (v[pc] == 0) continue;
        std::int64_t a = row[pc], b = v[pc];
        for (size_t c = 0; c < n; ++c) v[c] = checked(static_cast<__int128>(a) * v[c] - static_cast<__int128>(b) * row[c]);
        make_primitive(v.data(), n);
    }
    return std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; });
}

inline bool contains(const Key& outer, const Key& inner, size_t n) {
    for (size_t r = 0; r < dim(inner, n); ++r)
        if (!in_span(outer, Key(inner.begin() + r * n, inner.begin() + (r + 1) * n), n)) return false;
    return true;
}

/// Determinant of a k x k integer matrix (fraction-free elimination).
inline std::int64_t small_det(std::vector<std::int64_t> a, size_t k) {
    __int128 prev = 1;
    int sign = 1;
    for (size_t c = 0; c < k; ++c) {
        size_t p = c;
        while (p < k && a[p * k + c] == 0) ++p;
        if (p == k) return 0;
        if (p != c) {
            for (size_t j = 0; j < k; ++j) std::swap(a[p * k + j], a[c * k + j]);
            sign = -sign;
        }
        for (size_t i = c + 1; i < k; ++i) {
            for (size_t j = c + 1; j < k; ++j)
                a[i * k + j] = checked((static_cast<__int128>(a[c * k + c]) * a[i * k + j] -
                                        static_cast<__int128>(a[i * k + c]) * a[c * k + j]) / prev);
            a[i * k + c] = 0;
        }
        prev = a[c * k + c];
    }
    return sign * a[(k - 1) * k + (k - 1)];
}

/// Signed maximal minors of the (n-1) x n matrix [w; v]: a normal vector of
/// their span (zero when the rows are dependent).
inline Key normal_raw(const Key& w, const std::vector<std::int64_t>& v, size_t n) {
    Key rows = w;
    rows.insert(rows.end(), v.begin(), v.end());
    const size_t k = n - 1;
    Key out(n);
    for (size_t skip = 0; skip < n; ++skip) {
        std::vector<std::int64_t> minor;
        minor.reserve(k * k);
        for (size_t r = 0; r < k; ++r)
            for (size_t c = 0; c < n; ++c)
                if (c != skip) minor.push_back(rows[r * n + c]);
        std::int64_t d = k ? small_det(std::move(minor), k) : 1;
        out[skip] = (skip % 2 ? -d : d);
    }
    return out;
}

/// Primitive, first nonzero entry positive.
inline void normalize_sign(Key& v) {
    make_primitive(v.data(), v.size());
    for (auto x : v) {
        if (x == 0) continue;
        if (x < 0)
            for (auto& y : v) y = -y;
        break;
    }
}

inline Key normal(const Key& w, const std::vector<std::int64_t>& v, size_t n) {
    Key out = normal_raw(w, v, n);
    normalize_sign(out);
    return out;
}

/// Canonical key of the hyperplane with the given normal.
inline Key hyperplane(const Key& nv, size_t n) {
    size_t p = 0;
    while (nv[p] == 0) ++p;
    Key rows;
    for (size_t c = 0; c < n; ++c) {
        if (c == p) continue;
        for (size_t k = 0; k < n; ++k) rows.push_back(k == c ? nv[p] : (k == p ? -nv[c] : 0));
    }
    return canonical(std::move(rows), n - 1, n);
}

/// Integer rows spanning a rational subgroup's span basis.
inline Key key_of(const Subgroup& h, size_t n) {
    if (!is_constant(h.span_basis)) throw Error(ErrorCode::SymbolicModelNotSpecialized, "integer key of symbolic span");
    RatMatrix q = constant_part(h.span_basis);
    IntMatrix z = detail::to_integer_rows(q);
    Key m;
    for (size_t r = 0; r < z.rows(); ++r)
        for (size_t c = 0; c < n; ++c) {
            if (!z(r, c).fits_slong_p()) throw Error(ErrorCode::Overflow, "span entry exceeds int64");
            m.push_back(z(r, c).get_si());
        }
    return canonical(std::move(m), z.rows(), n);
}

} // namespace small

/// Primitive nonzero vectors of Z^l with entries in [-h, h], one per +/- pair,
/// in lexicographic order.
inline std::vector<std::vector<long>> primitive_box_vectors(size_t l, long h) {
    std::vector<std::vector<long>> out;
    std::vector<long> v(l, -h);
    if (l == 0) return out;
    while (true) {
        long g = 0;
        size_t first = l;
        for (size_t c = 0; c < l; ++c) {
            g = std::gcd(g, v[c] < 0 ? -v[c] : v[c]);
            if (first == l && v[c] != 0) first = c;
        }
        if (g == 1 && v[first] > 0) out.push_back(v);
        size_t i = l;
        while (i > 0 && v[i - 1] == h) v[--i] = -h;
        if (i == 0) break;
        ++v[i - 1];
    }
    return out;
}

namespace detail {

/// Candidate family grouped by rank profile; the callbacks answer geometric
/// questions about individual members.
struct CandidateFamily {
    std::map<RankProfile, std::vector<size_t>> groups;
    size_t total = 0;
    std::function<bool(size_t, const Subgroup&, const Subgroup&)> between;  ///< lo <= K <= hi
    std::function<bool(size_t, const Subgroup&)> equals;
    std::function<std::string(size_t)> describe;
};

/// Rational models: candidates are spans of iota(v) over height-bounded v,
/// enumerated directly in Q^n.
struct RationalEngine {
    size_t n = 0;
    std::vector<small::Key> members;  ///< non-hyperplane candidates
    std::vector<small::Key> normals;  ///< hyperplane candidates, by normal
    std::vector<small::Key> prefix_spans;  ///< span(Gamma_j), j = 1..l
    std::vector<long> prefix_dims;
    std::vector<std::vector<std::int64_t>> gens;

    explicit RationalEngine(const GroupModel& model) : n(model.n()) {
        Integer lcm = 1;
        for (const auto& g : model.generators())
            for (const auto& s : g.coords) {
                Integer d = s.const_part.get_den();
                mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), d.get_mpz_t());
            }
        small::Key acc;
        for (const auto& g : model.generators()) {
            std::vector<std::int64_t> row;
            for (const auto& s : g.coords) {
                Rational v = s.const_part * lcm;
                if (!v.get_num().fits_slong_p()) throw Error(ErrorCode::Overflow, "generator entry exceeds int64");
                row.push_back(v.get_num().get_si());
            }
            gens.push_back(row);
            acc.insert(acc.end(), row.begin(), row.end());
            auto key = small::canonical(acc, gens.size(), n);
            prefix_spans.push_back(key);
            prefix_dims.push_back(static_cast<long>(small::dim(key, n)));
        }
    }

    std::vector<std::int64_t> image(const std::vector<long>& v) const {
        std::vector<std::int64_t> out(n, 0);
        for (size_t j = 0; j < gens.size(); ++j)
            for (size_t c = 0; c < n; ++c)
                out[c] = small::checked(out[c] + static_cast<__int128>(v[j]) * gens[j][c]);
        return out;
    }

    size_t size() const { return members.size() + normals.size(); }

    small::Key key(size_t k) const {
        return k < members.size() ? members[k] : small::hyperplane(normals[k - members.size()], n);
    }

    RankProfile profile(size_t k) const {
        if (k < members.size()) return profile(members[k]);
        const auto& w = normals[k - members.size()];
        RankProfile p;
        p.dim = n - 1;
        bool inside = true;
        for (size_t j = 0; j < gens.size(); ++j) {
            __int128 dot = 0;
            for (size_t c = 0; c < n; ++c) dot += static_cast<__int128>(w[c]) * gens[j][c];
            if (dot != 0) inside = false;
            p.gamma_ranks.push_back(prefix_dims[j] - (inside ? 0 : 1));
        }
        return p;
    }

    RankProfile profile(const small::Key& k) const {
        RankProfile p;
        p.dim = small::dim(k, n);
        for (size_t j = 0; j < prefix_spans.size(); ++j) {
            long joined = static_cast<long>(small::dim(small::join(k, prefix_spans[j], n), n));
            p.gamma_ranks.push_back(static_cast<long>(p.dim) + prefix_dims[j] - joined);
        }
        return p;
    }

    void enumerate(const GroupModel& model, const VerifyOptions& opt, const std::vector<small::Key>& seeds) {
        std::vector<std::vector<std::int64_t>> dirs;
        {
            std::unordered_set<small::Key, small::KeyHash> seen;
            for (const auto& v : primitive_box_vectors(model.l(), opt.height)) {
                auto img = image(v);
                if (std::all_of(img.begin(), img.end(), [](auto x) { return x == 0; })) continue;
                auto key = small::canonical(img, 1, n);
                if (seen.insert(key).second) dirs.push_back(key);
            }
        }
        std::unordered_set<small::Key, small::KeyHash> all, hyper;
        auto add = [&](const small::Key& k) {
            if (n >= 2 && small::dim(k, n) == n - 1) {
                small::Key w(k.begin(), k.end() - static_cast<long>(n));
                hyper.insert(small::normal(w, small::Key(k.end() - static_cast<long>(n), k.end()), n));
            } else {
                all.insert(k);
            }
        };
        std::vector<small::Key> level{small::Key{}};
        all.insert(small::Key{});
        auto check_limit = [&](size_t extra) {
            if (all.size() + hyper.size() + extra > opt.max_candidates)
                throw Error(ErrorCode::EnumerationTooLarge,
                            "candidate subspaces exceed limit " + std::to_string(opt.max_candidates));
        };
        // Levels below the hyperplanes by joining one direction at a time;
        // hyperplanes are kept by their primitive normal vector instead.
        for (size_t d = 1; d + 1 < n && !level.empty(); ++d) {
            std::unordered_set<small::Key, small::KeyHash> next;
            for (const auto& w : level)
                for (const auto& v : dirs) {
                    if (small::in_span(w, v, n)) continue;
                    next.insert(small::join(w, v, n));
                }
            check_limit(next.size());
            level.assign(next.begin(), next.end());
            all.insert(next.begin(), next.end());
        }
        if (n >= 2 && !level.empty() && small::dim(level.front(), n) == n - 2) {
            // normal(w, v) is linear in v: precompute its matrix once per w.
            small::Key cof(n * n), nv(n);
            for (const auto& w : level) {
                for (size_t c = 0; c < n; ++c) {
                    small::Key e(n, 0);
                    e[c] = 1;
                    auto col = small::normal_raw(w, e, n);
                    for (size_t i = 0; i < n; ++i) cof[i * n + c] = col[i];
                }
                for (const auto& v : dirs) {
                    bool zero = true;
                    for (size_t i = 0; i < n; ++i) {
                        __int128 acc = 0;
                        for (size_t c = 0; c < n; ++c) acc += static_cast<__int128>(cof[i * n + c]) * v[c];
                        nv[i] = small::checked(acc);
                        zero = zero && nv[i] == 0;
                    }
                    if (zero) continue;
                    small::normalize_sign(nv);
                    hyper.insert(nv);
                }
            }
            check_limit(0);
        }
        small::Key rank_all;
        for (const auto& v : dirs) rank_all.insert(rank_all.end(), v.begin(), v.end());
        if (!dirs.empty() && small::dim(small::canonical(rank_all, dirs.size(), n), n) == n) {
            small::Key full;
            for (size_t c = 0; c < n; ++c)
                for (size_t k = 0; k < n; ++k) full.push_back(c == k);
            add(full);
        }
        SeededRng rng(opt.seed);
        for (size_t t = 0; t < opt.random_count && model.l() > 0; ++t) {
            size_t k = static_cast<size_t>(rng.uniform(1, static_cast<long>(model.l())));
            small::Key rows;
            for (size_t s = 0; s < k; ++s) {
                std::vector<long> v(model.l());
                for (auto& x : v) x = rng.uniform(-opt.random_height, opt.random_height);
                auto img = image(v);
                rows.insert(rows.end(), img.begin(), img.end());
            }
            add(small::canonical(rows, k, n));
        }
        for (const auto& s : seeds) add(s);
        members.assign(all.begin(), all.end());
        std::sort(members.begin(), members.end(), [&](const small::Key& a, const small::Key& b) {
            return a.size() != b.size() ? a.size() < b.size() : a < b;
        });
        normals.assign(hyper.begin(), hyper.end());
        std::sort(normals.begin(), normals.end());
    }
};

inline std::string describe_key(const small::Key& k, size_t n) {
    std::string s = "span[";
    for (size_t r = 0; r < small::dim(k, n); ++r) {
        s += r ? ",(" : "(";
        for (size_t c = 0; c < n; ++c) s += (c ? "," : "") + std::to_string(k[r * n + c]);
        s += ")";
    }
    return s + "]";
}

/// Symbolic models: closures of the Q-spans of height-bounded coefficient
/// vectors, enumerated in Q^l.
inline std::vector<Subgroup> symbolic_candidates(const GroupModel& model, const VerifyOptions& opt) {
    const size_t l = model.l();
    auto dirs = primitive_box_vectors(l, opt.height);
    std::map<std::vector<Rational>, RatMatrix> spaces;  // flattened rref -> rref
    std::vector<RatMatrix> level{RatMatrix(0, l)};
    auto flat = [](const RatMatrix& m) {
        std::vector<Rational> f;
        for (size_t r = 0; r < m.rows(); ++r)
            for (size_t c = 0; c < m.cols(); ++c) f.push_back(m(r, c));
        return f;
    };
    spaces.emplace(std::vector<Rational>{}, RatMatrix(0, l));
    for (size_t d = 1; d <= l && !level.empty(); ++d) {
        std::vector<RatMatrix> next;
        for (const auto& w : level)
            for (const auto& v : dirs) {
                RatMatrix m = w;
                m.append_row(std::vector<Rational>(v.begin(), v.end()));
                m = rref(m);
                if (m.rows() != d) continue;
                if (spaces.emplace(flat(m), m).second) next.push_back(m);
                if (spaces.size() > opt.max_candidates)
                    throw Error(ErrorCode::EnumerationTooLarge, "candidate sublattices exceed limit");
            }
        level = std::move(next);
    }
    SeededRng rng(opt.seed);
    for (size_t t = 0; t < opt.random_count && l > 0; ++t) {
        size_t k = static_cast<size_t>(rng.uniform(1, static_cast<long>(l)));
        RatMatrix m(0, l);
        for (size_t s = 0; s < k; ++s) {
            std::vector<Rational> v(l);
            for (auto& x : v) x = Rational(rng.uniform(-opt.random_height, opt.random_height));
            m.append_row(v);
        }
        m = rref(m);
        spaces.emplace(flat(m), m);
    }
    std::vector<Subgroup> out;
    for (const auto& [key, m] : spaces) {
        Subgroup k = closure(model, Sublattice(detail::to_integer_rows(m)));
        bool dup = false;
        for (const auto& x : out)
            if (same_subgroup(x, k)) {
                dup = true;
                break;
            }
        if (!dup) out.push_back(std::move(k));
    }
    return out;
}

} // namespace detail

/// Closed candidate subgroups used by the certificate (rational models are
/// materialized as Subgroups, so keep this to small instances).
inline std::vector<Subgroup> certificate_candidates(const GroupModel& model, const VerifyOptions& opt = {}) {
    if (!model.is_rational()) return detail::symbolic_candidates(model, opt);
    detail::RationalEngine eng(model);
    eng.enumerate(model, opt, {});
    std::vector<Subgroup> out;
    for (size_t idx = 0; idx < eng.size(); ++idx) {
        small::Key k = eng.key(idx);
        PolyMatrix rows(0, model.n());
        for (size_t r = 0; r < small::dim(k, model.n()); ++r) {
            std::vector<Poly> row;
            for (size_t c = 0; c < model.n(); ++c) row.emplace_back(Rational(static_cast<long>(k[r * model.n() + c])));
            rows.append_row(row);
        }
        out.push_back(span_subgroup(model, rows));
    }
    return out;
}

inline ChainCertificate verify_chain(const GroupModel& model, const Chain& chain, const VerifyOptions& opt = {}) {
    ChainCertificate cert;
    const size_t n = model.n();
    const auto& nodes = chain.nodes;
    // Structure, recomputing every stored value from the subgroups.
    if (nodes.size() < 2) throw CertificateViolation("structure", -1, "chain has fewer than two nodes");
    if (nodes.front().dim != 0) throw CertificateViolation("structure", 0, "H_0 is not zero");
    if (nodes.back().dim != n) throw CertificateViolation("structure", -1, "H_r is not G");
    Chain fresh;
    fresh.method = chain.method;
    for (size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].subgroup.dim != nodes[i].dim) throw CertificateViolation("structure", static_cast<int>(i), "dimension mismatch");
        if (i && (nodes[i].dim <= nodes[i - 1].dim || !contains(nodes[i].subgroup, nodes[i - 1].subgroup)))
            throw CertificateViolation("structure", static_cast<int>(i), "chain not strictly increasing");
        fresh.nodes.push_back(make_node(model, nodes[i].subgroup));
    }
    fill_steps(model, fresh);
    const size_t r = nodes.size() - 1;
    std::vector<PhiValue> phis;
    std::vector<SlopeValue> slopes;
    std::vector<RootedRational> fraks;
    for (const auto& node : fresh.nodes) phis.push_back(node.phi);
    for (const auto& st : fresh.steps) {
        slopes.push_back(st.slope);
        fraks.push_back(st.frak);
    }

    // chi over the candidate family.
    detail::CandidateFamily fam;
    std::vector<Subgroup> sym;
    std::optional<detail::RationalEngine> eng;
    if (model.is_rational()) {
        eng.emplace(model);
        std::vector<small::Key> seeds;
        for (const auto& node : nodes) seeds.push_back(small::key_of(node.subgroup, n));
        for (const auto& h : prefix_closures(model)) seeds.push_back(small::key_of(h, n));
        eng->enumerate(model, opt, seeds);
        for (size_t k = 0; k < eng->size(); ++k) fam.groups[eng->profile(k)].push_back(k);
        fam.total = eng->size();
        fam.between = [&](size_t k, const Subgroup& lo, const Subgroup& hi) {
            small::Key key = eng->key(k);
            return small::contains(key, small::key_of(lo, n), n) && small::contains(small::key_of(hi, n), key, n);
        };
        fam.equals = [&](size_t k, const Subgroup& h) { return eng->key(k) == small::key_of(h, n); };
        fam.describe = [&](size_t k) { return detail::describe_key(eng->key(k), n); };
    } else {
        sym = detail::symbolic_candidates(model, opt);
        for (const auto& node : nodes) sym.push_back(node.subgroup);
        for (auto& h : prefix_closures(model)) sym.push_back(std::move(h));
        for (size_t k = 0; k < sym.size(); ++k) fam.groups[rank_profile(model, sym[k])].push_back(k);
        fam.total = sym.size();
        fam.between = [&](size_t k, const Subgroup& lo, const Subgroup& hi) {
            return contains(sym[k], lo) && contains(hi, sym[k]);
        };
        fam.equals = [&](size_t k, const Subgroup& h) { return same_subgroup(sym[k], h); };
        fam.describe = [&](size_t k) { return describe(sym[k]); };
    }
    cert.candidates = fam.total;

    for (const auto& [psi, members] : fam.groups) {
        ProfileRecord rec;
        rec.psi = psi;
        rec.phi = phi_from_profile(model, psi);
        rec.multiplicity = members.size();
        cert.profiles.push_back(std::move(rec));
    }
    // Steps outermost, so a violation is reported at its earliest step.
    for (size_t i = 0; i < r; ++i) {
        const long di = static_cast<long>(nodes[i].dim), dn = static_cast<long>(nodes[i + 1].dim);
        size_t p = 0;
        for (const auto& [psi, members] : fam.groups) {
            auto& rec = cert.profiles[p++];
            PhiValue chi = rec.phi.times(dn - di) - (phis[i + 1] - phis[i]).times(static_cast<long>(psi.dim)) +
                           phis[i + 1].times(di) - phis[i].times(dn);
            int s = log_sign(model.scales(), chi.e);
            if (s > 0) throw CertificateViolation("chi<=0", static_cast<int>(i), fam.describe(members.front()));
            rec.chi.push_back(std::move(chi));
            rec.chi_sign.push_back(s);
        }
        p = 0;
        for (const auto& [psi, members] : fam.groups) {
            if (cert.profiles[p++].chi_sign[i] != 0) continue;
            for (auto k : members) {
                if (!fam.between(k, nodes[i].subgroup, nodes[i + 1].subgroup))
                    throw CertificateViolation("chi-equality-nesting", static_cast<int>(i), fam.describe(k));
                ++cert.equality_cases;
            }
        }
    }

    // psi separates each chain node from every other sampled candidate.
    for (size_t i = 0; i < nodes.size(); ++i) {
        auto it = fam.groups.find(rank_profile(model, nodes[i].subgroup));
        if (it == fam.groups.end()) continue;
        for (auto k : it->second)
            if (!fam.equals(k, nodes[i].subgroup))
                throw CertificateViolation("psi-injectivity", static_cast<int>(i), fam.describe(k));
    }
    cert.psi_injective = true;

    for (size_t i = 0; i + 1 < r; ++i)
        if (compare_slopes(model, slopes[i], slopes[i + 1]) != Ordering::Greater)
            throw CertificateViolation("slope-decrease", static_cast<int>(i + 1), "slope not strictly smaller");
    cert.slopes_decreasing = true;
    for (size_t i = 0; i < r; ++i) {
        if (fraks[i].radicand < 1) throw CertificateViolation("frak-S>=1", static_cast<int>(i), "radicand below 1");
        if (i + 1 < r && compare(fraks[i], fraks[i + 1]) != Ordering::Greater)
            throw CertificateViolation("frak-S-order", static_cast<int>(i + 1), "not strictly decreasing");
    }
    cert.frak_ordered = true;

    // prod radicand(S_i) = prod S_j^{rk Gamma_j - rk Gamma_{j-1}}.
    Rational lhs = 1;
    for (const auto& f : fraks) lhs *= f.radicand;
    auto ranks = prefix_ranks(model);
    std::vector<long> jumps(model.l());
    for (size_t j = 0; j < model.l(); ++j) jumps[j] = ranks[j] - (j ? ranks[j - 1] : 0);
    if (lhs != power_product(model.scales(), jumps))
        throw CertificateViolation("telescoping", -1, "product of radicands " + lhs.get_str());
    cert.telescoping = true;
    cert.telescoping_value = lhs;

    for (long alpha : opt.alphas) {
        std::vector<Rational> powered;
        for (const auto& s : model.scales()) powered.push_back(rpow(s, alpha));
        GroupModel scaled = model.with_scales(powered);
        Chain again = build_chain(scaled, chain.method == "fast" ? ChainPath::Fast : ChainPath::Greedy);
        if (!same_chain(again, chain))
            throw CertificateViolation("scaling-invariance", -1, "alpha=" + std::to_string(alpha));
        for (size_t i = 0; i < r; ++i)
            if (!(again.steps[i].frak == fraks[i].pow(alpha)))
                throw CertificateViolation("scaling-frak", static_cast<int>(i), "alpha=" + std::to_string(alpha));
        cert.alphas.push_back(alpha);
    }
    cert.scaling_invariant = true;
    return cert;
}

} // namespace slopefilt
