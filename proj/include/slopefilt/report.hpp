#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "slopefilt/base_locus.hpp"
#include "slopefilt/config.hpp"

namespace slopefilt {

inline constexpr const char* kReportSchema = "slopefilt.report/1";
inline constexpr const char* kVersion = "0.1.0";

namespace report {

inline std::string q(const Rational& x) { return x.get_str(); }

inline Json rationals(const std::vector<Rational>& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(q(x));
    return a;
}

inline Json scalar(const SymbolicScalar& s, const std::vector<std::string>& symbols) {
    if (s.is_rational()) return q(s.const_part);
    Json o;
    o["const"] = q(s.const_part);
    Json c = Json::object();
    for (const auto& [t, v] : s.symbol_coeffs) c[symbols.at(t)] = q(v);
    o["coeffs"] = c;
    return o;
}

inline double log_value(const std::vector<Rational>& scales, const std::vector<long>& e) {
    double v = 0;
    for (size_t j = 0; j < e.size(); ++j) v += static_cast<double>(e[j]) * std::log(scales[j].get_d());
    return v;
}

inline std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

inline Json subgroup(const GroupModel& model, const Subgroup& h) {
    Json o;
    o["dim"] = h.dim;
    Json lat = Json::array();
    for (size_t r = 0; r < h.coeff_lattice.basis.rows(); ++r) {
        Json row = Json::array();
        for (size_t c = 0; c < h.coeff_lattice.basis.cols(); ++c) row.push_back(h.coeff_lattice.basis(r, c).get_str());
        lat.push_back(row);
    }
    o["coeff_lattice"] = lat;
    Json span = Json::array();
    for (size_t r = 0; r < h.span_basis.rows(); ++r) {
        Json row = Json::array();
        for (size_t c = 0; c < h.span_basis.cols(); ++c) row.push_back(h.span_basis(r, c).to_string(model.symbols()));
        span.push_back(row);
    }
    o["span_basis"] = span;
    return o;
}

inline Json profile(const RankProfile& p) {
    Json o;
    o["dim"] = p.dim;
    o["gamma_ranks"] = p.gamma_ranks;
    return o;
}

inline Json frak(const RootedRational& f) {
    Json o;
    o["radicand"] = q(f.radicand);
    o["root"] = f.root;
    o["approx"] = f.approx();
    return o;
}

inline Json rooted(const std::optional<RootedRational>& f) { return f ? frak(*f) : Json(nullptr); }

inline Json slope(const GroupModel& model, const SlopeValue& s) {
    Json o;
    o["exponents"] = s.num.e;
    o["den"] = s.den;
    o["approx"] = log_value(model.scales(), s.num.e) / static_cast<double>(s.den);
    return o;
}

inline Json chain(const GroupModel& model, const Chain& c) {
    Json o;
    o["method"] = c.method;
    o["r"] = c.r();
    Json nodes = Json::array();
    for (size_t i = 0; i < c.nodes.size(); ++i) {
        const auto& n = c.nodes[i];
        Json e;
        e["index"] = i;
        e["dim"] = n.dim;
        e["phi"] = {{"exponents", n.phi.e}, {"approx", log_value(model.scales(), n.phi.e)}};
        e["profile"] = profile(n.profile);
        e["subgroup"] = subgroup(model, n.subgroup);
        nodes.push_back(e);
    }
    o["nodes"] = nodes;
    Json steps = Json::array();
    for (size_t i = 0; i < c.steps.size(); ++i) {
        Json e;
        e["index"] = i;
        e["slope"] = slope(model, c.steps[i].slope);
        e["frak_S"] = frak(c.steps[i].frak);
        steps.push_back(e);
    }
    o["steps"] = steps;
    return o;
}

inline Json subgroup_spec(const SubgroupSpec& s, const std::vector<std::string>& symbols) {
    switch (s.kind) {
    case SubgroupSpec::Kind::Full: return "FULL";
    case SubgroupSpec::Kind::Zero: return "ZERO";
    case SubgroupSpec::Kind::Span: {
        Json rows = Json::array();
        for (const auto& r : s.span) {
            Json row = Json::array();
            for (const auto& x : r) row.push_back(scalar(x, symbols));
            rows.push_back(row);
        }
        return Json{{"span", rows}};
    }
    case SubgroupSpec::Kind::Closure: return Json{{"closure", s.lattice}};
    case SubgroupSpec::Kind::ChainNode: return Json{{"chain", s.index}};
    }
    return nullptr;
}

/// Canonical echo of the effective configuration (after CLI overrides).
inline Json config(const RunConfig& c) {
    Json o;
    o["n"] = c.model.n;
    if (!c.model.symbols.empty()) o["symbols"] = c.model.symbols;
    Json gens = Json::array();
    for (const auto& g : c.model.generators) {
        Json row = Json::array();
        for (const auto& x : g) row.push_back(scalar(x, c.model.symbols));
        gens.push_back(row);
    }
    o["generators"] = gens;
    o["S"] = rationals(c.model.scales);
    if (c.specialize) {
        Json s = Json::object();
        for (const auto& [k, v] : *c.specialize) s[k] = q(v);
        o["specialize"] = s;
        o["specialize_seed"] = c.specialize_seed;
    }
    o["T"] = c.T;
    if (c.D) o["D"] = *c.D;
    if (c.D_range) o["D_range"] = {c.D_range->first, c.D_range->second};
    o["epsilon"] = q(c.epsilon);
    o["seed"] = c.seed;
    o["lambda"] = q(c.lambda);
    o["lambdas"] = rationals(c.lambdas);
    o["scale_factor"] = c.scale_factor;
    if (c.h_prime) o["H_prime"] = subgroup_spec(*c.h_prime, c.model.symbols);
    if (c.h_dprime) o["H_dprime"] = subgroup_spec(*c.h_dprime, c.model.symbols);
    if (c.chain) {
        Json nodes = Json::array();
        for (const auto& n : *c.chain) nodes.push_back(subgroup_spec(n, c.model.symbols));
        o["chain"] = nodes;
    }
    o["chain_path"] = c.path == ChainPath::Fast ? "fast" : (c.path == ChainPath::Greedy ? "greedy" : "auto");
    o["limits"] = {{"enumeration_max", c.limits.enumeration_max},
                   {"matrix_max", c.limits.matrix_max},
                   {"candidate_height", c.limits.candidate_height},
                   {"random_candidates", c.limits.random_candidates},
                   {"sample_count", c.limits.sample_count}};
    return o;
}

inline Json envelope(const std::string& command, const RunConfig& cfg, const GroupModel& model) {
    Json o;
    o["schema"] = kReportSchema;
    o["command"] = command;
    o["config"] = config(cfg);
    Json prov;
    prov["version"] = kVersion;
    prov["seed"] = cfg.seed;
    prov["permutation"] = model.permutation();
    prov["sorted_scales"] = rationals(model.scales());
    Json extra = Json::object();
    for (const auto& [k, v] : model.provenance()) extra[k] = v;
    prov["model"] = extra;
    o["provenance"] = prov;
    o["note"] = "fields named approx are floating-point displays of the exact field beside them";
    return o;
}

inline Json certificate(const ChainCertificate& c) {
    Json o;
    o["candidates"] = c.candidates;
    o["distinct_profiles"] = c.profiles.size();
    o["equality_cases"] = c.equality_cases;
    o["slopes_decreasing"] = c.slopes_decreasing;
    o["frak_ordered"] = c.frak_ordered;
    o["telescoping"] = c.telescoping;
    o["telescoping_value"] = q(c.telescoping_value);
    o["psi_injective"] = c.psi_injective;
    o["scaling_invariant"] = c.scaling_invariant;
    o["alphas"] = c.alphas;
    Json profiles = Json::array();
    for (const auto& p : c.profiles) {
        Json e;
        e["psi"] = profile(p.psi);
        e["phi"] = p.phi.e;
        e["multiplicity"] = p.multiplicity;
        e["chi_sign"] = p.chi_sign;
        profiles.push_back(e);
    }
    o["profiles"] = profiles;
    return o;
}

inline Json mu(const GroupModel& model, const MuReport& m) {
    Json o;
    o["mu"] = q(m.mu);
    o["mu_star"] = q(m.mu_star);
    o["mu_list"] = rationals(m.mu_list);
    o["well_distributed"] = m.well_distributed;
    o["equal_scale_chain"] = chain(model.with_scales(std::vector<Rational>(model.l(), Rational(2))), m.chain);
    return o;
}

inline Json point(const Point& p, const std::vector<std::string>& symbols) {
    Json a = Json::array();
    for (const auto& c : p.coords) a.push_back(c.to_string(symbols));
    return a;
}

inline Json gamma_set(const GroupModel& model, const GammaSet& g) {
    Json o;
    o["lambda"] = q(g.lambda);
    o["bounds"] = g.bounds;
    o["count"] = g.size();
    Json pts = Json::array();
    for (size_t k = 0; k < g.size(); ++k) {
        Json w = Json::array();
        for (const auto& x : g.witnesses[k]) w.push_back(x.get_str());
        pts.push_back({{"point", point(g.points[k], model.symbols())}, {"witness", w}});
    }
    o["points"] = pts;
    return o;
}

inline Json count(const CountReport& c) {
    Json o;
    o["raw_count"] = c.raw_count;
    o["n_formula_value"] = q(c.n_formula_value);
    o["ratio"] = q(c.ratio);
    o["ratio_approx"] = c.ratio.get_d();
    o["rank"] = c.rank;
    Json sweep = Json::array();
    for (const auto& r : c.sweep)
        sweep.push_back({{"lambda", q(r.lambda)},
                         {"count", r.count},
                         {"predicted_exponent", r.predicted_exponent},
                         {"ratio", q(r.ratio)},
                         {"ratio_approx", r.ratio.get_d()}});
    o["sweep"] = sweep;
    o["ratio_min"] = q(c.ratio_min);
    o["ratio_max"] = q(c.ratio_max);
    o["fitted_exponent_approx"] = c.fitted_exponent;
    o["exponent_match"] = c.exponent_match;
    return o;
}

inline Json distribution(const DistributionReport& d) {
    auto side = [](const std::vector<std::vector<RatioEntry>>& rows) {
        Json a = Json::array();
        for (const auto& row : rows) {
            Json r = Json::array();
            for (const auto& e : row)
                r.push_back({{"i", e.step}, {"candidates", e.candidates}, {"ratio", rooted(e.extreme)}, {"witness", e.witness}});
            a.push_back(r);
        }
        return a;
    };
    Json o;
    o["epsilon"] = q(d.epsilon);
    o["alphas"] = d.alphas;
    o["bracket"] = d.bracket;
    o["upper_max"] = side(d.upper);
    o["lower_min"] = side(d.lower);
    o["bounded"] = d.bounded;
    return o;
}

inline Json eval_rank(const EvalRank& e) {
    return {{"rank", e.rank}, {"rows", e.rows}, {"cols", e.cols}, {"injective", e.injective}, {"surjective", e.surjective}};
}

inline Json locus_entry(const LocusEntry& e) {
    Json o;
    o["T"] = e.T;
    o["D"] = e.D;
    o["rank"] = e.rank;
    o["rows"] = e.rows;
    o["nullity"] = e.nullity;
    Json v = Json::array();
    for (const auto& s : e.verdicts)
        v.push_back({{"i", s.i},
                     {"lower_inclusion", s.lower},
                     {"upper_inclusion", s.upper},
                     {"upper_vacuous", s.upper_vacuous},
                     {"lower_samples", s.lower_samples},
                     {"upper_samples", s.upper_samples},
                     {"witnesses", s.witnesses}});
    o["verdicts"] = v;
    o["achieved"] = e.achieved ? Json(*e.achieved) : Json(nullptr);
    return o;
}

inline Json locus_report(const LocusReport& r) {
    Json o;
    Json entries = Json::array();
    for (const auto& e : r.entries) entries.push_back(locus_entry(e));
    o["entries"] = entries;
    Json t = Json::array();
    for (const auto& x : r.transitions)
        t.push_back({{"i", x.i},
                     {"lower_lost_at_D", x.lower_lost ? Json(*x.lower_lost) : Json(nullptr)},
                     {"upper_gained_at_D", x.upper_gained ? Json(*x.upper_gained) : Json(nullptr)},
                     {"T_frak_S_approx", x.reference}});
    o["transitions"] = t;
    o["achieved_monotone"] = r.achieved_monotone;
    return o;
}

inline std::string sweep_csv(const LocusReport& r) {
    std::ostringstream s;
    s << "D,rank,nullity";
    size_t steps = r.entries.empty() ? 0 : r.entries.front().verdicts.size();
    for (size_t i = 0; i < steps; ++i) s << ",lower_" << i << ",upper_" << i;
    s << ",achieved\n";
    for (const auto& e : r.entries) {
        s << e.D << ',' << e.rank << ',' << e.nullity;
        for (const auto& v : e.verdicts) s << ',' << (v.lower ? 1 : 0) << ',' << (v.upper ? 1 : 0);
        s << ',' << (e.achieved ? std::to_string(*e.achieved) : std::string()) << '\n';
    }
    return s.str();
}

inline std::string polygon_csv(const GroupModel& model, const Chain& c) {
    std::ostringstream s;
    s << "dim,phi_approx";
    for (size_t j = 0; j < model.l(); ++j) s << ",e_" << (j + 1);
    s << '\n';
    for (const auto& n : c.nodes) {
        s << n.dim << ',' << fmt(log_value(model.scales(), n.phi.e));
        for (auto x : n.phi.e) s << ',' << x;
        s << '\n';
    }
    return s.str();
}

} // namespace report
} // namespace slopefilt
