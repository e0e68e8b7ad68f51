#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "slopefilt/chain.hpp"

namespace slopefilt {

using Json = nlohmann::ordered_json;

struct Limits {
    std::uint64_t enumeration_max = 10000000;
    std::uint64_t matrix_max = 10000000;
    long candidate_height = 2;
    size_t random_candidates = 0;
    size_t sample_count = 100;
};

/// "FULL", "ZERO", a rational span, a closure of integer coefficient vectors,
/// or a chain node H_i.
struct SubgroupSpec {
    enum class Kind { Full, Zero, Span, Closure, ChainNode } kind = Kind::Full;
    std::vector<std::vector<SymbolicScalar>> span;
    std::vector<std::vector<long>> lattice;
    size_t index = 0;
};

struct RunConfig {
    ModelConfig model;
    std::optional<std::vector<std::pair<std::string, Rational>>> specialize;
    std::uint64_t specialize_seed = 0;
    long T = 1;
    std::optional<long> D;
    std::optional<std::pair<long, long>> D_range;
    Rational epsilon{1, 2};
    std::uint64_t seed = 1;
    Rational lambda = 1;
    std::vector<Rational> lambdas{1, 2, 4};
    long scale_factor = 2;
    std::optional<SubgroupSpec> h_prime, h_dprime;
    std::optional<std::vector<SubgroupSpec>> chain;  ///< explicit H_0..H_r for chain verify
    ChainPath path = ChainPath::Auto;
    Limits limits;
};

namespace detail {

inline Error invalid(const std::string& field, const std::string& what) {
    return Error(ErrorCode::ValidationError, field + ": " + what);
}

inline Rational parse_scalar(const Json& v, const std::string& field) {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (!v.is_string()) throw invalid(field, "expected a \"p/q\" string");
    try {
        return parse_rational(v.get<std::string>());
    } catch (const Error&) {
        throw invalid(field, "malformed rational \"" + v.get<std::string>() + "\"");
    }
}

inline void check_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw invalid(where, "expected an object");
    for (const auto& [k, v] : obj.items())
        if (!allowed.count(k)) throw invalid(where.empty() ? k : where + "." + k, "unknown key");
}

inline SymbolicScalar parse_symbolic(const Json& v, const std::vector<std::string>& symbols, const std::string& field) {
    if (!v.is_object()) return SymbolicScalar(parse_scalar(v, field));
    check_keys(v, {"const", "coeffs"}, field);
    SymbolicScalar s(v.contains("const") ? parse_scalar(v["const"], field + ".const") : Rational(0));
    if (v.contains("coeffs")) {
        if (!v["coeffs"].is_object()) throw invalid(field + ".coeffs", "expected an object");
        for (const auto& [name, c] : v["coeffs"].items()) {
            auto it = std::find(symbols.begin(), symbols.end(), name);
            if (it == symbols.end()) throw Error(ErrorCode::UnknownSymbol, field + ".coeffs: unknown symbol " + name);
            s.symbol_coeffs[static_cast<size_t>(it - symbols.begin())] = parse_scalar(c, field + ".coeffs." + name);
        }
    }
    s.normalize();
    return s;
}

inline long parse_int(const Json& v, const std::string& field) {
    if (!v.is_number_integer()) throw invalid(field, "expected an integer");
    return v.get<long>();
}

inline std::uint64_t parse_positive(const Json& v, const std::string& field) {
    long x = parse_int(v, field);
    if (x <= 0) throw invalid(field, "must be positive");
    return static_cast<std::uint64_t>(x);
}

inline SubgroupSpec parse_subgroup(const Json& v, const std::vector<std::string>& symbols, const std::string& field) {
    SubgroupSpec s;
    if (v.is_string()) {
        auto t = v.get<std::string>();
        if (t == "FULL") s.kind = SubgroupSpec::Kind::Full;
        else if (t == "ZERO") s.kind = SubgroupSpec::Kind::Zero;
        else throw invalid(field, "expected FULL, ZERO or an object");
        return s;
    }
    check_keys(v, {"span", "closure", "chain"}, field);
    if (v.size() != 1) throw invalid(field, "exactly one of span, closure, chain");
    if (v.contains("span")) {
        s.kind = SubgroupSpec::Kind::Span;
        for (const auto& row : v["span"]) {
            std::vector<SymbolicScalar> r;
            for (const auto& x : row) r.push_back(parse_symbolic(x, symbols, field + ".span"));
            s.span.push_back(r);
        }
    } else if (v.contains("closure")) {
        s.kind = SubgroupSpec::Kind::Closure;
        for (const auto& row : v["closure"]) {
            std::vector<long> r;
            for (const auto& x : row) r.push_back(parse_int(x, field + ".closure"));
            s.lattice.push_back(r);
        }
    } else {
        s.kind = SubgroupSpec::Kind::ChainNode;
        long i = parse_int(v["chain"], field + ".chain");
        if (i < 0) throw invalid(field + ".chain", "must be nonnegative");
        s.index = static_cast<size_t>(i);
    }
    return s;
}

} // namespace detail

inline RunConfig parse_config_json(const Json& j) {
    using namespace detail;
    check_keys(j, {"n", "symbols", "generators", "S", "specialize", "specialize_seed", "T", "D", "D_range", "epsilon",
                   "seed", "lambda", "lambdas", "scale_factor", "H_prime", "H_dprime", "chain", "chain_path", "limits"},
               "");
    RunConfig cfg;
    if (!j.contains("n")) throw invalid("n", "required");
    long n = parse_int(j["n"], "n");
    if (n < 1) throw invalid("n", "must be at least 1");
    cfg.model.n = static_cast<size_t>(n);
    if (j.contains("symbols"))
        for (const auto& s : j["symbols"]) {
            if (!s.is_string()) throw invalid("symbols", "expected strings");
            cfg.model.symbols.push_back(s.get<std::string>());
        }
    if (j.contains("generators")) {
        if (!j["generators"].is_array()) throw invalid("generators", "expected an array of vectors");
        for (size_t g = 0; g < j["generators"].size(); ++g) {
            const auto& row = j["generators"][g];
            if (!row.is_array()) throw invalid("generators", "expected an array of vectors");
            std::vector<SymbolicScalar> v;
            for (const auto& x : row)
                v.push_back(parse_symbolic(x, cfg.model.symbols, "generators[" + std::to_string(g) + "]"));
            cfg.model.generators.push_back(v);
        }
    }
    if (j.contains("S")) {
        if (!j["S"].is_array()) throw invalid("S", "expected an array");
        for (const auto& x : j["S"]) cfg.model.scales.push_back(parse_scalar(x, "S"));
    }
    if (cfg.model.scales.size() != cfg.model.generators.size())
        throw invalid("S", "one scale per generator required");
    if (j.contains("specialize")) {
        check_keys(j["specialize"], std::set<std::string>(cfg.model.symbols.begin(), cfg.model.symbols.end()), "specialize");
        std::vector<std::pair<std::string, Rational>> a;
        for (const auto& [k, v] : j["specialize"].items()) a.emplace_back(k, parse_scalar(v, "specialize." + k));
        cfg.specialize = a;
    }
    if (j.contains("specialize_seed")) cfg.specialize_seed = static_cast<std::uint64_t>(parse_int(j["specialize_seed"], "specialize_seed"));
    if (j.contains("T")) cfg.T = static_cast<long>(parse_positive(j["T"], "T"));
    if (j.contains("D")) {
        cfg.D = parse_int(j["D"], "D");
        if (*cfg.D < 0) throw invalid("D", "must be nonnegative");
    }
    if (j.contains("D_range")) {
        const auto& r = j["D_range"];
        if (!r.is_array() || r.size() != 2) throw invalid("D_range", "expected [D_min, D_max]");
        long a = parse_int(r[0], "D_range"), b = parse_int(r[1], "D_range");
        if (a < 0 || a > b) throw invalid("D_range", "need 0 <= D_min <= D_max");
        cfg.D_range = std::make_pair(a, b);
    }
    if (j.contains("epsilon")) {
        cfg.epsilon = parse_scalar(j["epsilon"], "epsilon");
        if (!(cfg.epsilon > 0 && cfg.epsilon < 1)) throw invalid("epsilon", "must lie in the open interval (0, 1)");
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) throw invalid("seed", "expected an integer");
        if (j["seed"].is_number_integer() && j["seed"].get<long long>() < 0) throw invalid("seed", "must be nonnegative");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("lambda")) {
        cfg.lambda = parse_scalar(j["lambda"], "lambda");
        if (cfg.lambda <= 0) throw invalid("lambda", "must be positive");
    }
    if (j.contains("lambdas")) {
        cfg.lambdas.clear();
        for (const auto& x : j["lambdas"]) {
            cfg.lambdas.push_back(parse_scalar(x, "lambdas"));
            if (cfg.lambdas.back() <= 0) throw invalid("lambdas", "must be positive");
        }
        if (cfg.lambdas.empty()) throw invalid("lambdas", "must not be empty");
    }
    if (j.contains("scale_factor")) cfg.scale_factor = static_cast<long>(parse_positive(j["scale_factor"], "scale_factor"));
    if (j.contains("H_prime")) cfg.h_prime = parse_subgroup(j["H_prime"], cfg.model.symbols, "H_prime");
    if (j.contains("H_dprime")) cfg.h_dprime = parse_subgroup(j["H_dprime"], cfg.model.symbols, "H_dprime");
    if (j.contains("chain")) {
        if (!j["chain"].is_array() || j["chain"].size() < 2) throw invalid("chain", "expected at least two subgroups");
        std::vector<SubgroupSpec> nodes;
        for (size_t i = 0; i < j["chain"].size(); ++i) {
            nodes.push_back(parse_subgroup(j["chain"][i], cfg.model.symbols, "chain[" + std::to_string(i) + "]"));
            if (nodes.back().kind == SubgroupSpec::Kind::ChainNode) throw invalid("chain", "nodes cannot refer to the chain");
        }
        cfg.chain = nodes;
    }
    if (j.contains("chain_path")) {
        auto p = j["chain_path"].is_string() ? j["chain_path"].get<std::string>() : "";
        if (p == "auto") cfg.path = ChainPath::Auto;
        else if (p == "fast") cfg.path = ChainPath::Fast;
        else if (p == "greedy") cfg.path = ChainPath::Greedy;
        else throw invalid("chain_path", "expected auto, fast or greedy");
    }
    if (j.contains("limits")) {
        const auto& l = j["limits"];
        check_keys(l, {"enumeration_max", "matrix_max", "candidate_height", "random_candidates", "sample_count"}, "limits");
        if (l.contains("enumeration_max")) cfg.limits.enumeration_max = parse_positive(l["enumeration_max"], "limits.enumeration_max");
        if (l.contains("matrix_max")) cfg.limits.matrix_max = parse_positive(l["matrix_max"], "limits.matrix_max");
        if (l.contains("candidate_height")) cfg.limits.candidate_height = static_cast<long>(parse_positive(l["candidate_height"], "limits.candidate_height"));
        if (l.contains("random_candidates")) {
            long r = parse_int(l["random_candidates"], "limits.random_candidates");
            if (r < 0) throw invalid("limits.random_candidates", "must be nonnegative");
            cfg.limits.random_candidates = static_cast<size_t>(r);
        }
        if (l.contains("sample_count")) cfg.limits.sample_count = parse_positive(l["sample_count"], "limits.sample_count");
    }
    return cfg;
}

inline RunConfig parse_config(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ParseError, "config parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    return parse_config_json(j);
}

/// Applies one `--limit key=value` override.
inline void apply_limit_override(Limits& limits, const std::string& kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw detail::invalid("--limit", "expected key=value");
    std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
    long v = 0;
    try {
        size_t used = 0;
        v = std::stol(val, &used);
        if (used != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception&) {
        throw detail::invalid("--limit " + key, "expected an integer");
    }
    if (v < 0 || (v == 0 && key != "random_candidates")) throw detail::invalid("--limit " + key, "must be positive");
    if (key == "enumeration_max") limits.enumeration_max = static_cast<std::uint64_t>(v);
    else if (key == "matrix_max") limits.matrix_max = static_cast<std::uint64_t>(v);
    else if (key == "candidate_height") limits.candidate_height = v;
    else if (key == "random_candidates") limits.random_candidates = static_cast<size_t>(v);
    else if (key == "sample_count") limits.sample_count = static_cast<size_t>(v);
    else throw detail::invalid("--limit " + key, "unknown limit");
}

/// The model after sorting and the optional specialization.
inline GroupModel model_from(const RunConfig& cfg) {
    GroupModel g = build_model(cfg.model);
    if (cfg.specialize) {
        std::map<std::string, Rational> a(cfg.specialize->begin(), cfg.specialize->end());
        g = specialize(g, a, cfg.specialize_seed);
    }
    return g;
}

inline Subgroup resolve_subgroup(const GroupModel& model, const SubgroupSpec& spec, const Chain* chain = nullptr) {
    switch (spec.kind) {
    case SubgroupSpec::Kind::Full: return full_subgroup(model);
    case SubgroupSpec::Kind::Zero: return zero_subgroup(model);
    case SubgroupSpec::Kind::Span: {
        PolyMatrix rows(0, model.n());
        for (const auto& r : spec.span) {
            if (r.size() != model.n()) throw Error(ErrorCode::DimensionMismatch, "span vector must have n entries");
            std::vector<Poly> p;
            for (const auto& x : r) p.push_back(x.to_poly());
            rows.append_row(p);
        }
        return span_subgroup(model, rows);
    }
    case SubgroupSpec::Kind::Closure: {
        IntMatrix m(0, model.l());
        for (const auto& r : spec.lattice) {
            if (r.size() != model.l()) throw Error(ErrorCode::DimensionMismatch, "closure vector must have l entries");
            m.append_row(std::vector<Integer>(r.begin(), r.end()));
        }
        return closure(model, Sublattice(m));
    }
    case SubgroupSpec::Kind::ChainNode:
        if (!chain || spec.index > chain->r()) throw Error(ErrorCode::IndexOutOfRange, "chain node index out of range");
        return chain->nodes[spec.index].subgroup;
    }
    return full_subgroup(model);
}

} // namespace slopefilt
