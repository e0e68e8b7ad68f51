#pragma once

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slopefilt/report.hpp"

namespace slopefilt::cli {

enum ExitCode { kOk = 0, kError = 1, kViolation = 2 };

struct Options {
    std::string config_path;
    std::string out_path;
    std::string csv_path;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> limits;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::ValidationError, "cannot write " + path);
    f << text;
}

inline RunConfig load(const Options& o) {
    if (o.config_path.empty()) throw Error(ErrorCode::ValidationError, "-c/--config is required");
    RunConfig cfg = parse_config(read_file(o.config_path));
    if (o.seed) cfg.seed = *o.seed;
    for (const auto& kv : o.limits) apply_limit_override(cfg.limits, kv);
    return cfg;
}

inline VerifyOptions verify_options(const RunConfig& cfg) {
    VerifyOptions v;
    v.height = cfg.limits.candidate_height;
    v.random_count = cfg.limits.random_candidates;
    v.seed = cfg.seed;
    return v;
}

inline ProbeOptions probe_options(const RunConfig& cfg) {
    ProbeOptions p;
    p.epsilon = cfg.epsilon;
    p.samples = cfg.limits.sample_count;
    p.seed = cfg.seed;
    p.limit = cfg.limits.matrix_max;
    return p;
}

inline long require_D(const RunConfig& cfg) {
    if (!cfg.D) throw Error(ErrorCode::ValidationError, "D: required for this command");
    return *cfg.D;
}

/// Executes one subcommand; returns the JSON report (or CSV text in `csv`).
inline Json execute(const std::string& command, const RunConfig& cfg, std::string& csv) {
    GroupModel model = model_from(cfg);
    Json rep = report::envelope(command, cfg, model);
    auto chain = [&] { return build_chain(model, cfg.path); };
    if (command == "chain build") {
        rep["result"] = report::chain(model, chain());
    } else if (command == "chain verify") {
        Chain c;
        if (cfg.chain) {
            for (const auto& spec : *cfg.chain) c.nodes.push_back(make_node(model, resolve_subgroup(model, spec)));
            c.method = "config";
            fill_steps(model, c);
        } else {
            c = chain();
        }
        Json r;
        r["chain"] = report::chain(model, c);
        r["certificate"] = report::certificate(verify_chain(model, c, verify_options(cfg)));
        r["status"] = "verified";
        rep["result"] = r;
    } else if (command == "mu") {
        rep["result"] = report::mu(model, mu_exponents(model));
    } else if (command == "gamma enumerate") {
        rep["result"] = report::gamma_set(model, enumerate_gamma(model, cfg.lambda, cfg.limits.enumeration_max));
    } else if (command == "gamma count") {
        Chain c = chain();
        Subgroup hp = cfg.h_prime ? resolve_subgroup(model, *cfg.h_prime, &c) : full_subgroup(model);
        Subgroup hdp = cfg.h_dprime ? resolve_subgroup(model, *cfg.h_dprime, &c) : zero_subgroup(model);
        Json r = report::count(counting_check(model, hp, hdp, cfg.lambdas, cfg.limits.enumeration_max));
        r["H_prime"] = report::subgroup(model, hp);
        r["H_dprime"] = report::subgroup(model, hdp);
        rep["result"] = r;
    } else if (command == "gamma check") {
        Chain c = chain();
        rep["result"] = report::distribution(
            distribution_checks(model, c, cfg.epsilon, cfg.scale_factor, verify_options(cfg), cfg.limits.enumeration_max));
    } else if (command == "locus rank") {
        auto omega = enumerate_gamma(model, 1, cfg.limits.enumeration_max);
        Json r = report::eval_rank(eval_rank(model, omega.points, cfg.T, require_D(cfg), cfg.limits.matrix_max));
        r["points"] = omega.size();
        r["T"] = cfg.T;
        r["D"] = *cfg.D;
        rep["result"] = r;
    } else if (command == "locus probe") {
        rep["result"] = report::locus_entry(locus_probe(model, chain(), cfg.T, require_D(cfg), probe_options(cfg)));
    } else if (command == "locus sweep") {
        long lo = cfg.D_range ? cfg.D_range->first : require_D(cfg);
        long hi = cfg.D_range ? cfg.D_range->second : lo;
        auto r = threshold_sweep(model, chain(), cfg.T, lo, hi, probe_options(cfg));
        rep["result"] = report::locus_report(r);
        csv = report::sweep_csv(r);
    } else if (command == "polygon export") {
        Chain c = chain();
        rep["result"] = report::chain(model, c);
        csv = report::polygon_csv(model, c);
    } else {
        throw Error(ErrorCode::ValidationError, "unknown command " + command);
    }
    return rep;
}

inline Json error_json(const std::string& code, const std::string& message) {
    Json e;
    e["schema"] = kReportSchema;
    e["error"] = code;
    e["message"] = message;
    return e;
}

/// Full command-line entry point. Reports go to `out` unless --out is given;
/// diagnostics go to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Slope filtrations of finitely generated subgroups of vector groups", "slopefilt"};
    app.require_subcommand(1);
    Options opt;
    std::string command;
    std::uint64_t seed_value = 0;

    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& full, const std::string& help) {
        CLI::App* sub = parent->add_subcommand(name, help);
        sub->add_option("-c,--config", opt.config_path, "JSON configuration file")->required();
        sub->add_option("--out", opt.out_path, "write the report (or CSV for polygon export) to this file");
        sub->add_option("--seed", seed_value, "override the configured seed");
        sub->add_option("--limit", opt.limits, "override a limit, key=value")->take_all();
        if (full == "locus sweep") sub->add_option("--csv", opt.csv_path, "also write the sweep table as CSV");
        sub->callback([&, full, sub] {
            command = full;
            if (sub->count("--seed")) opt.seed = seed_value;
        });
    };
    auto group = [&](const std::string& name, const std::string& help) {
        CLI::App* g = app.add_subcommand(name, help);
        g->require_subcommand(1);
        return g;
    };
    CLI::App* chain = group("chain", "slope filtration");
    leaf(chain, "build", "chain build", "compute the chain H_0 < ... < H_r");
    leaf(chain, "verify", "chain verify", "certify the chain against enumerated candidates");
    leaf(&app, "mu", "mu", "rank-density exponents at equal scales");
    CLI::App* gamma = group("gamma", "box sets Gamma(S)");
    leaf(gamma, "enumerate", "gamma enumerate", "list Gamma(lambda S)");
    leaf(gamma, "count", "gamma count", "coset counts against the closed formula");
    leaf(gamma, "check", "gamma check", "distribution ratios along the chain");
    CLI::App* locus = group("locus", "base locus experiments");
    leaf(locus, "rank", "locus rank", "rank of the jet evaluation map on Gamma(S)");
    leaf(locus, "probe", "locus probe", "sampled inclusion verdicts at one degree");
    leaf(locus, "sweep", "locus sweep", "verdicts over a degree range");
    CLI::App* polygon = group("polygon", "polygon of the chain");
    leaf(polygon, "export", "polygon export", "CSV of chain vertices");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << error_json("UsageError", e.what()).dump(2) << '\n';
        return kError;
    }

    try {
        RunConfig cfg = load(opt);
        std::string csv;
        Json rep = execute(command, cfg, csv);
        if (command == "polygon export") {
            write_text(opt.out_path, csv, out);
        } else {
            write_text(opt.out_path, rep.dump(2) + "\n", out);
            if (!opt.csv_path.empty()) write_text(opt.csv_path, csv, out);
        }
        return kOk;
    } catch (const CertificateViolation& v) {
        Json e = error_json("CertificateViolation", v.what());
        e["check"] = v.check();
        e["step"] = v.step();
        e["witness"] = v.witness();
        err << e.dump(2) << '\n';
        return kViolation;
    } catch (const Error& e) {
        err << error_json(std::string(to_string(e.code())), e.what()).dump(2) << '\n';
        return kError;
    } catch (const std::exception& e) {
        err << error_json("InternalError", e.what()).dump(2) << '\n';
        return kError;
    }
}

inline int run(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace slopefilt::cli
