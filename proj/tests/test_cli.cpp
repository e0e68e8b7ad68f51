#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "slopefilt/cli.hpp"

using namespace slopefilt;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out, err;
};

class CliTest : public ::testing::Test {
protected:
    fs::path dir;

    void SetUp() override {
        dir = fs::temp_directory_path() / ("slopefilt_cli_" + std::to_string(::getpid()) + "_" +
                                           ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string write(const std::string& name, const std::string& text) {
        auto p = dir / name;
        std::ofstream(p) << text;
        return p.string();
    }

    static Outcome run(std::vector<std::string> args) {
        std::ostringstream out, err;
        int code = cli::run(args, out, err);
        return {code, out.str(), err.str()};
    }
};

const char* kTwoScales = R"({"n": 2, "generators": [["1","0"],["0","1"]], "S": ["100","10"]})";
const char* kThreeLines = R"({"n": 2, "generators": [["1","0"],["0","1"]], "S": ["3","2"], "T": 1, "D": 3, "D_range": [1, 6]})";

} // namespace

TEST(ParseConfig, MinimalConfig) {
    auto cfg = parse_config(R"({"n": 1, "generators": [["1"]], "S": ["3"], "T": 1, "D": 3})");
    EXPECT_EQ(cfg.model.n, 1u);
    EXPECT_EQ(cfg.model.scales, (std::vector<Rational>{3}));
    EXPECT_EQ(cfg.T, 1);
    EXPECT_EQ(cfg.D, std::optional<long>(3));
}

TEST(ParseConfig, Rejections) {
    auto code_of = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const Error& e) {
            return std::string(to_string(e.code()));
        }
        return std::string("ok");
    };
    EXPECT_EQ(code_of(R"({"n": 1, "generators": [["1"]], "S": ["3"], "epsilon": "1"})"), "ValidationError");
    EXPECT_EQ(code_of(R"({"n": 1, "generators": [["1"]], "S": ["3"], "bogus": 1})"), "ValidationError");
    EXPECT_EQ(code_of(R"({"n": 1, "generators": [["1"]], "S": ["3"], "limits": {"speed": 1}})"), "ValidationError");
    EXPECT_EQ(code_of(R"({"n": 1, "generators": [["1"]], "S": ["3", "4"]})"), "ValidationError");
    EXPECT_EQ(code_of(R"({"n": 1, "generators": [["1"]], "S": ["3/0"]})"), "ValidationError");
    EXPECT_EQ(code_of(R"({"n": 1, "generators": [[{"coeffs": {"t": "1"}}]], "S": ["3"]})"), "UnknownSymbol");
    EXPECT_EQ(code_of(R"({"n": 1, "generators": [["1"]], "S": ["3"],)"), "ParseError");
    try {
        parse_config(R"({"n": 1, "generators": [["1"]], "S": ["3"], "epsilon": "1"})");
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("epsilon"), std::string::npos);
    }
}

TEST(ParseConfig, UnsortedScalesAndSymbolicScalars) {
    auto cfg = parse_config(R"({"n": 2, "generators": [["1","0"],["0","1"]], "S": ["3","5"]})");
    auto g = model_from(cfg);
    EXPECT_EQ(g.scales(), (std::vector<Rational>{5, 3}));
    EXPECT_EQ(g.permutation(), (std::vector<size_t>{1, 0}));
    auto sym = parse_config(
        R"({"n": 2, "symbols": ["tau"], "generators": [["1","0"],[{"const": "0", "coeffs": {"tau": "1"}}, "0"]], "S": ["5","5"]})");
    EXPECT_FALSE(model_from(sym).is_rational());
    auto spec = parse_config(
        R"({"n": 2, "symbols": ["tau"], "generators": [["1","0"],[{"coeffs": {"tau": "1"}}, "0"]], "S": ["5","5"], "specialize": {"tau": "22/7"}})");
    EXPECT_TRUE(model_from(spec).is_rational());
}

TEST(ParseConfig, LimitOverrides) {
    Limits l;
    apply_limit_override(l, "enumeration_max=5");
    apply_limit_override(l, "sample_count=7");
    EXPECT_EQ(l.enumeration_max, 5u);
    EXPECT_EQ(l.sample_count, 7u);
    EXPECT_THROW(apply_limit_override(l, "enumeration_max=0"), Error);
    EXPECT_THROW(apply_limit_override(l, "nothing=3"), Error);
    EXPECT_THROW(apply_limit_override(l, "matrix_max"), Error);
}

TEST_F(CliTest, ChainBuildReport) {
    auto cfg = write("a.json", kTwoScales);
    auto r = run({"chain", "build", "-c", cfg});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = Json::parse(r.out);
    EXPECT_EQ(j["schema"], kReportSchema);
    EXPECT_EQ(j["command"], "chain build");
    std::vector<size_t> dims;
    for (const auto& n : j["result"]["nodes"]) dims.push_back(n["dim"].get<size_t>());
    EXPECT_EQ(dims, (std::vector<size_t>{0, 1, 2}));
    EXPECT_EQ(j["result"]["steps"][0]["frak_S"]["radicand"], "100");
    EXPECT_EQ(j["result"]["steps"][1]["frak_S"]["radicand"], "10");
}

TEST_F(CliTest, ChainVerifyExitCodes) {
    auto ok = write("ok.json", kTwoScales);
    auto r = run({"chain", "verify", "-c", ok});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(Json::parse(r.out)["result"]["status"], "verified");
    auto bad = write("bad.json",
                     R"({"n": 2, "generators": [["1","0"],["0","1"]], "S": ["100","10"],
                         "chain": ["ZERO", {"span": [["1","1"]]}, "FULL"]})");
    auto v = run({"chain", "verify", "-c", bad});
    EXPECT_EQ(v.code, 2);
    auto e = Json::parse(v.err);
    EXPECT_EQ(e["error"], "CertificateViolation");
    EXPECT_EQ(e["check"], "chi<=0");
}

TEST_F(CliTest, OperationalErrorsExitOne) {
    EXPECT_EQ(run({"chain", "build", "-c", (dir / "missing.json").string()}).code, 1);
    auto bad = write("bad.json", R"({"n": 1, "generators": [["1"]], "S": ["3"], "epsilon": "1"})");
    auto r = run({"mu", "-c", bad});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(Json::parse(r.err)["error"], "ValidationError");
    auto big = write("big.json", kTwoScales);
    auto g = run({"gamma", "enumerate", "-c", big, "--limit", "enumeration_max=10"});
    EXPECT_EQ(g.code, 1);
    EXPECT_EQ(Json::parse(g.err)["error"], "EnumerationTooLarge");
    EXPECT_EQ(run({"chain"}).code, 1);
    EXPECT_EQ(run({"locus", "probe", "-c", write("nod.json", kTwoScales)}).code, 1);
}

TEST_F(CliTest, LocusSweepCsvShowsMiddleRegime) {
    auto cfg = write("lines.json", kThreeLines);
    auto csv = (dir / "sweep.csv").string();
    auto r = run({"locus", "sweep", "-c", cfg, "--csv", csv});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream in(csv);
    std::vector<std::string> lines;
    for (std::string s; std::getline(in, s);) lines.push_back(s);
    ASSERT_EQ(lines.size(), 7u);
    EXPECT_EQ(lines[0], "D,rank,nullity,lower_0,upper_0,lower_1,upper_1,lower_2,upper_2,achieved");
    auto achieved = [&](size_t k) { return lines[k].substr(lines[k].rfind(',') + 1); };
    EXPECT_EQ(achieved(1), "2");
    EXPECT_EQ(achieved(2), "2");
    EXPECT_EQ(achieved(3), "1");
    EXPECT_EQ(achieved(4), "1");
    EXPECT_EQ(achieved(5), "0");
    EXPECT_EQ(achieved(6), "0");
}

TEST_F(CliTest, PolygonExportCsv) {
    auto cfg = write("a.json", kTwoScales);
    auto out = (dir / "poly.csv").string();
    auto r = run({"polygon", "export", "-c", cfg, "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream in(out);
    std::string header, row0, row1, row2;
    std::getline(in, header);
    std::getline(in, row0);
    std::getline(in, row1);
    std::getline(in, row2);
    EXPECT_EQ(header, "dim,phi_approx,e_1,e_2");
    EXPECT_EQ(row0, "0,0,0,0");
    EXPECT_EQ(row1.substr(0, 2), "1,");
    EXPECT_EQ(row1.substr(row1.size() - 4), ",1,0");
    EXPECT_EQ(row2.substr(row2.size() - 4), ",1,1");
}

TEST_F(CliTest, SeedOverrideIsEchoed) {
    auto cfg = write("lines.json", kThreeLines);
    auto r = run({"locus", "probe", "-c", cfg, "--seed", "77", "--limit", "sample_count=10"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = Json::parse(r.out);
    EXPECT_EQ(j["config"]["seed"], 77);
    EXPECT_EQ(j["provenance"]["seed"], 77);
    EXPECT_EQ(j["config"]["limits"]["sample_count"], 10);
}

TEST_F(CliTest, EveryCommandIsByteIdenticalOnRerun) {
    auto cfg = write("lines.json",
                     R"({"n": 2, "generators": [["1","0"],["0","1"]], "S": ["3","2"], "T": 1, "D": 3, "D_range": [1, 4],
                         "H_prime": {"span": [["1","1"]]}, "lambdas": ["1","2"], "limits": {"sample_count": 30}})");
    for (std::vector<std::string> cmd : {std::vector<std::string>{"chain", "build"}, {"chain", "verify"}, {"mu"},
                                         {"gamma", "enumerate"}, {"gamma", "count"}, {"gamma", "check"},
                                         {"locus", "rank"}, {"locus", "probe"}, {"locus", "sweep"}, {"polygon", "export"}}) {
        cmd.push_back("-c");
        cmd.push_back(cfg);
        auto a = run(cmd), b = run(cmd);
        EXPECT_EQ(a.code, 0) << cmd[0] << " " << a.err;
        EXPECT_EQ(a.out, b.out) << cmd[0];
        EXPECT_FALSE(a.out.empty());
    }
}
