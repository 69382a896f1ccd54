#include "edgejump/cli/app.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace edgejump;

namespace {

struct Out {
    int code;
    std::string out, err;
};

Out call(std::vector<std::string> args) {
    args.insert(args.begin(), "edgejump");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o, e;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
    return {code, o.str(), e.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        rows.push_back(cells);
    }
    return rows;
}

std::string tmp(const std::string& name) { return (std::filesystem::temp_directory_path() / ("edgejump_cli_" + name)).string(); }

}  // namespace

TEST(Cli, HankelDumpHasGaussianH2) {
    const Out r = call({"hankel", "--n", "2", "--beta", "0", "--no-timestamp"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.front().size(), 16u);
    EXPECT_EQ(rows.front()[0], "label");
    bool found = false;
    for (const auto& row : rows)
        if (row[0] == "hankel/H" && row[1] == "2") {
            EXPECT_NEAR(std::stod(row[8]), std::numbers::pi / 2, 1e-15);
            found = true;
        }
    EXPECT_TRUE(found);
}

TEST(Cli, FiniteNIdentityExample) {
    const Out r = call({"verify", "finite-n-identity", "--n", "12", "--beta-im", "0.4", "--lambda0", "0.5", "--bits", "384", "--no-timestamp"});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_LE(std::stod(rows[1][12]), 1e-18);
    EXPECT_EQ(rows[1][15], "PASS");
}

TEST(Cli, TwIdentityExample) {
    const Out r = call({"verify", "tw-identity", "--kappa", "0.7", "--t-min", "-8", "--tol", "1e-10", "--no-timestamp"});
    EXPECT_EQ(r.code, 0) << r.err;
    double worst = 0;
    for (const auto& row : parse_csv(r.out))
        if (row[0] == "tw-identity") worst = std::max(worst, std::stod(row[12]));
    EXPECT_LE(worst, 1e-8);
}

TEST(Cli, InvalidConfigExitsTwo) {
    EXPECT_EQ(call({"hankel", "--n", "2", "--beta", "0", "--kappa", "0.5"}).code, 2);
    EXPECT_EQ(call({"hankel", "--n", "2"}).code, 2);
    EXPECT_EQ(call({"verify", "thm1.2", "--beta-im", "0.4", "--n", "40,20"}).code, 2);
    EXPECT_EQ(call({"verify", "nonsense", "--beta", "0"}).code, 2);
    EXPECT_EQ(call({"hankel", "--n", "2", "--beta", "0.7"}).code, 2);
    EXPECT_EQ(call({"hankel", "--n", "2", "--beta", "0", "--format", "xml"}).code, 2);
    EXPECT_EQ(call({"mc", "gue", "--s", "2"}).code, 2);
}

TEST(Cli, FailingVerdictExitsOne) {
    // 80 bits cannot carry a 1e-18 residual at n = 20
    const Out r = call({"verify", "finite-n-identity", "--n", "20", "--beta-im", "0.4", "--lambda0", "0.5", "--bits", "80", "--no-timestamp"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("FAIL"), std::string::npos);
}

TEST(Cli, TimestampLineIsSuppressible) {
    const Out with = call({"hankel", "--n", "1", "--beta", "0"});
    const Out without = call({"hankel", "--n", "1", "--beta", "0", "--no-timestamp"});
    EXPECT_EQ(with.out.rfind("# generated ", 0), 0u);
    EXPECT_EQ(with.out.substr(with.out.find('\n') + 1), without.out);
}

TEST(Cli, ReportsAreByteIdentical) {
    const std::vector<std::string> args{"mc", "gue", "--n", "6", "--lambda0", "1.5", "--trials", "5000", "--seed", "7", "--no-timestamp"};
    const Out a = call(args), b = call(args);
    EXPECT_EQ(a.out, b.out);
    setenv("EDGEJUMP_THREADS", "2", 1);
    const Out c = call(args);
    unsetenv("EDGEJUMP_THREADS");
    EXPECT_EQ(a.out, c.out);
}

TEST(Cli, ConfigFileWithFlagOverride) {
    const std::string cfg = tmp("config.json");
    std::ofstream(cfg) << R"({"n": 3, "beta": 0.0, "lambda0": 0.2, "format": "json"})";
    const Out a = call({"hankel", "--config", cfg});
    ASSERT_EQ(a.code, 0) << a.err;
    const auto j = nlohmann::json::parse(a.out);
    ASSERT_TRUE(j.is_array());
    EXPECT_EQ(j.size(), 16u);
    EXPECT_EQ(j[0]["label"], "hankel/H");
    EXPECT_DOUBLE_EQ(j[0]["lambda0"].get<double>(), 0.2);

    const Out b = call({"hankel", "--config", cfg, "--n", "2", "--format", "csv", "--no-timestamp"});
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(parse_csv(b.out).size(), 1u + 12u);
    std::filesystem::remove(cfg);
}

TEST(Cli, OutputSummaryAndSeries) {
    const std::string out = tmp("report.csv"), series = tmp("series.csv");
    const Out r = call({"fredholm", "--kappa", "0.5", "--t-min", "-2", "--t-max", "1", "--t-step", "0.5", "-o", out, "--series", series,
                        "--no-timestamp"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream rf(out), sf(series), jf(out + ".summary.json");
    std::stringstream rs, ss;
    rs << rf.rdbuf();
    ss << sf.rdbuf();
    EXPECT_EQ(parse_csv(rs.str()).size(), 1u + 7u);
    const auto srows = parse_csv(ss.str());
    ASSERT_EQ(srows.size(), 1u + 7u);
    EXPECT_EQ(srows[0][0], "t");
    const auto summary = nlohmann::json::parse(jf);
    EXPECT_EQ(summary["verdict"], "PASS");
    for (const auto& p : {out, series, out + ".summary.json"}) std::filesystem::remove(p);
}

TEST(Cli, PainleveDumpListsPoles) {
    const Out r = call({"painleve", "--kappa", "1.5", "--t-min", "-6", "--t-max", "2", "--no-timestamp"});
    ASSERT_EQ(r.code, 0) << r.err;
    int poles = 0;
    for (const auto& row : parse_csv(r.out)) poles += row[0] == "painleve/pole";
    EXPECT_GE(poles, 1);
}

TEST(Cli, KappaAndBetaAreInterchangeable) {
    const cplx beta(0, 0.4);
    const cplx kappa = kappa_from_beta(beta);
    const Out a = call({"verify", "qn-identity", "--n", "6", "--beta-im", "0.4", "--lambda0", "1.1", "--no-timestamp"});
    const Out b = call({"verify", "qn-identity", "--n", "6", "--kappa", cli::num(kappa.real()), "--kappa-im", cli::num(kappa.imag()),
                        "--lambda0", "1.1", "--no-timestamp"});
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(b.code, 0);
    const auto ra = parse_csv(a.out), rb = parse_csv(b.out);
    EXPECT_NEAR(std::stod(ra[1][5]), std::stod(rb[1][5]), 1e-12);
}
