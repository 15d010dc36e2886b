#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "converse_kit/report_io.hpp"

namespace cli = converse_kit::cli;
using converse_kit::Json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "converse-kit");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override { ::setenv("SOURCE_DATE_EPOCH", "0", 1); }
    void TearDown() override { ::unsetenv("SOURCE_DATE_EPOCH"); }
};

}  // namespace

TEST_F(Cli, BoundPrintsJson) {
    const Result r = run({"bound", "density"});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_GE(j["strong"]["eps_lower"].get<double>(), 0.99);
    EXPECT_EQ(j["manifest"]["timestamp"], "1970-01-01T00:00:00Z");
}

TEST_F(Cli, Deterministic) {
    EXPECT_EQ(run({"bound", "cs", "--k", "64"}).out, run({"bound", "cs", "--k", "64"}).out);
    EXPECT_EQ(run({"pack", "gv", "--m", "10", "--dmin", "3", "--order", "random", "--seed", "4"}).out,
              run({"pack", "gv", "--m", "10", "--dmin", "3", "--order", "random", "--seed", "4"}).out);
}

TEST_F(Cli, SinglePointSweepEqualsBound) {
    const Json bound = Json::parse(run({"bound", "active", "--n", "1e7"}).out);
    const Result sweep = run({"sweep", "active", "--vary", "n", "--values", "1e7"});
    ASSERT_EQ(sweep.code, cli::kOk) << sweep.err;
    std::istringstream in(sweep.out);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    std::getline(in, line);
    const std::string eps_cell = line.substr(line.find(',') + 1, line.find(',', line.find(',') + 1) - line.find(',') - 1);
    EXPECT_EQ(std::stod(eps_cell), bound["strong"]["eps_lower"].get<double>());
}

TEST_F(Cli, ConfigErrorExitCode) {
    const Result r = run({"bound", "active", "--c", "0.6"});
    EXPECT_EQ(r.code, cli::kConfigError);
    EXPECT_NE(r.err.find("c in (0, 1/2]"), std::string::npos);
    EXPECT_EQ(run({"bound", "nosuch"}).code, cli::kConfigError);
    EXPECT_EQ(run({"sweep", "cs", "--vary", "bogus", "--values", "1"}).code, cli::kConfigError);
    EXPECT_EQ(run({"verify", "nosuch"}).code, cli::kConfigError);
    EXPECT_EQ(run({"bound", "cs", "--k", "abc"}).code, cli::kConfigError);
}

TEST_F(Cli, IoErrorExitCode) {
    EXPECT_EQ(run({"bound", "cs", "--out", "/nonexistent-dir/x.json"}).code, cli::kIoError);
}

TEST_F(Cli, SuiteFailureExitCode) {
    // Eight 1-sparse unit vectors is the most that fits in R^4 at squared distance 1/2.
    EXPECT_EQ(run({"pack", "cs", "--n", "4", "--k", "1", "--count", "20", "--max-attempts", "200"}).code,
              cli::kSuiteFailure);
}

TEST_F(Cli, VerifyWritesJson) {
    const auto path = std::filesystem::temp_directory_path() / "converse_kit_cli_verify.json";
    const Result r = run({"verify", "soundness", "--count", "5", "--json", path.string()});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    std::ifstream in(path);
    const Json j = Json::parse(in);
    EXPECT_EQ(j["total"], 5);
    std::filesystem::remove(path);
}

TEST_F(Cli, SweepWritesFile) {
    const auto path = std::filesystem::temp_directory_path() / "converse_kit_cli_sweep.csv";
    const Result r = run({"sweep", "cs", "--vary", "k", "--from", "8", "--to", "4096", "--points", "10", "--log",
                          "--out", path.string()});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    EXPECT_NE(r.out.find("wrote 10 rows"), std::string::npos);
    std::ifstream in(path);
    std::size_t lines = 0;
    for (std::string line; std::getline(in, line);) ++lines;
    EXPECT_EQ(lines, 12u);
    std::filesystem::remove(path);
}

TEST_F(Cli, HelpExitsZero) {
    EXPECT_EQ(run({"--help"}).code, cli::kOk);
}

TEST_F(Cli, InvalidSampleSize) {
    EXPECT_EQ(run({"bound", "density", "--n", "0"}).code, cli::kConfigError);
}

TEST_F(Cli, VerifySuitesFromCommandLine) {
    EXPECT_EQ(run({"verify", "divergence", "--count", "50"}).code, cli::kOk);
    const Result packing = run({"verify", "packing", "--m", "12", "--dmin", "4", "--count", "20"});
    EXPECT_EQ(packing.code, cli::kOk) << packing.out;
}

namespace {

std::vector<std::vector<double>> csv_rows(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream cells(line);
        for (std::string cell; std::getline(cells, cell, ',');) row.push_back(cell.empty() ? -1.0 : std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_F(Cli, DensitySweepReachesStrongConverse) {
    const Result r = run({"sweep", "density", "--vary", "n", "--from", "1e6", "--to", "1e14", "--points", "9", "--log"});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 9u);
    EXPECT_GE(rows.back()[1], 0.99);
}

TEST_F(Cli, CsLambdaSweepRatioIsUnimodal) {
    const Result r = run({"sweep", "cs", "--vary", "lambda", "--from", "0.005", "--to", "1", "--points", "25", "--log"});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    const auto rows = csv_rows(r.out);
    std::size_t peak = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i][5] > rows[peak][5]) peak = i;
    for (std::size_t i = 1; i <= peak; ++i) EXPECT_GE(rows[i][5], rows[i - 1][5]);
    for (std::size_t i = peak + 1; i < rows.size(); ++i) EXPECT_LE(rows[i][5], rows[i - 1][5]);
}
