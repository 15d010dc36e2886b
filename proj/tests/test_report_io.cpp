#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "converse_kit/errors.hpp"
#include "converse_kit/report_io.hpp"

using namespace converse_kit;

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(ReportJson, FieldNamesAndOrder) {
    const Json j = to_json(density_bound(DensityConfig{}).strong);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    EXPECT_EQ(keys, (std::vector<std::string>{"method", "eps_lower", "eps_raw", "risk_lower", "lambda_star", "params"}));
    EXPECT_EQ(j["method"], "theorem1");
}

TEST(ReportJson, NonFiniteBecomesNull) {
    BoundReport r;
    r.eps_raw = -kInfinity;
    const Json j = to_json(r);
    EXPECT_TRUE(j["eps_raw"].is_null());
    EXPECT_TRUE(j["risk_lower"].is_null());
    EXPECT_TRUE(j["lambda_star"].is_null());
    EXPECT_EQ(bound_report_from_json(j).eps_raw, -kInfinity);
}

TEST(ReportJson, RoundTrip) {
    const BoundReport r = active_bound(ActiveConfig{}).strong;
    const BoundReport back = bound_report_from_json(Json::parse(dump(to_json(r))));
    EXPECT_EQ(back.method, r.method);
    EXPECT_EQ(back.eps_raw, r.eps_raw);
    EXPECT_EQ(back.eps_lower, r.eps_lower);
    EXPECT_EQ(back.risk_lower, r.risk_lower);
    EXPECT_EQ(back.lambda_star, r.lambda_star);
    EXPECT_EQ(back.params, r.params);
}

TEST(ReportJson, ComparisonIncludesManifest) {
    const RunManifest manifest = RunManifest::make("bound cs", CsConfig{}.to_json(), 3);
    const Json j = to_json(cs_bound(CsConfig{}), manifest);
    for (const char* key : {"strong", "fano", "asymptote", "ratio", "manifest"}) EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["manifest"]["seed"], 3);
    EXPECT_EQ(j["manifest"]["version"], kVersion);
    EXPECT_EQ(dump(j).back(), '\n');
}

TEST(Manifest, SourceDateEpoch) {
    ::setenv("SOURCE_DATE_EPOCH", "0", 1);
    EXPECT_EQ(RunManifest::make("x", Json::object()).timestamp, "1970-01-01T00:00:00Z");
    ::setenv("SOURCE_DATE_EPOCH", "86401", 1);
    EXPECT_EQ(RunManifest::make("x", Json::object()).timestamp, "1970-01-02T00:00:01Z");
    ::unsetenv("SOURCE_DATE_EPOCH");
    EXPECT_EQ(RunManifest::make("x", Json::object()).timestamp.size(), 20u);
}

TEST(SweepCsv, Layout) {
    const std::vector<double> values{64, 128};
    const auto reports = sweep(CsConfig{}, "k", values);
    const std::string csv = sweep_csv(values, reports, RunManifest::make("sweep", Json::object()));
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line.rfind("# manifest {", 0), 0u);
    std::getline(in, line);
    EXPECT_EQ(line, kSweepColumns);
    std::getline(in, line);
    EXPECT_EQ(line.substr(0, 3), "64,");
    std::getline(in, line);
    const double strong_eps = std::stod(line.substr(line.find(',') + 1));
    EXPECT_EQ(strong_eps, reports[1].strong.eps_lower);
    EXPECT_FALSE(std::getline(in, line));
}

TEST(SweepCsv, MissingRatioIsEmptyCell) {
    CsConfig cfg;
    cfg.k = 4;
    cfg.n = 20;
    const std::vector<double> values{20};
    const auto reports = sweep(cfg, "n", values);
    ASSERT_FALSE(reports[0].ratio.has_value());
    const std::string csv = sweep_csv(values, reports, RunManifest::make("sweep", Json::object()));
    EXPECT_EQ(csv.substr(csv.size() - 2), ",\n");
}

TEST(WriteAtomic, WritesAndReplaces) {
    const auto dir = std::filesystem::temp_directory_path() / "converse_kit_io_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "out.json";
    write_atomic(path.string(), "first\n");
    write_atomic(path.string(), "second\n");
    EXPECT_EQ(read_file(path), "second\n");
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
    EXPECT_EQ(files, 1u);
    std::filesystem::remove_all(dir);
}

TEST(WriteAtomic, MissingDirectoryThrows) {
    EXPECT_THROW(write_atomic("/nonexistent-dir/x/out.json", "x"), IoError);
}
