#include "converse_kit/report_io.hpp"

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "converse_kit/errors.hpp"

namespace converse_kit {

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json optional_number(const std::optional<double>& v) { return v ? number_or_null(*v) : Json(nullptr); }

std::string iso_utc(std::time_t t) {
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string csv_cell(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v)) return {};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    return buf;
}

}  // namespace

RunManifest RunManifest::make(std::string command, Json config, std::optional<std::uint64_t> seed) {
    RunManifest m;
    m.command = std::move(command);
    m.config = std::move(config);
    m.seed = seed;
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        char* end = nullptr;
        const long long v = std::strtoll(epoch, &end, 10);
        if (end != epoch && *end == '\0') t = static_cast<std::time_t>(v);
    }
    m.timestamp = iso_utc(t);
    return m;
}

Json RunManifest::to_json() const {
    Json j;
    j["command"] = command;
    j["config"] = config;
    j["seed"] = seed ? Json(*seed) : Json(nullptr);
    j["version"] = version;
    j["timestamp"] = timestamp;
    return j;
}

Json to_json(const BoundReport& report) {
    Json j;
    j["method"] = to_string(report.method);
    j["eps_lower"] = report.eps_lower;
    j["eps_raw"] = number_or_null(report.eps_raw);
    j["risk_lower"] = optional_number(report.risk_lower);
    j["lambda_star"] = optional_number(report.lambda_star);
    Json params = report.params;
    if (report.gamma_star) params["gamma_star"] = number_or_null(*report.gamma_star);
    j["params"] = std::move(params);
    return j;
}

Json to_json(const ComparisonReport& report, const RunManifest& manifest) {
    Json j;
    j["strong"] = to_json(report.strong);
    j["fano"] = to_json(report.fano);
    j["asymptote"] = number_or_null(report.asymptote);
    j["ratio"] = optional_number(report.ratio);
    j["manifest"] = manifest.to_json();
    return j;
}

BoundReport bound_report_from_json(const Json& j) {
    BoundReport r;
    const std::string method = j.at("method").get<std::string>();
    if (method == "theorem1") r.method = BoundMethod::theorem1;
    else if (method == "fano") r.method = BoundMethod::fano;
    else if (method == "generalized_fano") r.method = BoundMethod::generalized_fano;
    else throw DomainError("bound_report_from_json: unknown method '" + method + "'");
    r.eps_lower = j.at("eps_lower").get<double>();
    r.eps_raw = j.at("eps_raw").is_null() ? -kInfinity : j.at("eps_raw").get<double>();
    if (!j.at("risk_lower").is_null()) r.risk_lower = j.at("risk_lower").get<double>();
    if (!j.at("lambda_star").is_null()) r.lambda_star = j.at("lambda_star").get<double>();
    r.params = j.at("params");
    if (r.params.contains("gamma_star")) {
        if (!r.params["gamma_star"].is_null()) r.gamma_star = r.params["gamma_star"].get<double>();
        r.params.erase("gamma_star");
    }
    return r;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string sweep_csv(std::span<const double> values, std::span<const ComparisonReport> reports,
                      const RunManifest& manifest) {
    if (values.size() != reports.size()) throw DomainError("sweep_csv: values and reports differ in length");
    std::ostringstream out;
    out << "# manifest " << manifest.to_json().dump() << "\n";
    out << kSweepColumns << "\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& r = reports[i];
        out << csv_cell(values[i]) << ',' << csv_cell(r.strong.eps_lower) << ',' << csv_cell(r.fano.eps_lower) << ','
            << csv_cell(r.strong.risk_lower) << ',' << csv_cell(r.fano.risk_lower) << ',' << csv_cell(r.ratio) << "\n";
    }
    return out.str();
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing: " + std::strerror(errno));
        out << content;
        out.flush();
        if (!out) {
            std::error_code ignored;
            fs::remove(tmp, ignored);
            throw IoError("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw IoError("cannot rename onto '" + path + "': " + ec.message());
    }
}

}  // namespace converse_kit
