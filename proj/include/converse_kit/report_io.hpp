#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "converse_kit/applications.hpp"
#include "converse_kit/converse.hpp"

namespace converse_kit {

inline constexpr const char* kVersion = "0.1.0";

/// Provenance embedded in every output file.
struct RunManifest {
    std::string command;
    Json config = Json::object();
    std::optional<std::uint64_t> seed;
    std::string version = kVersion;
    std::string timestamp;  ///< ISO-8601 UTC

    /// Timestamp from SOURCE_DATE_EPOCH when set, else the current time.
    static RunManifest make(std::string command, Json config, std::optional<std::uint64_t> seed = std::nullopt);
    Json to_json() const;
};

/// {method, eps_lower, eps_raw, risk_lower, lambda_star, params}. Non-finite
/// numbers and absent optionals serialize as null.
Json to_json(const BoundReport& report);
Json to_json(const ComparisonReport& report, const RunManifest& manifest);

/// Inverse of to_json(BoundReport); null eps_raw reads back as -inf.
BoundReport bound_report_from_json(const Json& j);

/// Indented JSON text with a trailing newline.
std::string dump(const Json& j);

inline constexpr const char* kSweepColumns = "value,strong_eps,fano_eps,strong_risk,fano_risk,ratio";

/// '#'-prefixed manifest line, the header row, then one row per report with
/// %.17g numbers. Absent or non-finite values are empty cells.
std::string sweep_csv(std::span<const double> values, std::span<const ComparisonReport> reports,
                      const RunManifest& manifest);

/// Writes via a temporary file in the same directory and rename. Throws IoError.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace converse_kit
