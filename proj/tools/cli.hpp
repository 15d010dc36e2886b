#pragma once

#include <iosfwd>

namespace converse_kit::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kSuiteFailure = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kIoError = 3;

/// Entry point shared by the executable and the in-process tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace converse_kit::cli
