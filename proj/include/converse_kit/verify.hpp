#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "converse_kit/converse.hpp"

namespace converse_kit {

struct SuiteResult {
    std::string suite;
    std::size_t total = 0;
    std::size_t passed = 0;
    double worst_margin = kInfinity;  ///< smallest slack seen; negative means a violation
    std::vector<std::string> failures;  ///< first few failing cases
    Json details = Json::object();

    bool ok() const { return passed == total; }
    /// One line: "<suite>: P/T pass, worst margin X".
    std::string summary() const;
};

/// Seed of the i-th instance drawn from a suite seed (splitmix64).
std::uint64_t instance_seed(std::uint64_t suite_seed, std::size_t index);

/// Random discrete family: M in [2,6] codewords, per-letter alphabet in
/// [2,12], used n in [1,3] times. Some masses are exactly zero.
ChannelFamily random_family(std::uint64_t seed);

/// 20 log-spaced orders lambda in [0.01, 10].
std::vector<double> lambda_grid();

/// theorem1_bound for Q in {uniform, mixture, q*} over lambda_grid() and the
/// optimized lambda, against exact_bayes_error. Tolerance 1e-9.
SuiteResult verify_soundness(std::uint64_t seed, std::size_t count);

/// Fano, the generalized-Fano log M bound (and its M >= 3 simplification)
/// and the inverted generalized-Fano eps on the same random instances.
SuiteResult verify_fano_recovery(std::uint64_t seed, std::size_t count);

/// Closed forms against quadrature and the discrete kernel (relative 1e-6),
/// the Hellinger-KL comparison and the test-advantage identity.
SuiteResult verify_divergence(std::uint64_t seed, std::size_t count);

/// Greedy GV code at (m, d_min), the sparse sampler at n=64, k=4, M=16, and
/// the trimming order statistic on `count` random lists.
SuiteResult verify_packing(std::uint64_t seed, std::size_t count, unsigned m = 12, unsigned d_min = 4);

/// Dispatch by name: soundness, divergence, fano-recovery, packing.
/// Throws ConfigError for an unknown suite.
SuiteResult run_suite(const std::string& name, std::uint64_t seed, std::size_t count, unsigned m = 12,
                      unsigned d_min = 4);

}  // namespace converse_kit
