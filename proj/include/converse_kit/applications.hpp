#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "converse_kit/converse.hpp"

namespace converse_kit {

/// Density estimation over perturbed-uniform densities on [0,1].
struct DensityConfig {
    double n = 1e11;
    double nu = 1.0;
    double c = 0.1;
    double a = 0.5;      ///< integral of g^2
    double c0 = 0.082;   ///< packing exponent: M >= exp(c0 m)
    std::optional<double> c_g;  ///< c sup|g|; defaults to c (sup|g| = 1)
    /// When set, nu is replaced by (c0/(c^2 a))^{1/5} (1 - n^{-1/kappa_sched}).
    std::optional<double> kappa_sched;

    double effective_c_g() const { return c_g.value_or(c); }
    double effective_nu() const;
    /// Throws ConfigError naming the violated inequality.
    void validate() const;
    Json to_json() const;
};

/// Active learning of boundary fragments.
struct ActiveConfig {
    double n = 1e6;
    double d = 2;
    double alpha = 1.0;
    double kappa = 2.0;
    double L = 1.0;
    double c = 0.1;
    double H = 1.0;
    double nu = 0.5;
    double lambda = 1.0;

    double rho() const { return (d - 1.0) / alpha; }
    void validate() const;
    Json to_json() const;
};

/// Compressed sensing of k-sparse vectors with Gaussian noise.
struct CsConfig {
    double n = 1e6;
    double k = 128;
    double sigma_sq = 1.0;
    double frob_norm_sq = 1e6;  ///< ||A||_F^2
    double lambda = 0.05;
    double Delta = 0.05;
    double beta = 0.01;
    std::optional<double> delta_m;  ///< defaults to 1 / log M

    /// log M = (k/4) log(n/k).
    double log_m() const;
    double effective_delta_m() const;
    void validate() const;
    Json to_json() const;
};

struct ComparisonReport {
    BoundReport strong;
    BoundReport fano;
    double asymptote = 0.0;
    std::optional<double> ratio;  ///< strong.risk_lower / fano.risk_lower when the latter is positive
};

ComparisonReport density_bound(const DensityConfig& cfg);
ComparisonReport active_bound(const ActiveConfig& cfg);
ComparisonReport cs_bound(const CsConfig& cfg);

// Pieces exposed for cross-checks.

/// 1 - 2 exp(-(m/2)(c0 - c^2 a n / m^5)) at real bandwidth m.
double density_eps_at_bandwidth(const DensityConfig& cfg, double m);

/// 1 - ((1+l)/l^{l/(1+l)}) exp((l/(1+l))(16 c^2 beta_m^{2(kappa-1)} n/(1 - 2c beta_m) - m^{d-1} log2/8))
/// with beta_m = L H m^{-alpha}.
double active_eps_at_bandwidth(const ActiveConfig& cfg, double m);

/// min((4c/(kappa 2^kappa)) psi^kappa, psi).
double active_excess_risk_floor(const ActiveConfig& cfg, double psi);

using AppConfig = std::variant<DensityConfig, ActiveConfig, CsConfig>;

std::string app_name(const AppConfig& cfg);
ComparisonReport evaluate(const AppConfig& cfg);

/// Copy of `cfg` with the named field set. Throws ConfigError for an unknown name.
AppConfig with_parameter(const AppConfig& cfg, const std::string& name, double value);

/// Parameter names accepted by with_parameter for this application.
std::vector<std::string> parameter_names(const AppConfig& cfg);

/// One report per value, in the order given. Evaluation may run in parallel.
std::vector<ComparisonReport> sweep(const AppConfig& cfg, const std::string& vary, std::span<const double> values);

/// Index of the largest strong.risk_lower; empty for an empty list.
std::optional<std::size_t> argmax_strong_risk(std::span<const ComparisonReport> reports);

}  // namespace converse_kit
