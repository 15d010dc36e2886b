#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "converse_kit/divergence.hpp"
#include "converse_kit/pmf.hpp"

namespace converse_kit {

using Json = nlohmann::ordered_json;

/// Which output law plays Q_Y in the binary test "theta independent of Y".
class QChoice {
public:
    enum class Kind { uniform, mixture, optimal, explicit_pmf };

    static QChoice uniform() { return QChoice(Kind::uniform); }
    static QChoice mixture() { return QChoice(Kind::mixture); }
    /// Recomputed for each order via optimal_q_discrete.
    static QChoice optimal() { return QChoice(Kind::optimal); }
    static QChoice explicit_pmf(DiscretePmf q) { return QChoice(Kind::explicit_pmf, std::move(q)); }

    Kind kind() const { return kind_; }
    const std::optional<DiscretePmf>& pmf() const { return pmf_; }
    std::string name() const;

private:
    explicit QChoice(Kind kind, std::optional<DiscretePmf> pmf = std::nullopt)
        : kind_(kind), pmf_(std::move(pmf)) {}
    Kind kind_;
    std::optional<DiscretePmf> pmf_;
};

/// M conditional laws P_{Y|theta_i} over one alphabet plus the choice of Q_Y.
class ChannelFamily {
public:
    explicit ChannelFamily(std::vector<DiscretePmf> conditionals, QChoice q = QChoice::mixture());

    std::size_t m_codewords() const { return conditionals_.size(); }
    std::size_t alphabet_size() const { return conditionals_.front().support_size(); }
    const std::vector<DiscretePmf>& conditionals() const { return conditionals_; }
    const QChoice& q_choice() const { return q_; }

    ChannelFamily with_q(QChoice q) const { return ChannelFamily(conditionals_, std::move(q)); }
    /// Each codeword used n times over a memoryless channel. Throws CapabilityError
    /// when the product alphabet would exceed `max_outcomes`.
    ChannelFamily iid_power(unsigned n, std::size_t max_outcomes = 1'000'000) const;

    /// Q_Y resolved for a given order (only the optimal choice depends on it).
    DiscretePmf reference(RenyiOrder order) const;

private:
    std::vector<DiscretePmf> conditionals_;
    QChoice q_;
};

/// Gaussian location family N(A theta_i, sigma^2 I) against Q = N(0, sigma^2 I).
struct GaussianChannelFamily {
    std::vector<GaussianShiftPair> codewords;
};

enum class BoundMethod { theorem1, fano, generalized_fano };
std::string to_string(BoundMethod method);

/// One bound evaluation. eps_lower is clamped into [0,1]; eps_raw keeps the
/// unclamped value. `params` echoes inputs and carries diagnostics.
struct BoundReport {
    BoundMethod method = BoundMethod::theorem1;
    double eps_lower = 0.0;
    double eps_raw = 0.0;
    std::optional<double> lambda_star;
    std::optional<double> gamma_star;
    std::optional<double> risk_lower;
    Json params = Json::object();

    bool has_flag(const std::string& flag) const;
    void add_flag(const std::string& flag);
};

double clamp_probability(double raw);

// --- Renyi-divergence converse ----------------------------------------------

/// log of (1/M) sum_i exp(lambda D_i) for Renyi divergences D_i of order 1+lambda.
double theorem1_log_bracket(std::span<const double> divergences, RenyiOrder order);

/// 1 - (1+lambda) (lambda M)^{-lambda/(1+lambda)} exp(log_bracket / (1+lambda)),
/// evaluated in log space. `log_m` is log M so that astronomically large
/// codebooks can be handled.
double theorem1_eps_raw(double log_bracket, double log_m, RenyiOrder order);

/// Converse report from per-codeword divergences; M = divergences.size().
BoundReport theorem1_from_divergences(std::span<const double> divergences, RenyiOrder order);

/// Converse report for a discrete family. When Q fails to dominate some
/// conditional the report is vacuous (eps 0) and flagged "domination_failure".
BoundReport theorem1_bound(const ChannelFamily& family, RenyiOrder order);
BoundReport theorem1_bound(const GaussianChannelFamily& family, RenyiOrder order);

/// Maximize eps_raw over lambda in [lambda_lo, lambda_hi]: a 64-point
/// log-spaced pre-scan, then 60 golden-section steps on log lambda around the
/// best scan point. The report is flagged "lambda_interior" or "lambda_at_boundary".
BoundReport optimize_lambda(const std::function<BoundReport(RenyiOrder)>& evaluate, double lambda_lo = 1e-6,
                            double lambda_hi = 10.0);
BoundReport optimize_lambda(const ChannelFamily& family, double lambda_lo = 1e-6, double lambda_hi = 10.0);

/// For a fixed gamma, the error lower bound implied by
/// 1/M >= (1-eps)/gamma - bracket / gamma^{1+lambda}, i.e. 1 - gamma/M - bracket gamma^{-lambda}.
double gamma_variational_eps(double log_bracket, std::size_t m_codewords, RenyiOrder order, double gamma);
double gamma_variational_bound(const ChannelFamily& family, RenyiOrder order, double gamma);

/// Stationary point (lambda * bracket * M)^{1/(1+lambda)} of the gamma form.
double optimal_gamma(double log_bracket, std::size_t m_codewords, RenyiOrder order);

struct OptimalQ {
    DiscretePmf q;
    double normalizer;  ///< C = sum_y ((1/M) sum_i p_i(y)^{1+lambda})^{1/(1+lambda)}
};

/// q*(y) proportional to ((1/M) sum_i p_i(y)^{1+lambda})^{1/(1+lambda)}.
OptimalQ optimal_q_discrete(std::span<const DiscretePmf> conditionals, RenyiOrder order);

// --- Fano-type bounds ------------------------------------------------------

/// (1/M) sum_i D(P_i || Pbar) = I(theta; Y) under a uniform prior.
double mutual_information_to_mixture(std::span<const DiscretePmf> conditionals);

/// eps >= 1 - (log 2 + avg_kl) / log M. Throws DomainError for M < 2.
BoundReport fano_bound(std::size_t m_codewords, double avg_kl_to_mixture);
BoundReport fano_bound(const ChannelFamily& family);

/// Right side of log M <= (1+1/l) log((1+l)/(1-eps)) - log l + (1/l) log(1 + l kappa(l,t) I).
double generalized_fano_logM_bound(RenyiOrder order, double t, double mutual_info, double eps);

/// Right side of log M <= 1 + I / (l^l (1-eps)^{1+l} / (1+l)^{1+l} - M^{-l});
/// empty when the denominator is not positive.
std::optional<double> generalized_fano_power_rhs(RenyiOrder order, std::size_t m_codewords, double eps,
                                                   double mutual_info);

/// Smallest eps consistent with generalized_fano_logM_bound for the family,
/// using Q = mixture, t = max_i esssup dP_i/dPbar and I = I(theta; Y).
BoundReport generalized_fano_bound(const ChannelFamily& family, RenyiOrder order);

// --- Risk assembly ---------------------------------------------------------

/// Loss shape w with scale constants A and psi_n.
class LossSpec {
public:
    enum class Kind { identity, power, indicator };

    static LossSpec identity(double a, double psi_n);
    static LossSpec power(double exponent, double a, double psi_n);
    static LossSpec indicator(double threshold, double a, double psi_n);

    Kind kind() const { return kind_; }
    double a() const { return a_; }
    double psi_n() const { return psi_n_; }
    double shape_parameter() const { return shape_; }
    double w(double u) const;

private:
    LossSpec(Kind kind, double shape, double a, double psi_n);
    Kind kind_;
    double shape_;
    double a_;
    double psi_n_;
};

/// w(A psi_n) * eps: the minimax-risk lower bound for the loss w(d) given
/// packing separation 2 A psi_n and decoding error at least eps.
double risk_from_eps(const LossSpec& loss, double eps_lower);

}  // namespace converse_kit
