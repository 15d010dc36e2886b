#include "converse_kit/converse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "converse_kit/errors.hpp"

namespace converse_kit {

std::string QChoice::name() const {
    switch (kind_) {
        case Kind::uniform: return "uniform";
        case Kind::mixture: return "mixture";
        case Kind::optimal: return "optimal_qstar";
        case Kind::explicit_pmf: return "explicit";
    }
    return "unknown";
}

ChannelFamily::ChannelFamily(std::vector<DiscretePmf> conditionals, QChoice q)
    : conditionals_(std::move(conditionals)), q_(std::move(q)) {
    if (conditionals_.empty()) throw DomainError("ChannelFamily: needs at least one codeword");
    const std::size_t k = conditionals_.front().support_size();
    for (const auto& p : conditionals_)
        if (p.support_size() != k) throw DomainError("ChannelFamily: conditionals must share one alphabet");
    if (q_.kind() == QChoice::Kind::explicit_pmf && q_.pmf()->support_size() != k)
        throw DomainError("ChannelFamily: explicit Q has the wrong alphabet");
}

ChannelFamily ChannelFamily::iid_power(unsigned n, std::size_t max_outcomes) const {
    if (n == 0) throw DomainError("ChannelFamily::iid_power: n must be positive");
    const double outcomes = std::pow(static_cast<double>(alphabet_size()), n);
    if (outcomes > static_cast<double>(max_outcomes))
        throw CapabilityError("ChannelFamily::iid_power: product alphabet exceeds " + std::to_string(max_outcomes) +
                              " outcomes");
    std::vector<DiscretePmf> powered;
    powered.reserve(conditionals_.size());
    for (const auto& p : conditionals_) powered.push_back(p.iid_power(n));
    QChoice q = q_;
    if (q.kind() == QChoice::Kind::explicit_pmf) q = QChoice::explicit_pmf(q.pmf()->iid_power(n));
    return ChannelFamily(std::move(powered), std::move(q));
}

DiscretePmf ChannelFamily::reference(RenyiOrder order) const {
    switch (q_.kind()) {
        case QChoice::Kind::uniform: return DiscretePmf::uniform(alphabet_size());
        case QChoice::Kind::mixture: return mixture(conditionals_);
        case QChoice::Kind::optimal: return optimal_q_discrete(conditionals_, order).q;
        case QChoice::Kind::explicit_pmf: return *q_.pmf();
    }
    throw DomainError("ChannelFamily: unknown Q choice");
}

std::string to_string(BoundMethod method) {
    switch (method) {
        case BoundMethod::theorem1: return "theorem1";
        case BoundMethod::fano: return "fano";
        case BoundMethod::generalized_fano: return "generalized_fano";
    }
    return "unknown";
}

bool BoundReport::has_flag(const std::string& flag) const {
    if (!params.contains("diagnostics")) return false;
    for (const auto& f : params["diagnostics"])
        if (f == flag) return true;
    return false;
}

void BoundReport::add_flag(const std::string& flag) {
    if (has_flag(flag)) return;
    params["diagnostics"].push_back(flag);
}

double clamp_probability(double raw) {
    if (std::isnan(raw)) return 0.0;
    return std::clamp(raw, 0.0, 1.0);
}

// --- Renyi-divergence converse ----------------------------------------------

double theorem1_log_bracket(std::span<const double> divergences, RenyiOrder order) {
    if (divergences.empty()) throw DomainError("theorem1_log_bracket: no divergences");
    const double l = order.lambda();
    double peak = -kInfinity;
    for (double d : divergences) {
        if (std::isnan(d) || d < 0.0) throw DomainError("theorem1_log_bracket: divergences must be >= 0");
        peak = std::max(peak, l * d);
    }
    if (std::isinf(peak)) return kInfinity;
    double acc = 0.0;
    for (double d : divergences) acc += std::exp(l * d - peak);
    return peak + std::log(acc / static_cast<double>(divergences.size()));
}

double theorem1_eps_raw(double log_bracket, double log_m, RenyiOrder order) {
    const double l = order.lambda();
    if (std::isinf(log_bracket)) return -kInfinity;
    const double log_term = std::log1p(l) - (l / (1.0 + l)) * (std::log(l) + log_m) + log_bracket / (1.0 + l);
    return 1.0 - std::exp(log_term);
}

namespace {

BoundReport assemble_theorem1(double log_bracket, std::size_t m, RenyiOrder order) {
    BoundReport r;
    r.method = BoundMethod::theorem1;
    r.lambda_star = order.lambda();
    r.params["m_codewords"] = m;
    r.params["lambda"] = order.lambda();
    r.params["diagnostics"] = Json::array();
    if (std::isinf(log_bracket)) {
        r.eps_raw = -kInfinity;
        r.eps_lower = 0.0;
        r.add_flag("domination_failure");
        return r;
    }
    r.params["log_bracket"] = log_bracket;
    r.eps_raw = theorem1_eps_raw(log_bracket, std::log(static_cast<double>(m)), order);
    const double g = optimal_gamma(log_bracket, m, order);
    if (std::isfinite(g)) r.gamma_star = g;
    if (m == 1) {
        r.eps_lower = 0.0;
        r.add_flag("single_codeword");
    } else {
        r.eps_lower = clamp_probability(r.eps_raw);
    }
    if (r.eps_raw < 0.0) r.add_flag("clamped");
    return r;
}

}  // namespace

BoundReport theorem1_from_divergences(std::span<const double> divergences, RenyiOrder order) {
    return assemble_theorem1(theorem1_log_bracket(divergences, order), divergences.size(), order);
}

BoundReport theorem1_bound(const ChannelFamily& family, RenyiOrder order) {
    const DiscretePmf q = family.reference(order);
    const double l = order.lambda();
    // log (1/M) sum_i exp(log_moment_i), without materializing divergences (they may be +inf).
    std::vector<double> log_moments;
    log_moments.reserve(family.m_codewords());
    for (const auto& p : family.conditionals()) log_moments.push_back(log_renyi_moment(p.probs(), q.probs(), l));
    double peak = *std::max_element(log_moments.begin(), log_moments.end());
    double log_bracket = peak;
    if (std::isfinite(peak)) {
        double acc = 0.0;
        for (double v : log_moments) acc += std::exp(v - peak);
        log_bracket = peak + std::log(acc / static_cast<double>(log_moments.size()));
    }
    BoundReport r = assemble_theorem1(log_bracket, family.m_codewords(), order);
    r.params["q_choice"] = family.q_choice().name();
    r.params["alphabet_size"] = family.alphabet_size();
    return r;
}

BoundReport theorem1_bound(const GaussianChannelFamily& family, RenyiOrder order) {
    std::vector<double> divs;
    divs.reserve(family.codewords.size());
    for (const auto& pair : family.codewords) divs.push_back(renyi_gaussian_shift(pair, order));
    BoundReport r = theorem1_from_divergences(divs, order);
    r.params["q_choice"] = "gaussian_zero_mean";
    return r;
}

BoundReport optimize_lambda(const std::function<BoundReport(RenyiOrder)>& evaluate, double lambda_lo,
                            double lambda_hi) {
    if (!(lambda_lo > 0.0) || !(lambda_hi >= lambda_lo))
        throw DomainError("optimize_lambda: need 0 < lambda_lo <= lambda_hi");
    const double u_lo = std::log(lambda_lo), u_hi = std::log(lambda_hi);
    auto value = [&](double u) { return evaluate(RenyiOrder(std::exp(u))).eps_raw; };

    constexpr int kScan = 64;
    std::vector<double> grid(kScan), vals(kScan);
    int best = 0;
    for (int i = 0; i < kScan; ++i) {
        grid[i] = (i + 1 == kScan) ? u_hi : u_lo + (u_hi - u_lo) * i / (kScan - 1);
        vals[i] = value(grid[i]);
        if (vals[i] > vals[best]) best = i;
    }
    double best_u = grid[best], best_v = vals[best];

    // Golden-section between the scan neighbours of the best point.
    double a = grid[std::max(best - 1, 0)], b = grid[std::min(best + 1, kScan - 1)];
    if (b > a) {
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
        double fc = value(c), fd = value(d);
        for (int it = 0; it < 60; ++it) {
            if (fc >= fd) {
                b = d; d = c; fd = fc;
                c = b - inv_phi * (b - a); fc = value(c);
            } else {
                a = c; c = d; fc = fd;
                d = a + inv_phi * (b - a); fd = value(d);
            }
        }
        const double u = fc >= fd ? c : d;
        const double v = std::max(fc, fd);
        if (v > best_v) { best_v = v; best_u = u; }
    }

    BoundReport r = evaluate(RenyiOrder(std::exp(best_u)));
    r.params["lambda_range"] = Json::array({lambda_lo, lambda_hi});
    const bool at_boundary = std::abs(best_u - u_lo) < 1e-9 || std::abs(best_u - u_hi) < 1e-9;
    r.add_flag(at_boundary ? "lambda_at_boundary" : "lambda_interior");
    return r;
}

BoundReport optimize_lambda(const ChannelFamily& family, double lambda_lo, double lambda_hi) {
    return optimize_lambda([&](RenyiOrder o) { return theorem1_bound(family, o); }, lambda_lo, lambda_hi);
}

double gamma_variational_eps(double log_bracket, std::size_t m_codewords, RenyiOrder order, double gamma) {
    if (!(gamma > 0.0)) throw DomainError("gamma_variational_eps: gamma must be > 0");
    const double l = order.lambda();
    return 1.0 - gamma / static_cast<double>(m_codewords) - std::exp(log_bracket - l * std::log(gamma));
}

double gamma_variational_bound(const ChannelFamily& family, RenyiOrder order, double gamma) {
    const BoundReport r = theorem1_bound(family, order);
    if (r.has_flag("domination_failure")) return -kInfinity;
    return gamma_variational_eps(r.params["log_bracket"].get<double>(), family.m_codewords(), order, gamma);
}

double optimal_gamma(double log_bracket, std::size_t m_codewords, RenyiOrder order) {
    const double l = order.lambda();
    return std::exp((std::log(l) + log_bracket + std::log(static_cast<double>(m_codewords))) / (1.0 + l));
}

OptimalQ optimal_q_discrete(std::span<const DiscretePmf> conditionals, RenyiOrder order) {
    if (conditionals.empty()) throw DomainError("optimal_q_discrete: no conditionals");
    const double l = order.lambda();
    const auto k = static_cast<Eigen::Index>(conditionals.front().support_size());
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(k);
    for (const auto& p : conditionals) {
        if (static_cast<Eigen::Index>(p.support_size()) != k)
            throw DomainError("optimal_q_discrete: alphabets differ");
        acc += p.probs().array().pow(1.0 + l).matrix();
    }
    acc /= static_cast<double>(conditionals.size());
    const Eigen::VectorXd unnormalized = acc.array().pow(1.0 / (1.0 + l)).matrix();
    const double c = unnormalized.sum();
    return {DiscretePmf::normalized(unnormalized), c};
}

// --- Fano-type bounds ------------------------------------------------------

double mutual_information_to_mixture(std::span<const DiscretePmf> conditionals) {
    const DiscretePmf pbar = mixture(conditionals);
    double acc = 0.0;
    for (const auto& p : conditionals) acc += kl_discrete(p, pbar);
    return acc / static_cast<double>(conditionals.size());
}

BoundReport fano_bound(std::size_t m_codewords, double avg_kl_to_mixture) {
    if (m_codewords < 2) throw DomainError("fano_bound: requires M >= 2");
    if (!(avg_kl_to_mixture >= 0.0)) throw DomainError("fano_bound: average KL must be >= 0");
    BoundReport r;
    r.method = BoundMethod::fano;
    r.eps_raw = 1.0 - (std::numbers::ln2 + avg_kl_to_mixture) / std::log(static_cast<double>(m_codewords));
    r.eps_lower = clamp_probability(r.eps_raw);
    r.params["m_codewords"] = m_codewords;
    r.params["avg_kl_to_mixture"] = avg_kl_to_mixture;
    r.params["diagnostics"] = Json::array();
    if (r.eps_raw < 0.0) r.add_flag("clamped");
    return r;
}

BoundReport fano_bound(const ChannelFamily& family) {
    return fano_bound(family.m_codewords(), mutual_information_to_mixture(family.conditionals()));
}

double generalized_fano_logM_bound(RenyiOrder order, double t, double mutual_info, double eps) {
    if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("generalized_fano_logM_bound: eps must lie in [0,1)");
    if (!(mutual_info >= 0.0)) throw DomainError("generalized_fano_logM_bound: mutual information must be >= 0");
    const double l = order.lambda();
    return (1.0 + 1.0 / l) * std::log((1.0 + l) / (1.0 - eps)) - std::log(l) +
           std::log1p(l * kappa(order, t) * mutual_info) / l;
}

std::optional<double> generalized_fano_power_rhs(RenyiOrder order, std::size_t m_codewords, double eps,
                                                   double mutual_info) {
    if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("generalized_fano_power_rhs: eps must lie in [0,1)");
    const double l = order.lambda();
    const double lead = std::exp(l * std::log(l) + (1.0 + l) * std::log1p(-eps) - (1.0 + l) * std::log1p(l));
    const double denom = lead - std::pow(static_cast<double>(m_codewords), -l);
    if (!(denom > 0.0)) return std::nullopt;
    return 1.0 + mutual_info / denom;
}

BoundReport generalized_fano_bound(const ChannelFamily& family, RenyiOrder order) {
    const auto& conds = family.conditionals();
    const DiscretePmf pbar = mixture(conds);
    double t = 1.0;
    for (const auto& p : conds) t = std::max(t, max_likelihood_ratio(p, pbar));
    const double info = mutual_information_to_mixture(conds);
    const double l = order.lambda();
    // log M <= (1+1/l) log((1+l)/(1-eps)) - log l + (1/l) log(1 + l kappa I), solved for eps.
    const double log_m = std::log(static_cast<double>(family.m_codewords()));
    const double excess =
        (log_m + std::log(l) - std::log1p(l * kappa(order, t) * info) / l) / (1.0 + 1.0 / l) - std::log1p(l);
    BoundReport r;
    r.method = BoundMethod::generalized_fano;
    r.lambda_star = l;
    r.eps_raw = -std::expm1(-excess);
    r.eps_lower = family.m_codewords() == 1 ? 0.0 : clamp_probability(r.eps_raw);
    r.params["m_codewords"] = family.m_codewords();
    r.params["t"] = t;
    r.params["mutual_information"] = info;
    r.params["diagnostics"] = Json::array();
    if (r.eps_raw < 0.0) r.add_flag("clamped");
    return r;
}

// --- Risk assembly ---------------------------------------------------------

LossSpec::LossSpec(Kind kind, double shape, double a, double psi_n)
    : kind_(kind), shape_(shape), a_(a), psi_n_(psi_n) {
    if (!(a > 0.0)) throw DomainError("LossSpec: A must be > 0");
    if (!(psi_n > 0.0)) throw DomainError("LossSpec: psi_n must be > 0");
}

LossSpec LossSpec::identity(double a, double psi_n) { return LossSpec(Kind::identity, 1.0, a, psi_n); }

LossSpec LossSpec::power(double exponent, double a, double psi_n) {
    if (!(exponent > 0.0)) throw DomainError("LossSpec::power: exponent must be > 0");
    return LossSpec(Kind::power, exponent, a, psi_n);
}

LossSpec LossSpec::indicator(double threshold, double a, double psi_n) {
    if (!(threshold > 0.0)) throw DomainError("LossSpec::indicator: threshold must be > 0");
    return LossSpec(Kind::indicator, threshold, a, psi_n);
}

double LossSpec::w(double u) const {
    switch (kind_) {
        case Kind::identity: return u;
        case Kind::power: return std::pow(u, shape_);
        case Kind::indicator: return u >= shape_ ? 1.0 : 0.0;
    }
    return 0.0;
}

double risk_from_eps(const LossSpec& loss, double eps_lower) {
    if (!(eps_lower >= 0.0 && eps_lower <= 1.0)) throw DomainError("risk_from_eps: eps must lie in [0,1]");
    return loss.w(loss.a() * loss.psi_n()) * eps_lower;
}

}  // namespace converse_kit
