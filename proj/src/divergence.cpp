#include "converse_kit/divergence.hpp"

#include <algorithm>
#include <cmath>

#include "converse_kit/errors.hpp"

namespace converse_kit {

namespace {

void require_same_alphabet(const DiscretePmf& p, const DiscretePmf& q, const char* what) {
    if (p.support_size() != q.support_size())
        throw DomainError(std::string(what) + ": pmfs have different support sizes");
}

void require_domination(const DiscretePmf& p, const DiscretePmf& q, const char* what) {
    if (!dominates(q.probs(), p.probs()))
        throw AbsoluteContinuityError(std::string(what) + ": P is not absolutely continuous w.r.t. Q");
}

}  // namespace

double renyi_discrete(const DiscretePmf& p, const DiscretePmf& q, RenyiOrder order) {
    require_same_alphabet(p, q, "renyi_discrete");
    require_domination(p, q, "renyi_discrete");
    const double log_moment = log_renyi_moment(p.probs(), q.probs(), order.lambda());
    return std::max(0.0, log_moment / order.lambda());
}

double renyi_product_iid(double single_letter_div, unsigned n) {
    return static_cast<double>(n) * single_letter_div;
}

GaussianShiftPair::GaussianShiftPair(double shift_sq_, double sigma_sq_)
    : shift_sq(shift_sq_), sigma_sq(sigma_sq_) {
    if (!(shift_sq >= 0.0)) throw DomainError("GaussianShiftPair: shift_sq must be >= 0");
    if (!(sigma_sq > 0.0)) throw DomainError("GaussianShiftPair: sigma_sq must be > 0");
}

double renyi_gaussian_shift(const GaussianShiftPair& pair, RenyiOrder order) {
    return (1.0 + order.lambda()) * pair.shift_sq / (2.0 * pair.sigma_sq);
}

BernoulliPair::BernoulliPair(double p_, double q_) : p(p_), q(q_) {
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0))
        throw DomainError("BernoulliPair: parameters must lie in [0,1]");
}

double renyi_bernoulli(const BernoulliPair& pair, RenyiOrder order) {
    const double l = order.lambda();
    const double p = pair.p, q = pair.q;
    if ((p > 0.0 && q == 0.0) || (p < 1.0 && q == 1.0))
        throw AbsoluteContinuityError("renyi_bernoulli: Bernoulli(p) not dominated by Bernoulli(q)");
    double s = 0.0;
    if (p > 0.0) s += std::pow(p, 1.0 + l) * std::pow(q, -l);
    if (p < 1.0) s += std::pow(1.0 - p, 1.0 + l) * std::pow(1.0 - q, -l);
    return std::max(0.0, std::log(s) / l);
}

double verdu_sason_renyi_upper(double tv, double q_min, RenyiOrder order) {
    if (order.lambda() > 1.0) throw DomainError("verdu_sason_renyi_upper: requires lambda in (0,1]");
    if (!(q_min > 0.0)) throw DomainError("verdu_sason_renyi_upper: q_min must be > 0");
    if (!(tv >= 0.0)) throw DomainError("verdu_sason_renyi_upper: tv must be >= 0");
    return std::log1p(2.0 * tv * tv / q_min);
}

double hellinger_discrete(const DiscretePmf& p, const DiscretePmf& q, RenyiOrder order) {
    require_same_alphabet(p, q, "hellinger_discrete");
    require_domination(p, q, "hellinger_discrete");
    const double log_moment = log_renyi_moment(p.probs(), q.probs(), order.lambda());
    return std::max(0.0, std::expm1(log_moment) / order.lambda());
}

double kl_discrete(const DiscretePmf& p, const DiscretePmf& q) {
    require_same_alphabet(p, q, "kl_discrete");
    require_domination(p, q, "kl_discrete");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.support_size(); ++i)
        if (p[i] > 0.0) acc += p[i] * std::log(p[i] / q[i]);
    return std::max(0.0, acc);
}

double total_variation(const DiscretePmf& p, const DiscretePmf& q) {
    require_same_alphabet(p, q, "total_variation");
    return 0.5 * (p.probs() - q.probs()).cwiseAbs().sum();
}

double max_likelihood_ratio(const DiscretePmf& p, const DiscretePmf& q) {
    require_same_alphabet(p, q, "max_likelihood_ratio");
    require_domination(p, q, "max_likelihood_ratio");
    double t = 0.0;
    for (std::size_t i = 0; i < p.support_size(); ++i)
        if (q[i] > 0.0) t = std::max(t, p[i] / q[i]);
    return t;
}

double kappa(RenyiOrder order, double t) {
    const double l = order.lambda();
    if (!(t >= 1.0)) throw DomainError("kappa: requires t >= 1");
    const double h = t - 1.0;
    if (h < 1e-6) return (1.0 + l) * (1.0 + l * h / 3.0);
    // t^{1+l} - 1 - (1+l) h and t log t - h, both O(h^2), without cancellation of the O(1) parts.
    const double numerator = std::expm1((1.0 + l) * std::log1p(h)) - (1.0 + l) * h;
    const double denominator = t * std::log1p(h) - h;
    return numerator / (l * denominator);
}

double e_gamma_divergence(const DiscretePmf& p, const DiscretePmf& q, double gamma) {
    require_same_alphabet(p, q, "e_gamma_divergence");
    if (!(gamma > 0.0)) throw DomainError("e_gamma_divergence: gamma must be > 0");
    return (p.probs() - gamma * q.probs()).cwiseMax(0.0).sum();
}

double likelihood_ratio_tail(const DiscretePmf& p, const DiscretePmf& q, double gamma) {
    require_same_alphabet(p, q, "likelihood_ratio_tail");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.support_size(); ++i)
        if (p[i] > gamma * q[i]) acc += p[i];
    return acc;
}

}  // namespace converse_kit
