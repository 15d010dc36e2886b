#pragma once

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "converse_kit/pmf.hpp"

namespace converse_kit {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// True when q_i = 0 implies p_i = 0 for every outcome.
template <typename DerivedP, typename DerivedQ>
bool dominates(const Eigen::DenseBase<DerivedQ>& q, const Eigen::DenseBase<DerivedP>& p) {
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p.derived().coeff(i) > 0 && !(q.derived().coeff(i) > 0)) return false;
    return true;
}

/// log sum_i p_i^{1+lambda} q_i^{-lambda}, accumulated in log space.
///
/// Terms with p_i = 0 contribute nothing. Returns +inf when q fails to
/// dominate p; never throws. Works on any Eigen vector expression.
template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar log_renyi_moment(const Eigen::DenseBase<DerivedP>& p,
                                           const Eigen::DenseBase<DerivedQ>& q,
                                           typename DerivedP::Scalar lambda) {
    using Scalar = typename DerivedP::Scalar;
    eigen_assert(p.size() == q.size());
    Scalar peak = -std::numeric_limits<Scalar>::infinity();
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const Scalar pi = p.derived().coeff(i);
        if (!(pi > 0)) continue;
        const Scalar qi = q.derived().coeff(i);
        if (!(qi > 0)) return std::numeric_limits<Scalar>::infinity();
        peak = std::max(peak, (1 + lambda) * std::log(pi) - lambda * std::log(qi));
    }
    if (peak == -std::numeric_limits<Scalar>::infinity()) return peak;
    Scalar acc = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const Scalar pi = p.derived().coeff(i);
        if (!(pi > 0)) continue;
        const Scalar qi = q.derived().coeff(i);
        acc += std::exp((1 + lambda) * std::log(pi) - lambda * std::log(qi) - peak);
    }
    return peak + std::log(acc);
}

/// Renyi divergence of order 1+lambda. Throws AbsoluteContinuityError when
/// q does not dominate p. Rounding below zero is clamped to 0.
double renyi_discrete(const DiscretePmf& p, const DiscretePmf& q, RenyiOrder order);

/// Renyi divergence of an n-fold i.i.d. product from its one-letter value.
double renyi_product_iid(double single_letter_div, unsigned n);

/// N(mu, sigma^2 I) against N(0, sigma^2 I) with ||mu||^2 = shift_sq.
struct GaussianShiftPair {
    GaussianShiftPair(double shift_sq, double sigma_sq);
    double shift_sq;
    double sigma_sq;
};

/// Closed form (1+lambda) shift_sq / (2 sigma_sq).
double renyi_gaussian_shift(const GaussianShiftPair& pair, RenyiOrder order);

/// Bernoulli(p) against Bernoulli(q).
struct BernoulliPair {
    BernoulliPair(double p, double q);
    double p;
    double q;
};

double renyi_bernoulli(const BernoulliPair& pair, RenyiOrder order);

/// log(1 + 2 tv^2 / q_min), an upper bound on the Renyi divergence of order
/// 1+lambda for lambda in (0, 1] when q_min is the smallest reference mass.
double verdu_sason_renyi_upper(double tv, double q_min, RenyiOrder order);

/// Hellinger divergence of order 1+lambda: (sum p^{1+l} q^{-l} - 1) / lambda.
double hellinger_discrete(const DiscretePmf& p, const DiscretePmf& q, RenyiOrder order);

/// Kullback-Leibler divergence with 0 log 0 = 0.
double kl_discrete(const DiscretePmf& p, const DiscretePmf& q);

double total_variation(const DiscretePmf& p, const DiscretePmf& q);

/// Essential supremum of dP/dQ under Q (max of p_i/q_i over q_i > 0).
double max_likelihood_ratio(const DiscretePmf& p, const DiscretePmf& q);

/// kappa(lambda, t) = (lambda + t^{1+lambda} - (1+lambda) t) / (lambda (t log t + 1 - t)).
///
/// The quotient is 0/0 at t = 1; for |t - 1| < 1e-6 the expansion
/// (1+lambda)(1 + lambda (t-1)/3) is returned instead. Throws for t < 1.
double kappa(RenyiOrder order, double t);

/// E_gamma(P||Q) = sum_i max(p_i - gamma q_i, 0), the best value of
/// P[T=1] - gamma Q[T=1] over tests T.
double e_gamma_divergence(const DiscretePmf& p, const DiscretePmf& q, double gamma);

/// P[dP/dQ > gamma]. Outcomes with q_i = 0 < p_i count as exceeding.
double likelihood_ratio_tail(const DiscretePmf& p, const DiscretePmf& q, double gamma);

}  // namespace converse_kit
