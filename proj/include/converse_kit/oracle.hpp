#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "converse_kit/converse.hpp"
#include "converse_kit/packing.hpp"

namespace converse_kit {

/// Minimum average error over all decoders under a uniform prior:
/// 1 - sum_y max_i (1/M) P(y | theta_i). Throws CapabilityError when the
/// alphabet exceeds max_outcomes.
double exact_bayes_error(const ChannelFamily& family, std::size_t max_outcomes = 1'000'000);

/// Maps an outcome index to a point estimate in parameter space.
using Estimator = std::function<Eigen::VectorXd(std::size_t outcome)>;

/// Exact average error of i_hat(y) = argmin_j d(estimator(y), theta_j), where
/// theta_j are the packing elements (one per codeword of the family).
double min_distance_decoder_error(const ChannelFamily& family, const PackingSet& packing, const Estimator& estimator,
                                  std::size_t max_outcomes = 1'000'000);

/// P[T=1] - gamma Q[T=1] for a randomized test with acceptance probabilities `test`.
double test_advantage(const DiscretePmf& p, const DiscretePmf& q, double gamma, const Eigen::VectorXd& test);

/// 1-D adaptive-Simpson evaluation of the order-(1+lambda) Renyi divergence
/// between N(sqrt(shift_sq), sigma^2) and N(0, sigma^2). Independent of the
/// closed form; used to check it.
double renyi_gaussian_quadrature(const GaussianShiftPair& pair, RenyiOrder order, double abs_tol = 1e-10);

enum class BumpShape {
    sine,    ///< g(x) = sin(2 pi x): a = 1/2, sup|g| = 1
    cosine,  ///< g(x) = cos(2 pi x): a = 1/2, sup|g| = 1
};

/// Perturbed-uniform densities f_tau(y) = 1 + sum_j tau_j (c/m^2) g(m y - j) 1[j/m <= y < (j+1)/m]
/// indexed by sign vectors tau in {+1,-1}^m.
class HypercubeDensityFamily {
public:
    HypercubeDensityFamily(unsigned m, double c, BumpShape shape, std::vector<Eigen::VectorXi> taus);

    /// Sign vectors from a binary codebook: bit 0 -> +1, bit 1 -> -1.
    static std::vector<Eigen::VectorXi> taus_from_codebook(const BinaryCodebook& code);

    unsigned m() const { return m_; }
    double c() const { return c_; }
    BumpShape shape() const { return shape_; }
    double a() const { return 0.5; }
    double sup_abs_g() const { return 1.0; }
    const std::vector<Eigen::VectorXi>& taus() const { return taus_; }

    double g(double x) const;
    double density(std::size_t tau_index, double y) const;

private:
    unsigned m_;
    double c_;
    BumpShape shape_;
    std::vector<Eigen::VectorXi> taus_;
};

/// Integral of f_tau^2 over [0,1] by adaptive Simpson on each cell
/// (total tolerance 1e-10). Equals 1 + c^2 a / m^4 for every tau.
double density_sq_integral(const HypercubeDensityFamily& family, std::size_t tau_index);

/// Squared Hellinger distance int (sqrt f_a - sqrt f_b)^2 by per-cell quadrature.
double hellinger_sq_distance(const HypercubeDensityFamily& family, std::size_t tau_a, std::size_t tau_b);

/// Packing over the family's sign vectors under squared Hellinger distance.
PackingSet hellinger_packing(const HypercubeDensityFamily& family, double d_min);

struct ProductBoundCheck {
    double x = 0.0;                 ///< c^2 a / m^4
    double quadrature_integral = 0; ///< int f_tau^2 for the first tau
    double lhs = 0.0;               ///< (1 + x)^n
    double rhs = 0.0;               ///< exp(x n)
    bool holds = false;             ///< quadrature matches 1 + x within 1e-9 and lhs <= rhs
};

/// Checks the n-fold chain (int f^2)^n = (1 + x)^n <= exp(x n) behind the
/// uniform-Q bracket bound. Requires n <= 30.
ProductBoundCheck lemma2_product_bound_check(const HypercubeDensityFamily& family, unsigned n);

}  // namespace converse_kit
