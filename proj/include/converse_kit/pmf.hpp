#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace converse_kit {

/// Probability mass function over {0, ..., support_size-1}.
///
/// Construction checks that every entry is non-negative and that the entries
/// sum to one within 1e-12. Use `normalized` to build one from arbitrary
/// non-negative weights.
class DiscretePmf {
public:
    static constexpr double kSumTolerance = 1e-12;

    explicit DiscretePmf(Eigen::VectorXd probs);
    DiscretePmf(std::initializer_list<double> probs);

    static DiscretePmf normalized(const Eigen::Ref<const Eigen::VectorXd>& weights);
    static DiscretePmf uniform(std::size_t support_size);

    std::size_t support_size() const { return static_cast<std::size_t>(probs_.size()); }
    const Eigen::VectorXd& probs() const { return probs_; }
    double operator[](std::size_t i) const { return probs_[static_cast<Eigen::Index>(i)]; }

    /// Joint law of two independent draws; outcome index is i * other.size + j.
    DiscretePmf product(const DiscretePmf& other) const;
    /// n-fold i.i.d. product.
    DiscretePmf iid_power(unsigned n) const;

    bool approx_equal(const DiscretePmf& other, double tol = 1e-10) const;

private:
    Eigen::VectorXd probs_;
};

/// Uniform average of pmfs over a common alphabet.
DiscretePmf mixture(std::span<const DiscretePmf> pmfs);

/// Renyi order 1 + lambda, lambda > 0.
class RenyiOrder {
public:
    explicit RenyiOrder(double lambda);
    double lambda() const { return lambda_; }
    double order() const { return 1.0 + lambda_; }

private:
    double lambda_;
};

}  // namespace converse_kit
