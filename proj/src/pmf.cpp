#include "converse_kit/pmf.hpp"

#include <cmath>
#include <string>

#include "converse_kit/errors.hpp"

namespace converse_kit {

DiscretePmf::DiscretePmf(Eigen::VectorXd probs) : probs_(std::move(probs)) {
    if (probs_.size() == 0) throw DomainError("DiscretePmf: empty support");
    for (Eigen::Index i = 0; i < probs_.size(); ++i) {
        if (!(probs_[i] >= 0.0) || !std::isfinite(probs_[i]))
            throw DomainError("DiscretePmf: entry " + std::to_string(i) + " is negative or not finite");
    }
    if (std::abs(probs_.sum() - 1.0) > kSumTolerance)
        throw DomainError("DiscretePmf: probabilities do not sum to 1");
}

DiscretePmf::DiscretePmf(std::initializer_list<double> probs)
    : DiscretePmf(Eigen::Map<const Eigen::VectorXd>(probs.begin(), static_cast<Eigen::Index>(probs.size()))) {}

DiscretePmf DiscretePmf::normalized(const Eigen::Ref<const Eigen::VectorXd>& weights) {
    if ((weights.array() < 0.0).any()) throw DomainError("DiscretePmf::normalized: negative weight");
    const double total = weights.sum();
    if (!(total > 0.0) || !std::isfinite(total))
        throw DomainError("DiscretePmf::normalized: weights must have a positive finite sum");
    return DiscretePmf(Eigen::VectorXd(weights / total));
}

DiscretePmf DiscretePmf::uniform(std::size_t support_size) {
    if (support_size == 0) throw DomainError("DiscretePmf::uniform: empty support");
    return DiscretePmf(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(support_size),
                                                 1.0 / static_cast<double>(support_size)));
}

DiscretePmf DiscretePmf::product(const DiscretePmf& other) const {
    const Eigen::Index a = probs_.size();
    const Eigen::Index b = other.probs_.size();
    Eigen::VectorXd joint(a * b);
    for (Eigen::Index i = 0; i < a; ++i) joint.segment(i * b, b) = probs_[i] * other.probs_;
    // Renormalize to absorb rounding accumulated in the products.
    return DiscretePmf(Eigen::VectorXd(joint / joint.sum()));
}

DiscretePmf DiscretePmf::iid_power(unsigned n) const {
    if (n == 0) throw DomainError("DiscretePmf::iid_power: n must be positive");
    DiscretePmf out = *this;
    for (unsigned r = 1; r < n; ++r) out = out.product(*this);
    return out;
}

bool DiscretePmf::approx_equal(const DiscretePmf& other, double tol) const {
    return probs_.size() == other.probs_.size() &&
           (probs_ - other.probs_).cwiseAbs().maxCoeff() <= tol;
}

DiscretePmf mixture(std::span<const DiscretePmf> pmfs) {
    if (pmfs.empty()) throw DomainError("mixture: no components");
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pmfs.front().support_size()));
    for (const auto& p : pmfs) {
        if (p.support_size() != pmfs.front().support_size())
            throw DomainError("mixture: components have different alphabets");
        acc += p.probs();
    }
    return DiscretePmf::normalized(acc);
}

RenyiOrder::RenyiOrder(double lambda) : lambda_(lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw DomainError("RenyiOrder: lambda must be a positive finite number");
}

}  // namespace converse_kit
