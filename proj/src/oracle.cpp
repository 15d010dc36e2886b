#include "converse_kit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "converse_kit/errors.hpp"
#include "converse_kit/quadrature.hpp"

namespace converse_kit {

namespace {

Eigen::MatrixXd stack_conditionals(const ChannelFamily& family, std::size_t max_outcomes) {
    if (family.alphabet_size() > max_outcomes)
        throw CapabilityError("oracle: alphabet of " + std::to_string(family.alphabet_size()) + " outcomes exceeds " +
                              std::to_string(max_outcomes));
    Eigen::MatrixXd rows(family.m_codewords(), family.alphabet_size());
    for (std::size_t i = 0; i < family.m_codewords(); ++i)
        rows.row(static_cast<Eigen::Index>(i)) = family.conditionals()[i].probs().transpose();
    return rows;
}

}  // namespace

double exact_bayes_error(const ChannelFamily& family, std::size_t max_outcomes) {
    const Eigen::MatrixXd rows = stack_conditionals(family, max_outcomes);
    const double correct = rows.colwise().maxCoeff().sum() / static_cast<double>(family.m_codewords());
    return std::clamp(1.0 - correct, 0.0, 1.0);
}

double min_distance_decoder_error(const ChannelFamily& family, const PackingSet& packing, const Estimator& estimator,
                                  std::size_t max_outcomes) {
    if (packing.size() != family.m_codewords())
        throw DomainError("min_distance_decoder_error: packing size must equal the number of codewords");
    const Eigen::MatrixXd rows = stack_conditionals(family, max_outcomes);
    double correct = 0.0;
    for (Eigen::Index y = 0; y < rows.cols(); ++y) {
        const std::size_t decoded = packing.nearest(estimator(static_cast<std::size_t>(y)));
        correct += rows(static_cast<Eigen::Index>(decoded), y);
    }
    return std::clamp(1.0 - correct / static_cast<double>(family.m_codewords()), 0.0, 1.0);
}

double test_advantage(const DiscretePmf& p, const DiscretePmf& q, double gamma, const Eigen::VectorXd& test) {
    if (test.size() != static_cast<Eigen::Index>(p.support_size()) || p.support_size() != q.support_size())
        throw DomainError("test_advantage: size mismatch");
    if ((test.array() < 0.0).any() || (test.array() > 1.0).any())
        throw DomainError("test_advantage: test probabilities must lie in [0,1]");
    return p.probs().dot(test) - gamma * q.probs().dot(test);
}

double renyi_gaussian_quadrature(const GaussianShiftPair& pair, RenyiOrder order, double abs_tol) {
    const double l = order.lambda();
    const double sigma = std::sqrt(pair.sigma_sq);
    const double mu = std::sqrt(pair.shift_sq);
    const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi * pair.sigma_sq);
    auto log_integrand = [&](double y) {
        const double log_p = log_norm - (y - mu) * (y - mu) / (2.0 * pair.sigma_sq);
        const double log_q = log_norm - y * y / (2.0 * pair.sigma_sq);
        return (1.0 + l) * log_p - l * log_q;
    };
    const double half_width = (1.0 + l) * mu + 40.0 * sigma;
    const double lo = -half_width, hi = half_width;
    // Factor out the largest sampled value so the quadrature works at unit scale.
    double peak = -kInfinity;
    constexpr int kProbe = 4001;
    for (int i = 0; i < kProbe; ++i) peak = std::max(peak, log_integrand(lo + (hi - lo) * i / (kProbe - 1)));
    const double integral =
        adaptive_simpson([&](double y) { return std::exp(log_integrand(y) - peak); }, lo, hi, abs_tol, 400);
    return (std::log(integral) + peak) / l;
}

HypercubeDensityFamily::HypercubeDensityFamily(unsigned m, double c, BumpShape shape, std::vector<Eigen::VectorXi> taus)
    : m_(m), c_(c), shape_(shape), taus_(std::move(taus)) {
    if (m == 0) throw DomainError("HypercubeDensityFamily: m must be positive");
    if (!(c >= 0.0)) throw DomainError("HypercubeDensityFamily: c must be >= 0");
    if (!(c * sup_abs_g() / (static_cast<double>(m) * m) < 1.0))
        throw DomainError("HypercubeDensityFamily: c sup|g| / m^2 < 1 is required for non-negative densities");
    if (taus_.empty()) throw DomainError("HypercubeDensityFamily: at least one sign vector required");
    for (const auto& tau : taus_) {
        if (tau.size() != static_cast<Eigen::Index>(m))
            throw DomainError("HypercubeDensityFamily: sign vector of wrong length");
        if (((tau.array() != 1) && (tau.array() != -1)).any())
            throw DomainError("HypercubeDensityFamily: sign vectors must have entries in {+1,-1}");
    }
}

std::vector<Eigen::VectorXi> HypercubeDensityFamily::taus_from_codebook(const BinaryCodebook& code) {
    std::vector<Eigen::VectorXi> taus;
    taus.reserve(code.codewords.size());
    for (std::uint64_t w : code.codewords) {
        Eigen::VectorXi tau(code.m);
        for (unsigned j = 0; j < code.m; ++j) tau[j] = ((w >> j) & 1u) ? -1 : 1;
        taus.push_back(std::move(tau));
    }
    return taus;
}

double HypercubeDensityFamily::g(double x) const {
    switch (shape_) {
        case BumpShape::sine: return std::sin(2.0 * std::numbers::pi * x);
        case BumpShape::cosine: return std::cos(2.0 * std::numbers::pi * x);
    }
    return 0.0;
}

double HypercubeDensityFamily::density(std::size_t tau_index, double y) const {
    if (y < 0.0 || y > 1.0) return 0.0;
    const double md = static_cast<double>(m_);
    const auto j = std::min(static_cast<unsigned>(y * md), m_ - 1);
    return 1.0 + taus_.at(tau_index)[j] * (c_ / (md * md)) * g(md * y - j);
}

namespace {

constexpr double kCellTolerance = 1e-10;

/// Sum over cells of the integral of `f` restricted to each cell. `f` is
/// evaluated on the cell's own bump so points on the right edge are handled.
template <typename CellIntegrand>
double integrate_cells(unsigned m, CellIntegrand&& f) {
    double total = 0.0;
    for (unsigned j = 0; j < m; ++j) {
        const double lo = static_cast<double>(j) / m, hi = static_cast<double>(j + 1) / m;
        total += adaptive_simpson([&](double y) { return f(j, y); }, lo, hi, kCellTolerance / m, 2);
    }
    return total;
}

}  // namespace

double density_sq_integral(const HypercubeDensityFamily& family, std::size_t tau_index) {
    const auto& tau = family.taus().at(tau_index);
    const double md = family.m();
    const double scale = family.c() / (md * md);
    return integrate_cells(family.m(), [&](unsigned j, double y) {
        const double f = 1.0 + tau[j] * scale * family.g(md * y - j);
        return f * f;
    });
}

double hellinger_sq_distance(const HypercubeDensityFamily& family, std::size_t tau_a, std::size_t tau_b) {
    const auto& ta = family.taus().at(tau_a);
    const auto& tb = family.taus().at(tau_b);
    const double md = family.m();
    const double scale = family.c() / (md * md);
    return integrate_cells(family.m(), [&](unsigned j, double y) {
        if (ta[j] == tb[j]) return 0.0;
        const double h = scale * family.g(md * y - j);
        const double fa = 1.0 + ta[j] * h, fb = 1.0 + tb[j] * h;
        const double diff = (fa - fb) / (std::sqrt(fa) + std::sqrt(fb));
        return diff * diff;
    });
}

PackingSet hellinger_packing(const HypercubeDensityFamily& family, double d_min) {
    std::vector<Eigen::VectorXd> elements;
    for (const auto& tau : family.taus()) elements.push_back(tau.cast<double>());
    const double md = family.m();
    const double scale = family.c() / (md * md);
    const unsigned m = family.m();
    auto distance = [&family, md, scale, m](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        double total = 0.0;
        for (unsigned j = 0; j < m; ++j) {
            if (a[j] == b[j]) continue;
            const double lo = static_cast<double>(j) / m, hi = static_cast<double>(j + 1) / m;
            total += adaptive_simpson(
                [&](double y) {
                    const double h = scale * family.g(md * y - j);
                    const double fa = 1.0 + a[j] * h, fb = 1.0 + b[j] * h;
                    const double diff = (fa - fb) / (std::sqrt(fa) + std::sqrt(fb));
                    return diff * diff;
                },
                lo, hi, kCellTolerance / m, 2);
        }
        return total;
    };
    return PackingSet(std::move(elements), PackingMetric::hellinger_sq, d_min, distance);
}

ProductBoundCheck lemma2_product_bound_check(const HypercubeDensityFamily& family, unsigned n) {
    if (n == 0 || n > 30) throw DomainError("lemma2_product_bound_check: requires 1 <= n <= 30");
    ProductBoundCheck out;
    const double m4 = std::pow(static_cast<double>(family.m()), 4);
    out.x = family.c() * family.c() * family.a() / m4;
    out.quadrature_integral = density_sq_integral(family, 0);
    out.lhs = std::exp(n * std::log1p(out.x));
    out.rhs = std::exp(out.x * n);
    out.holds = std::abs(out.quadrature_integral - (1.0 + out.x)) <= 1e-9 && n * std::log1p(out.x) <= out.x * n;
    return out;
}

}  // namespace converse_kit
