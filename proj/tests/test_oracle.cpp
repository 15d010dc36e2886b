#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "converse_kit/errors.hpp"
#include "converse_kit/oracle.hpp"
#include "converse_kit/verify.hpp"
#include "oracles.hpp"

using namespace converse_kit;

namespace {

std::vector<std::vector<double>> as_vectors(const ChannelFamily& fam) {
    std::vector<std::vector<double>> out;
    for (const auto& p : fam.conditionals()) out.push_back(oracle::to_vector(p));
    return out;
}

HypercubeDensityFamily single_tau(unsigned m, double c) {
    return HypercubeDensityFamily(m, c, BumpShape::sine, {Eigen::VectorXi::Ones(m)});
}

}  // namespace

TEST(BayesError, HandCases) {
    EXPECT_NEAR(exact_bayes_error(ChannelFamily(std::vector<DiscretePmf>(5, DiscretePmf{0.3, 0.7}))), 0.8, 1e-15);
    const ChannelFamily bsc({DiscretePmf{0.9, 0.1}, DiscretePmf{0.1, 0.9}});
    EXPECT_NEAR(exact_bayes_error(bsc), 0.1, 1e-15);
    EXPECT_NEAR(exact_bayes_error(bsc.iid_power(3)), 0.028, 1e-15);
}

TEST(BayesError, MatchesDecoderEnumeration) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 60; ++i) {
        const std::size_t m = 2 + i % 3, k = 2 + i % 5;
        std::vector<DiscretePmf> conds;
        for (std::size_t j = 0; j < m; ++j) {
            const auto v = oracle::random_simplex(rng, k, 0.2);
            conds.emplace_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(k)));
        }
        const ChannelFamily fam(conds);
        EXPECT_NEAR(exact_bayes_error(fam), oracle::bayes_error_by_decoder_enumeration(as_vectors(fam)), 1e-14);
    }
}

TEST(BayesError, RelabelingInvariance) {
    const ChannelFamily fam = random_family(instance_seed(3, 1));
    std::vector<DiscretePmf> reversed(fam.conditionals().rbegin(), fam.conditionals().rend());
    std::vector<DiscretePmf> permuted;
    for (const auto& p : reversed) permuted.emplace_back(Eigen::VectorXd(p.probs().reverse()));
    EXPECT_NEAR(exact_bayes_error(ChannelFamily(permuted)), exact_bayes_error(fam), 1e-14);
}

TEST(BayesError, CapabilityCeiling) {
    const ChannelFamily fam({DiscretePmf::uniform(1001), DiscretePmf::uniform(1001)});
    EXPECT_THROW(exact_bayes_error(fam.iid_power(2), 1000), CapabilityError);
}

TEST(MinDistanceDecoder, NeverBeatsBayes) {
    for (std::size_t i = 0; i < 100; ++i) {
        const ChannelFamily fam = random_family(instance_seed(19, i));
        std::vector<Eigen::VectorXd> points;
        for (std::size_t j = 0; j < fam.m_codewords(); ++j) points.push_back(Eigen::VectorXd::Constant(1, double(j)));
        const PackingSet packing = PackingSet::euclidean(points, 1.0);
        std::mt19937_64 rng(instance_seed(20, i));
        std::vector<double> guesses(fam.alphabet_size());
        std::uniform_real_distribution<double> unit(-0.5, fam.m_codewords() - 0.5);
        for (auto& g : guesses) g = unit(rng);
        const double err = min_distance_decoder_error(
            fam, packing, [&](std::size_t y) { return Eigen::VectorXd::Constant(1, guesses[y]); });
        EXPECT_LE(exact_bayes_error(fam), err + 1e-15);
    }
}

TEST(MinDistanceDecoder, IdenticalConditionals) {
    const ChannelFamily fam(std::vector<DiscretePmf>(4, DiscretePmf{0.25, 0.75}));
    std::vector<Eigen::VectorXd> points;
    for (int j = 0; j < 4; ++j) points.push_back(Eigen::VectorXd::Constant(1, j));
    const double err = min_distance_decoder_error(fam, PackingSet::euclidean(points, 1.0),
                                                  [](std::size_t y) { return Eigen::VectorXd::Constant(1, double(y)); });
    EXPECT_NEAR(err, 0.75, 1e-15);
}

TEST(MinDistanceDecoder, TriangleInequalityImplication) {
    std::vector<Eigen::VectorXd> points{Eigen::Vector2d(0, 0), Eigen::Vector2d(3, 0), Eigen::Vector2d(0, 3)};
    const PackingSet packing = PackingSet::euclidean(points, 3.0);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> angle(0, 6.283185307179586), radius(0, 1.4999);
    for (int i = 0; i < 300; ++i) {
        const std::size_t target = i % 3;
        const double a = angle(rng), r = radius(rng);
        const Eigen::VectorXd est = points[target] + Eigen::Vector2d(r * std::cos(a), r * std::sin(a));
        EXPECT_EQ(packing.nearest(est), target);
    }
}

TEST(DensityFamily, SquareIntegralIdentity) {
    EXPECT_NEAR(density_sq_integral(single_tau(4, 0.0), 0), 1.0, 1e-12);
    EXPECT_NEAR(density_sq_integral(single_tau(4, 0.5), 0), 1.0 + 0.25 * 0.5 / 256, 1e-9);
    for (unsigned m : {2u, 4u, 8u, 16u})
        for (double c : {0.1, 0.3, 0.5})
            EXPECT_NEAR(density_sq_integral(single_tau(m, c), 0), 1.0 + c * c * 0.5 / std::pow(m, 4), 1e-9);
}

TEST(DensityFamily, IntegralDoesNotDependOnTau) {
    Eigen::VectorXi a(5), b(5);
    a << 1, -1, 1, 1, -1;
    b << -1, -1, 1, -1, 1;
    const HypercubeDensityFamily fam(5, 0.4, BumpShape::cosine, {a, b});
    EXPECT_NEAR(density_sq_integral(fam, 0), density_sq_integral(fam, 1), 1e-12);
}

TEST(DensityFamily, RejectsNegativeDensities) {
    EXPECT_THROW(single_tau(2, 4.5), DomainError);
}

TEST(DensityFamily, HellingerValues) {
    Eigen::VectorXi a = Eigen::VectorXi::Ones(6), b = a;
    b[1] = -1;
    b[4] = -1;
    const HypercubeDensityFamily fam(6, 0.1, BumpShape::sine, {a, b});
    EXPECT_EQ(hellinger_sq_distance(fam, 0, 0), 0.0);
    const double h = hellinger_sq_distance(fam, 0, 1);
    // Per differing cell the integrand is ~ (c/m^2)^2 g^2, so two cells give ~ 2 c^2 a / m^5.
    EXPECT_GE(h, 2 * 0.01 * 0.5 / std::pow(6.0, 5));
    EXPECT_NEAR(h, 2 * 0.01 * 0.5 / std::pow(6.0, 5), 1e-3 * h);
    // Independent midpoint rule on the raw densities over [0, 1].
    constexpr int kPoints = 600000;
    double midpoint = 0.0;
    for (int i = 0; i < kPoints; ++i) {
        const double y = (i + 0.5) / kPoints;
        const double d = std::sqrt(fam.density(0, y)) - std::sqrt(fam.density(1, y));
        midpoint += d * d / kPoints;
    }
    EXPECT_NEAR(h, midpoint, 1e-7 * h);
    EXPECT_NEAR(h, 1.286010104784839e-06, 1e-17);
}

TEST(DensityFamily, HellingerScalesAsInverseFourthPower) {
    auto all_flipped = [](unsigned m) {
        return HypercubeDensityFamily(m, 0.3, BumpShape::sine,
                                      {Eigen::VectorXi::Ones(m), Eigen::VectorXi(-Eigen::VectorXi::Ones(m))});
    };
    const double h4 = hellinger_sq_distance(all_flipped(4), 0, 1);
    const double h8 = hellinger_sq_distance(all_flipped(8), 0, 1);
    EXPECT_NEAR(h4 / h8, 16.0, 0.2 * 16.0);
}

TEST(DensityFamily, HammingSeparationGivesHellingerSeparation) {
    const unsigned m = 6;
    const double c = 0.1;
    const BinaryCodebook code = gv_greedy(m, 2);
    const HypercubeDensityFamily fam(m, c, BumpShape::sine, HypercubeDensityFamily::taus_from_codebook(code));
    const double floor_value = 0.5 * c * c / (3 * std::pow(m, 4));
    for (std::size_t i = 0; i < code.codewords.size(); ++i)
        for (std::size_t j = i + 1; j < code.codewords.size(); ++j)
            if (hamming_distance(code.codewords[i], code.codewords[j]) * 3 >= m) {
                EXPECT_GE(hellinger_sq_distance(fam, i, j), floor_value);
            }
    const PackingSet packing = hellinger_packing(fam, 0.5 * c * c * 2 / std::pow(m, 5));
    EXPECT_TRUE(verify_packing(packing).passed);
}

TEST(ProductBound, Examples) {
    const ProductBoundCheck zero = lemma2_product_bound_check(single_tau(4, 0.0), 5);
    EXPECT_TRUE(zero.holds);
    EXPECT_EQ(zero.lhs, zero.rhs);

    const ProductBoundCheck r = lemma2_product_bound_check(single_tau(4, 0.5), 10);
    EXPECT_TRUE(r.holds);
    EXPECT_DOUBLE_EQ(r.x, 4.8828125e-4);
    EXPECT_NEAR(r.lhs, std::pow(1 + 4.8828125e-4, 10), 1e-14);
    EXPECT_NEAR(r.rhs, std::exp(4.8828125e-3), 1e-14);
    EXPECT_LT(r.lhs, r.rhs);
    EXPECT_LE(std::pow(2.0, 2), std::exp(2.0));
    EXPECT_THROW(lemma2_product_bound_check(single_tau(4, 0.5), 31), DomainError);
}
