#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "converse_kit/converse.hpp"
#include "converse_kit/errors.hpp"
#include "converse_kit/oracle.hpp"
#include "converse_kit/verify.hpp"
#include "oracles.hpp"

using namespace converse_kit;

namespace {

ChannelFamily bsc_pair(double crossover, QChoice q = QChoice::mixture()) {
    return ChannelFamily({DiscretePmf{1 - crossover, crossover}, DiscretePmf{crossover, 1 - crossover}}, std::move(q));
}

/// Grid supremum over gamma > 0: a coarse log grid, then 10^4 points
/// between the neighbours of the coarse argmax.
double gamma_grid_sup(double log_bracket, std::size_t m, RenyiOrder order) {
    const double lo = std::log(static_cast<double>(m)) - 40.0, hi = lo + 80.0;
    constexpr int kCoarse = 8001;
    int arg = 0;
    double best = -kInfinity;
    for (int i = 0; i < kCoarse; ++i) {
        const double v = gamma_variational_eps(log_bracket, m, order, std::exp(lo + (hi - lo) * i / (kCoarse - 1)));
        if (v > best) { best = v; arg = i; }
    }
    const double step = (hi - lo) / (kCoarse - 1);
    const double a = lo + (arg - 1) * step, b = lo + (arg + 1) * step;
    for (int i = 0; i < 10000; ++i)
        best = std::max(best, gamma_variational_eps(log_bracket, m, order, std::exp(a + (b - a) * i / 9999.0)));
    return best;
}

}  // namespace

TEST(RenyiConverse, ZeroDivergenceCases) {
    const std::vector<DiscretePmf> same(4, DiscretePmf{0.3, 0.7});
    const BoundReport r = theorem1_bound(ChannelFamily(same), RenyiOrder(1));
    EXPECT_NEAR(r.eps_raw, 0.0, 1e-15);
    EXPECT_EQ(r.eps_lower, 0.0);

    const std::vector<double> zeros(1000000, 0.0);
    EXPECT_NEAR(theorem1_from_divergences(zeros, RenyiOrder(1)).eps_lower, 0.998, 1e-12);
    EXPECT_NEAR(theorem1_eps_raw(0.0, std::log(1e6), RenyiOrder(1)), 0.998, 1e-12);
}

TEST(RenyiConverse, BinarySymmetricPairBelowBayesError) {
    const ChannelFamily fam = bsc_pair(0.1);
    EXPECT_NEAR(exact_bayes_error(fam), 0.1, 1e-15);
    for (double l : lambda_grid()) EXPECT_LE(theorem1_bound(fam, RenyiOrder(l)).eps_lower, 0.1);
}

TEST(RenyiConverse, SingleCodewordIsVacuous) {
    const ChannelFamily fam({DiscretePmf{0.2, 0.8}});
    const BoundReport r = theorem1_bound(fam, RenyiOrder(1));
    EXPECT_EQ(r.eps_lower, 0.0);
    EXPECT_TRUE(r.has_flag("single_codeword"));
}

TEST(RenyiConverse, DominationFailureIsFlagged) {
    const ChannelFamily fam({DiscretePmf{0.5, 0.5, 0.0}, DiscretePmf{0.0, 0.5, 0.5}},
                            QChoice::explicit_pmf(DiscretePmf{0.5, 0.5, 0.0}));
    const BoundReport r = theorem1_bound(fam, RenyiOrder(1));
    EXPECT_TRUE(r.has_flag("domination_failure"));
    EXPECT_EQ(r.eps_lower, 0.0);
}

TEST(RenyiConverse, ClampingKeepsRawValue) {
    const BoundReport r = theorem1_from_divergences(std::vector<double>{5.0, 5.0}, RenyiOrder(1));
    EXPECT_LT(r.eps_raw, 0.0);
    EXPECT_EQ(r.eps_lower, 0.0);
    EXPECT_TRUE(r.has_flag("clamped"));
}

TEST(RenyiConverse, MonotoneInCodebookSize) {
    const std::vector<double> profile{0.1, 0.4, 0.9};
    double prev = -kInfinity;
    for (int reps = 1; reps <= 40; ++reps) {
        std::vector<double> divs;
        for (int r = 0; r < reps; ++r) divs.insert(divs.end(), profile.begin(), profile.end());
        const double eps = theorem1_from_divergences(divs, RenyiOrder(0.7)).eps_raw;
        EXPECT_GE(eps, prev);
        prev = eps;
    }
}

TEST(RenyiConverse, GaussianFamilyMatchesDivergenceRoute) {
    const GaussianChannelFamily fam{{GaussianShiftPair(0.5, 1.0), GaussianShiftPair(1.0, 1.0), GaussianShiftPair(0.2, 1.0)}};
    const RenyiOrder o(0.5);
    std::vector<double> divs;
    for (const auto& c : fam.codewords) divs.push_back(renyi_gaussian_shift(c, o));
    EXPECT_DOUBLE_EQ(theorem1_bound(fam, o).eps_raw, theorem1_from_divergences(divs, o).eps_raw);
}

TEST(RenyiConverse, OptimalQDominatesOtherChoices) {
    for (std::size_t i = 0; i < 200; ++i) {
        const ChannelFamily base = random_family(instance_seed(99, i));
        const RenyiOrder o(0.05 + 0.02 * static_cast<double>(i % 100));
        const double best = theorem1_bound(base.with_q(QChoice::optimal()), o).eps_raw;
        EXPECT_GE(best, theorem1_bound(base.with_q(QChoice::mixture()), o).eps_raw - 1e-9);
        EXPECT_GE(best, theorem1_bound(base.with_q(QChoice::uniform()), o).eps_raw - 1e-9);
    }
}

TEST(OptimalQ, SymmetricAndHandCases) {
    const std::vector<DiscretePmf> same(3, DiscretePmf{0.2, 0.3, 0.5});
    const OptimalQ s = optimal_q_discrete(same, RenyiOrder(1.5));
    EXPECT_TRUE(s.q.approx_equal(same.front()));
    EXPECT_NEAR(s.normalizer, 1.0, 1e-12);

    const std::vector<DiscretePmf> disjoint{DiscretePmf{1.0, 0.0}, DiscretePmf{0.0, 1.0}};
    const OptimalQ d = optimal_q_discrete(disjoint, RenyiOrder(1));
    EXPECT_TRUE(d.q.approx_equal(DiscretePmf::uniform(2)));
    EXPECT_NEAR(d.normalizer, 2.0 * std::sqrt(0.5), 1e-12);
}

TEST(OptimalQ, BracketEqualsNormalizerPower) {
    for (std::size_t i = 0; i < 30; ++i) {
        const ChannelFamily fam = random_family(instance_seed(5, i)).with_q(QChoice::optimal());
        const RenyiOrder o(0.3 + 0.1 * static_cast<double>(i));
        const OptimalQ q = optimal_q_discrete(fam.conditionals(), o);
        const BoundReport r = theorem1_bound(fam, o);
        EXPECT_NEAR(r.params["log_bracket"].get<double>(), (1 + o.lambda()) * std::log(q.normalizer), 1e-10);
    }
}

TEST(OptimizeLambda, MatchesDenseGridScan) {
    for (std::size_t i = 0; i < 10; ++i) {
        const ChannelFamily fam = random_family(instance_seed(41, i));
        const BoundReport r = optimize_lambda(fam);
        double grid_best = -kInfinity;
        for (int j = 0; j < 10000; ++j) {
            const double l = std::exp(std::log(1e-6) + (std::log(10.0) - std::log(1e-6)) * j / 9999.0);
            grid_best = std::max(grid_best, theorem1_bound(fam, RenyiOrder(l)).eps_raw);
        }
        EXPECT_GE(r.eps_raw, grid_best - 1e-6);
        EXPECT_TRUE(r.has_flag("lambda_interior") || r.has_flag("lambda_at_boundary"));
        ASSERT_TRUE(r.lambda_star.has_value());
        EXPECT_TRUE(std::isfinite(*r.lambda_star));
    }
}

TEST(OptimizeLambda, IdenticalConditionalsStayBelowOracle) {
    const ChannelFamily fam(std::vector<DiscretePmf>(5, DiscretePmf{0.1, 0.9}));
    const BoundReport r = optimize_lambda(fam);
    EXPECT_LE(r.eps_lower, 0.8 + 1e-12);
    EXPECT_NEAR(exact_bayes_error(fam), 0.8, 1e-15);
}

TEST(GammaVariational, SupremumMatchesTheorem1) {
    for (std::size_t i = 0; i < 50; ++i) {
        const ChannelFamily fam = random_family(instance_seed(77, i));
        const RenyiOrder o(0.1 + 0.05 * static_cast<double>(i));
        const BoundReport r = theorem1_bound(fam, o);
        const double lb = r.params["log_bracket"].get<double>();
        EXPECT_NEAR(gamma_grid_sup(lb, fam.m_codewords(), o), r.eps_raw, 1e-8);
        EXPECT_NEAR(gamma_variational_bound(fam, o, *r.gamma_star), r.eps_raw, 1e-12);
    }
}

TEST(GammaVariational, SingleCodewordNonPositive) {
    const ChannelFamily fam({DiscretePmf{0.4, 0.6}});
    for (double g : {0.01, 0.5, 1.0, 3.0, 100.0}) EXPECT_LE(gamma_variational_bound(fam, RenyiOrder(1), g), 0.0);
}

TEST(Fano, HandValues) {
    EXPECT_NEAR(fano_bound(2, 0.0).eps_raw, 0.0, 1e-15);
    EXPECT_NEAR(fano_bound(16, std::numbers::ln2).eps_lower, 0.5, 1e-15);
    EXPECT_THROW(fano_bound(1, 0.0), DomainError);
}

TEST(Fano, MutualInformationIsAverageKlToMixture) {
    const ChannelFamily fam = random_family(instance_seed(2, 0));
    const DiscretePmf pbar = mixture(fam.conditionals());
    double acc = 0.0;
    for (const auto& p : fam.conditionals()) acc += oracle::kl_by_summation(oracle::to_vector(p), oracle::to_vector(pbar));
    EXPECT_NEAR(mutual_information_to_mixture(fam.conditionals()), acc / fam.m_codewords(), 1e-12);
}

TEST(GeneralizedFano, HandValueAndLnMlamb) {
    EXPECT_NEAR(generalized_fano_logM_bound(RenyiOrder(1), 2.0, 0.0, 0.0), 2 * std::numbers::ln2, 1e-15);
    // Denominator l^l (1-eps)^{1+l}/(1+l)^{1+l} - M^{-l} at l=1, eps=0, M=3: 1/4 - 1/3 < 0.
    EXPECT_FALSE(generalized_fano_power_rhs(RenyiOrder(1), 3, 0.0, 0.1).has_value());
    const auto rhs = generalized_fano_power_rhs(RenyiOrder(0.2), 100, 0.1, 0.5);
    ASSERT_TRUE(rhs.has_value());
    const double l = 0.2;
    EXPECT_NEAR(*rhs, 1 + 0.5 / (std::pow(l, l) * std::pow(0.9, 1 + l) / std::pow(1 + l, 1 + l) - std::pow(100.0, -l)),
                1e-12);
}

TEST(GeneralizedFano, OracleTriplesAtSqrtLogSchedule) {
    for (std::size_t i = 0; i < 100; ++i) {
        const ChannelFamily fam = random_family(instance_seed(13, i));
        const auto m = fam.m_codewords();
        if (m < 3) continue;
        const double eps = exact_bayes_error(fam);
        const double info = mutual_information_to_mixture(fam.conditionals());
        const RenyiOrder o(1.0 / std::sqrt(std::log(static_cast<double>(m))));
        if (const auto rhs = generalized_fano_power_rhs(o, m, eps, info)) {
            EXPECT_LE(std::log(static_cast<double>(m)), *rhs + 1e-9);
        }
    }
}

TEST(RiskFromEps, Examples) {
    EXPECT_DOUBLE_EQ(risk_from_eps(LossSpec::identity(1.0, 1.0), 0.5), 0.5);
    const double c = 3.0;
    EXPECT_NEAR(risk_from_eps(LossSpec::power(2.0, c / (2 * std::numbers::sqrt2), 1.0), 0.7), c * c / 8 * 0.7, 1e-14);
    EXPECT_EQ(risk_from_eps(LossSpec::identity(2.0, 0.3), 0.0), 0.0);
    EXPECT_THROW(risk_from_eps(LossSpec::identity(1.0, 1.0), 1.5), DomainError);
}
