#include "converse_kit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "converse_kit/errors.hpp"
#include "converse_kit/oracle.hpp"
#include "converse_kit/packing.hpp"
#include "converse_kit/parallel.hpp"

namespace converse_kit {

namespace {

constexpr double kTolerance = 1e-9;
constexpr std::size_t kMaxRecordedFailures = 20;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// Per-instance outcome, merged in index order so the result is deterministic.
struct CaseOutcome {
    double margin = kInfinity;
    std::vector<std::string> failures;

    void check(double slack, const std::string& what) {
        margin = std::min(margin, slack);
        if (!(slack >= -kTolerance)) failures.push_back(what + " (slack " + fmt(slack) + ")");
    }
};

SuiteResult merge(std::string name, const std::vector<CaseOutcome>& cases) {
    SuiteResult r;
    r.suite = std::move(name);
    r.total = cases.size();
    for (const auto& c : cases) {
        r.worst_margin = std::min(r.worst_margin, c.margin);
        if (c.failures.empty()) ++r.passed;
        for (const auto& f : c.failures)
            if (r.failures.size() < kMaxRecordedFailures) r.failures.push_back(f);
    }
    return r;
}

DiscretePmf random_pmf(std::mt19937_64& rng, std::size_t k) {
    std::uniform_real_distribution<double> unit;
    std::normal_distribution<double> normal;
    const double spread = 3.0 * unit(rng);
    Eigen::VectorXd w(static_cast<Eigen::Index>(k));
    for (auto& x : w) x = unit(rng) < 0.15 ? 0.0 : std::exp(spread * normal(rng));
    if (!(w.sum() > 0.0)) w[static_cast<Eigen::Index>(rng() % k)] = 1.0;
    return DiscretePmf::normalized(w);
}

}  // namespace

std::string SuiteResult::summary() const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: %zu/%zu pass, worst margin %.6g", suite.c_str(), passed, total, worst_margin);
    return buf;
}

std::uint64_t instance_seed(std::uint64_t suite_seed, std::size_t index) {
    std::uint64_t z = suite_seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

ChannelFamily random_family(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> m_dist(2, 6), k_dist(2, 12), n_dist(1, 3);
    const int m = m_dist(rng), k = k_dist(rng), n = n_dist(rng);
    std::vector<DiscretePmf> conds;
    for (int i = 0; i < m; ++i) conds.push_back(random_pmf(rng, static_cast<std::size_t>(k)));
    return ChannelFamily(std::move(conds)).iid_power(static_cast<unsigned>(n));
}

std::vector<double> lambda_grid() {
    std::vector<double> grid(20);
    for (int i = 0; i < 20; ++i) grid[i] = std::pow(10.0, -2.0 + 3.0 * i / 19.0);
    return grid;
}

SuiteResult verify_soundness(std::uint64_t seed, std::size_t count) {
    const auto grid = lambda_grid();
    std::vector<CaseOutcome> cases(count);
    parallel_for(count, [&](std::size_t i) {
        const ChannelFamily base = random_family(instance_seed(seed, i));
        const double exact = exact_bayes_error(base);
        auto& out = cases[i];
        for (const QChoice& q : {QChoice::uniform(), QChoice::mixture(), QChoice::optimal()}) {
            const ChannelFamily family = base.with_q(q);
            for (double l : grid) {
                const BoundReport r = theorem1_bound(family, RenyiOrder(l));
                out.check(exact - r.eps_lower,
                          "instance " + std::to_string(i) + " Q=" + q.name() + " lambda=" + fmt(l));
            }
        }
        const BoundReport best = optimize_lambda(base.with_q(QChoice::mixture()));
        out.check(exact - best.eps_lower, "instance " + std::to_string(i) + " optimized lambda");
    });
    SuiteResult r = merge("soundness", cases);
    r.details["seed"] = seed;
    r.details["lambda_grid_points"] = grid.size();
    return r;
}

SuiteResult verify_fano_recovery(std::uint64_t seed, std::size_t count) {
    const auto grid = lambda_grid();
    std::vector<CaseOutcome> cases(count);
    parallel_for(count, [&](std::size_t i) {
        const ChannelFamily family = random_family(instance_seed(seed, i));
        const double exact = exact_bayes_error(family);
        const std::string tag = "instance " + std::to_string(i);
        auto& out = cases[i];
        out.check(exact - fano_bound(family).eps_lower, tag + " fano");

        const auto& conds = family.conditionals();
        const DiscretePmf pbar = mixture(conds);
        double t = 1.0;
        for (const auto& p : conds) t = std::max(t, max_likelihood_ratio(p, pbar));
        const double info = mutual_information_to_mixture(conds);
        const auto m = family.m_codewords();
        const double log_m = std::log(static_cast<double>(m));
        out.check(static_cast<double>(m) * (1.0 + 1e-12) - t, tag + " t <= M");
        for (double l : grid) {
            const RenyiOrder order(l);
            out.check(generalized_fano_logM_bound(order, t, info, exact) - log_m, tag + " lnM bound lambda=" + fmt(l));
            out.check(exact - generalized_fano_bound(family, order).eps_lower,
                      tag + " generalized fano eps lambda=" + fmt(l));
            if (m >= 3) {
                if (const auto rhs = generalized_fano_power_rhs(order, m, exact, info))
                    out.check(*rhs - log_m, tag + " power-form lambda=" + fmt(l));
            }
        }
    });
    SuiteResult r = merge("fano-recovery", cases);
    r.details["seed"] = seed;
    return r;
}

SuiteResult verify_divergence(std::uint64_t seed, std::size_t count) {
    std::vector<CaseOutcome> cases;
    auto relative_slack = [](double a, double b) {
        return 1e-6 * std::max(std::abs(a), std::abs(b)) + 1e-14 - std::abs(a - b);
    };

    // Gaussian closed form against quadrature: 10 shifts x 10 orders.
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            const double shift_sq = std::pow(10.0, -3.0 + 4.5 * i / 9.0);
            const double l = std::pow(10.0, -1.5 + 2.0 * j / 9.0);
            const double sigma_sq = 0.25 + 0.5 * ((i + j) % 4);
            const GaussianShiftPair pair(shift_sq, sigma_sq);
            CaseOutcome c;
            c.check(relative_slack(renyi_gaussian_shift(pair, RenyiOrder(l)),
                                   renyi_gaussian_quadrature(pair, RenyiOrder(l))),
                    "gaussian shift_sq=" + fmt(shift_sq) + " lambda=" + fmt(l));
            cases.push_back(std::move(c));
        }
    }
    // Bernoulli closed form against the discrete kernel: 10 x 10 (p, q), order varies.
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            const double p = 0.01 + 0.98 * i / 9.0, q = 0.015 + 0.97 * j / 9.0;
            const double l = std::pow(10.0, -1.0 + 1.5 * ((i * 10 + j) % 7) / 6.0);
            const RenyiOrder order(l);
            CaseOutcome c;
            c.check(relative_slack(renyi_bernoulli(BernoulliPair(p, q), order),
                                   renyi_discrete(DiscretePmf{p, 1.0 - p}, DiscretePmf{q, 1.0 - q}, order)),
                    "bernoulli p=" + fmt(p) + " q=" + fmt(q) + " lambda=" + fmt(l));
            cases.push_back(std::move(c));
        }
    }
    // Random pairs: Hellinger <= kappa(lambda, t) KL, and P[T=1] - gamma Q[T=1] <= P[dP/dQ > gamma].
    for (std::size_t i = 0; i < count; ++i) {
        std::mt19937_64 rng(instance_seed(seed, i));
        std::uniform_real_distribution<double> unit;
        const std::size_t k = 2 + rng() % 11;
        const DiscretePmf p = random_pmf(rng, k);
        Eigen::VectorXd qw = p.probs() + Eigen::VectorXd::NullaryExpr(static_cast<Eigen::Index>(k), [&] { return unit(rng); });
        const DiscretePmf q = DiscretePmf::normalized(qw);
        const RenyiOrder order(0.05 + 1.95 * unit(rng));
        const double t = max_likelihood_ratio(p, q);
        CaseOutcome c;
        const double kl = kl_discrete(p, q);
        c.check(kappa(order, t) * kl * (1.0 + 1e-9) - hellinger_discrete(p, q, order),
                "hellinger-kl pair " + std::to_string(i));
        const double gamma = 0.2 + 3.0 * unit(rng);
        const Eigen::VectorXd test =
            Eigen::VectorXd::NullaryExpr(static_cast<Eigen::Index>(k), [&] { return unit(rng); });
        c.check(likelihood_ratio_tail(p, q, gamma) - test_advantage(p, q, gamma, test),
                "test advantage pair " + std::to_string(i));
        c.check(e_gamma_divergence(p, q, gamma) - test_advantage(p, q, gamma, test),
                "e_gamma pair " + std::to_string(i));
        cases.push_back(std::move(c));
    }
    SuiteResult r = merge("divergence", cases);
    r.details["seed"] = seed;
    return r;
}

SuiteResult verify_packing(std::uint64_t seed, std::size_t count, unsigned m, unsigned d_min) {
    std::vector<CaseOutcome> cases;
    SuiteResult r;
    for (GreedyOrder order : {GreedyOrder::lexicographic, GreedyOrder::seeded_random}) {
        const BinaryCodebook code = gv_greedy(m, d_min, order, seed);
        const double gv = gv_count_bound(m, d_min);
        const Certification cert = verify_packing(PackingSet::from_codebook(code));
        CaseOutcome c;
        const std::string tag = order == GreedyOrder::lexicographic ? "gv lexicographic" : "gv seeded";
        c.check(static_cast<double>(code.codewords.size()) - std::ceil(gv - 1e-9), tag + " size vs GV count");
        c.check(cert.passed ? cert.min_distance - d_min : -1.0, tag + " minimum distance");
        cases.push_back(std::move(c));
        r.details[order == GreedyOrder::lexicographic ? "gv_size_lexicographic" : "gv_size_seeded"] =
            code.codewords.size();
        r.details["gv_count_bound"] = gv;
    }

    {
        CaseOutcome c;
        try {
            const SparsePacking sp = cs_random_packing(64, 4, 16, seed);
            double worst_norm = 0.0;
            int worst_support = 0;
            for (const auto& u : sp.codewords) {
                worst_norm = std::max(worst_norm, std::abs(u.norm() - 1.0));
                worst_support = std::max(worst_support, static_cast<int>((u.array() != 0.0).count()));
            }
            c.check(1e-12 - worst_norm, "sparse unit norms");
            c.check(4.0 - worst_support, "sparse sparsity");
            c.check(sp.min_sq_distance - 0.5, "sparse pairwise squared distance");
            r.details["sparse_beta_hat"] = sp.beta_hat;
            r.details["sparse_min_sq_distance"] = sp.min_sq_distance;
        } catch (const IncompletePackingError& e) {
            c.check(-1.0, e.what());
        }
        cases.push_back(std::move(c));
    }

    for (std::size_t i = 0; i < count; ++i) {
        std::mt19937_64 rng(instance_seed(seed, i));
        std::uniform_real_distribution<double> unit;
        const std::size_t size = 2 + rng() % 200;
        std::vector<double> values(size);
        for (auto& v : values) v = unit(rng) < 0.1 ? 0.0 : -std::log(unit(rng) + 1e-300) * (1.0 + 10.0 * unit(rng));
        const double md = static_cast<double>(size);
        const double delta = 1.0 / md + (1.0 - 2.0 / md) * unit(rng);
        const auto kept = trim_packing(values, delta);
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= md;
        double worst_kept = 0.0;
        for (auto idx : kept) worst_kept = std::max(worst_kept, values[idx]);
        CaseOutcome c;
        c.check(static_cast<double>(kept.size()) - std::ceil(delta * md - 1e-9), "trim size list " + std::to_string(i));
        c.check(mean / (1.0 - delta) * (1.0 + 1e-12) - worst_kept, "trim order statistic list " + std::to_string(i));
        cases.push_back(std::move(c));
    }

    SuiteResult merged = merge("packing", cases);
    merged.details = std::move(r.details);
    merged.details["seed"] = seed;
    return merged;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed, std::size_t count, unsigned m, unsigned d_min) {
    if (name == "soundness") return verify_soundness(seed, count);
    if (name == "fano-recovery") return verify_fano_recovery(seed, count);
    if (name == "divergence") return verify_divergence(seed, count);
    if (name == "packing") return verify_packing(seed, count, m, d_min);
    throw ConfigError("unknown suite '" + name + "' (expected soundness, divergence, fano-recovery or packing)");
}

}  // namespace converse_kit
