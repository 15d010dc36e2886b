#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "converse_kit/converse.hpp"
#include "converse_kit/errors.hpp"

namespace converse_kit {

enum class PackingMetric { hamming, l2, hellinger_sq, set_distance };
std::string to_string(PackingMetric metric);
PackingMetric packing_metric_from_string(const std::string& name);

/// Binary code of length m <= 64; bit j of a codeword is coordinate j.
struct BinaryCodebook {
    unsigned m = 0;
    std::vector<std::uint64_t> codewords;
    unsigned d_min_claimed = 1;
};

inline unsigned hamming_distance(std::uint64_t a, std::uint64_t b) {
    return static_cast<unsigned>(__builtin_popcountll(a ^ b));
}

/// Number of words within Hamming distance `radius` of a fixed word.
double hamming_ball_volume(unsigned m, unsigned radius);

/// Gilbert-Varshamov count 2^m / V(m, d_min - 1).
double gv_count_bound(unsigned m, unsigned d_min);

enum class GreedyOrder { lexicographic, seeded_random };

/// Greedy code: scan all 2^m words in the given order, keep each word at
/// distance >= d_min from everything kept so far. The result is maximal, so
/// its size is at least gv_count_bound(m, d_min).
/// Throws CapabilityError for m > 24 and DomainError unless 1 <= d_min <= m.
BinaryCodebook gv_greedy(unsigned m, unsigned d_min, GreedyOrder order = GreedyOrder::lexicographic,
                         std::uint64_t seed = 0);

/// Packing set: elements with a metric and a claimed minimum distance.
class PackingSet {
public:
    using Distance = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

    PackingSet(std::vector<Eigen::VectorXd> elements, PackingMetric metric, double d_min, Distance distance);

    static PackingSet from_codebook(const BinaryCodebook& code);
    static PackingSet euclidean(std::vector<Eigen::VectorXd> elements, double d_min);

    const std::vector<Eigen::VectorXd>& elements() const { return elements_; }
    std::size_t size() const { return elements_.size(); }
    PackingMetric metric() const { return metric_; }
    double d_min() const { return d_min_; }
    double distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const { return distance_(a, b); }

    /// argmin_j d(estimate, element_j), lowest index on ties.
    std::size_t nearest(const Eigen::VectorXd& estimate) const;

private:
    std::vector<Eigen::VectorXd> elements_;
    PackingMetric metric_;
    double d_min_;
    Distance distance_;
};

struct Certification {
    double min_distance = kInfinity;  ///< +inf for fewer than two elements
    std::optional<std::pair<std::size_t, std::size_t>> argmin;
    bool passed = true;
};

Certification verify_packing(const PackingSet& set);

/// Risk assembly with the separation precondition d_min >= 2 A psi_n checked
/// against an actual packing.
double risk_from_eps(const LossSpec& loss, double eps_lower, const PackingSet& packing);

/// Unit-norm k-sparse vectors in R^n with pairwise squared distance >= 1/2.
struct SparsePacking {
    unsigned n = 0;
    unsigned k = 0;
    std::vector<Eigen::VectorXd> codewords;
    double beta_hat = 0.0;        ///< n * || (1/M) sum u u^T - I/n ||_op
    double min_sq_distance = kInfinity;
    bool exceeds_existence_size = false;  ///< M > (n/k)^{k/4}
};

class IncompletePackingError : public std::runtime_error {
public:
    IncompletePackingError(const std::string& what, SparsePacking best)
        : std::runtime_error(what), best_(std::move(best)) {}
    const SparsePacking& best() const { return best_; }

private:
    SparsePacking best_;
};

/// Rejection sampler: uniform random support of size k, isotropic Gaussian
/// entries normalized to the unit sphere; a draw is kept when it is at squared
/// distance >= 1/2 from every kept vector. Deterministic given the seed.
/// Throws IncompletePackingError (carrying the partial packing) when
/// max_attempts draws do not reach m_target.
SparsePacking cs_random_packing(unsigned n, unsigned k, std::size_t m_target, std::uint64_t seed,
                                std::size_t max_attempts = 100000);

/// n * || (1/M) sum_i u_i u_i^T - I/n ||_op via operator_norm.
double measure_beta_hat(std::span<const Eigen::VectorXd> codewords);

/// Indices of the ceil(delta_m M) smallest entries (ties by index).
/// Throws DomainError unless delta_m lies in [1/M, 1 - 1/M].
std::vector<std::size_t> trim_packing(std::span<const double> row_norm_sq, double delta_m);

/// Largest absolute eigenvalue of a symmetric matrix by power iteration
/// (iterates A v and tracks ||A v||, which increases monotonically to
/// max |eigenvalue|). Relative accuracy ~1e-8 or better. Throws DomainError
/// for non-square or non-symmetric input.
template <typename Derived>
typename Derived::Scalar operator_norm(const Eigen::MatrixBase<Derived>& matrix) {
    using Scalar = typename Derived::Scalar;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a = matrix;
    if (a.rows() != a.cols()) throw DomainError("operator_norm: matrix must be square");
    if (a.size() == 0) return Scalar(0);
    const Scalar scale = a.cwiseAbs().maxCoeff();
    if (scale == Scalar(0)) return Scalar(0);
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12) * scale)
        throw DomainError("operator_norm: matrix must be symmetric");

    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> normal;
    for (int restart = 0; restart < 4; ++restart) {
        Vec v(a.rows());
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Scalar(normal(rng));
        v.normalize();
        Scalar estimate = 0;
        int stable = 0;
        for (int it = 0; it < 200000; ++it) {
            Vec w = a * v;
            const Scalar norm = w.norm();
            if (norm == Scalar(0)) break;  // start vector fell into the kernel; restart
            const Scalar change = std::abs(norm - estimate);
            estimate = norm;
            v = w / norm;
            stable = change <= Scalar(1e-14) * norm ? stable + 1 : 0;
            if (stable >= 3) break;
        }
        if (estimate > Scalar(0)) return estimate;
    }
    return Scalar(0);
}

// Line-oriented text format: '#' comment lines, a header `m k M d_min metric`,
// then one codeword per line. Binary codewords are 0/1 strings (character j is
// coordinate j); real codewords are %.17g values.
void write_codebook(std::ostream& out, const BinaryCodebook& code, const std::string& comment = {});
BinaryCodebook read_codebook(std::istream& in);
void write_sparse_packing(std::ostream& out, const SparsePacking& packing, const std::string& comment = {});
SparsePacking read_sparse_packing(std::istream& in);

}  // namespace converse_kit
