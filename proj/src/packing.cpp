#include "converse_kit/packing.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace converse_kit {

std::string to_string(PackingMetric metric) {
    switch (metric) {
        case PackingMetric::hamming: return "hamming";
        case PackingMetric::l2: return "l2";
        case PackingMetric::hellinger_sq: return "hellinger_sq";
        case PackingMetric::set_distance: return "set_distance";
    }
    return "unknown";
}

PackingMetric packing_metric_from_string(const std::string& name) {
    if (name == "hamming") return PackingMetric::hamming;
    if (name == "l2") return PackingMetric::l2;
    if (name == "hellinger_sq") return PackingMetric::hellinger_sq;
    if (name == "set_distance") return PackingMetric::set_distance;
    throw DomainError("unknown packing metric '" + name + "'");
}

double hamming_ball_volume(unsigned m, unsigned radius) {
    double volume = 0.0, binom = 1.0;
    for (unsigned i = 0; i <= std::min(radius, m); ++i) {
        volume += binom;
        binom = binom * (m - i) / (i + 1);
    }
    return volume;
}

double gv_count_bound(unsigned m, unsigned d_min) {
    if (d_min == 0) throw DomainError("gv_count_bound: d_min must be >= 1");
    return std::ldexp(1.0, static_cast<int>(m)) / hamming_ball_volume(m, d_min - 1);
}

namespace {

void mark_ball(std::vector<std::uint8_t>& covered, std::uint64_t center, unsigned m, unsigned first,
               unsigned remaining) {
    covered[center] = 1;
    if (remaining == 0) return;
    for (unsigned j = first; j < m; ++j) mark_ball(covered, center ^ (std::uint64_t{1} << j), m, j + 1, remaining - 1);
}

}  // namespace

BinaryCodebook gv_greedy(unsigned m, unsigned d_min, GreedyOrder order, std::uint64_t seed) {
    if (m == 0 || d_min < 1 || d_min > m) throw DomainError("gv_greedy: requires 1 <= d_min <= m");
    if (m > 24) throw CapabilityError("gv_greedy: exhaustive enumeration supports m <= 24");
    const std::size_t words = std::size_t{1} << m;
    std::vector<std::uint64_t> scan(words);
    std::iota(scan.begin(), scan.end(), std::uint64_t{0});
    if (order == GreedyOrder::seeded_random) {
        std::mt19937_64 rng(seed);
        std::shuffle(scan.begin(), scan.end(), rng);
    }
    // covered[w] == 1 iff w lies within distance d_min - 1 of a kept word.
    std::vector<std::uint8_t> covered(words, 0);
    BinaryCodebook code{m, {}, d_min};
    for (std::uint64_t w : scan) {
        if (covered[w]) continue;
        code.codewords.push_back(w);
        mark_ball(covered, w, m, 0, d_min - 1);
    }
    return code;
}

PackingSet::PackingSet(std::vector<Eigen::VectorXd> elements, PackingMetric metric, double d_min, Distance distance)
    : elements_(std::move(elements)), metric_(metric), d_min_(d_min), distance_(std::move(distance)) {
    if (!(d_min_ > 0.0)) throw DomainError("PackingSet: d_min must be > 0");
    if (!distance_) throw DomainError("PackingSet: distance function required");
}

PackingSet PackingSet::from_codebook(const BinaryCodebook& code) {
    std::vector<Eigen::VectorXd> elements;
    elements.reserve(code.codewords.size());
    for (std::uint64_t w : code.codewords) {
        Eigen::VectorXd v(code.m);
        for (unsigned j = 0; j < code.m; ++j) v[j] = static_cast<double>((w >> j) & 1u);
        elements.push_back(std::move(v));
    }
    return PackingSet(std::move(elements), PackingMetric::hamming, code.d_min_claimed,
                      [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
                          return static_cast<double>((a.array() != b.array()).count());
                      });
}

PackingSet PackingSet::euclidean(std::vector<Eigen::VectorXd> elements, double d_min) {
    return PackingSet(std::move(elements), PackingMetric::l2, d_min,
                      [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).norm(); });
}

std::size_t PackingSet::nearest(const Eigen::VectorXd& estimate) const {
    if (elements_.empty()) throw DomainError("PackingSet::nearest: empty packing");
    std::size_t best = 0;
    double best_d = distance_(estimate, elements_[0]);
    for (std::size_t j = 1; j < elements_.size(); ++j) {
        const double d = distance_(estimate, elements_[j]);
        if (d < best_d) { best_d = d; best = j; }
    }
    return best;
}

Certification verify_packing(const PackingSet& set) {
    Certification cert;
    const auto& e = set.elements();
    for (std::size_t i = 0; i < e.size(); ++i) {
        for (std::size_t j = i + 1; j < e.size(); ++j) {
            const double d = set.distance(e[i], e[j]);
            if (d < cert.min_distance) {
                cert.min_distance = d;
                cert.argmin = std::make_pair(i, j);
            }
        }
    }
    cert.passed = cert.min_distance >= set.d_min();
    return cert;
}

double risk_from_eps(const LossSpec& loss, double eps_lower, const PackingSet& packing) {
    const double separation = 2.0 * loss.a() * loss.psi_n();
    if (packing.d_min() < separation * (1.0 - 1e-12))
        throw DomainError("risk_from_eps: packing d_min is below 2 A psi_n");
    return risk_from_eps(loss, eps_lower);
}

double measure_beta_hat(std::span<const Eigen::VectorXd> codewords) {
    if (codewords.empty()) throw DomainError("measure_beta_hat: empty packing");
    const Eigen::Index n = codewords.front().size();
    Eigen::MatrixXd second_moment = Eigen::MatrixXd::Zero(n, n);
    for (const auto& u : codewords) second_moment.selfadjointView<Eigen::Lower>().rankUpdate(u);
    second_moment = second_moment.selfadjointView<Eigen::Lower>();
    second_moment /= static_cast<double>(codewords.size());
    second_moment.diagonal().array() -= 1.0 / static_cast<double>(n);
    return static_cast<double>(n) * operator_norm(second_moment);
}

SparsePacking cs_random_packing(unsigned n, unsigned k, std::size_t m_target, std::uint64_t seed,
                                std::size_t max_attempts) {
    if (k == 0 || k > n) throw DomainError("cs_random_packing: requires 1 <= k <= n");
    if (n > 512) throw CapabilityError("cs_random_packing: dense operator norm supports n <= 512");
    if (m_target == 0) throw DomainError("cs_random_packing: m_target must be positive");

    SparsePacking out;
    out.n = n;
    out.k = k;
    const double log_existence = 0.25 * k * std::log(static_cast<double>(n) / k);
    out.exceeds_existence_size = std::log(static_cast<double>(m_target)) > log_existence + 1e-12;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<unsigned> coords(n);
    std::iota(coords.begin(), coords.end(), 0u);
    std::vector<unsigned> support(k);

    for (std::size_t attempt = 0; attempt < max_attempts && out.codewords.size() < m_target; ++attempt) {
        std::sample(coords.begin(), coords.end(), support.begin(), k, rng);
        Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
        for (unsigned idx : support) u[idx] = normal(rng);
        const double norm = u.norm();
        if (!(norm > 0.0)) continue;
        u /= norm;
        double closest = kInfinity;
        for (const auto& v : out.codewords) closest = std::min(closest, (u - v).squaredNorm());
        if (closest < 0.5) continue;
        out.min_sq_distance = std::min(out.min_sq_distance, closest);
        out.codewords.push_back(std::move(u));
    }
    out.beta_hat = out.codewords.empty() ? 0.0 : measure_beta_hat(out.codewords);
    if (out.codewords.size() < m_target)
        throw IncompletePackingError("cs_random_packing: reached " + std::to_string(out.codewords.size()) + " of " +
                                         std::to_string(m_target) + " codewords after " +
                                         std::to_string(max_attempts) + " attempts",
                                     out);
    return out;
}

std::vector<std::size_t> trim_packing(std::span<const double> row_norm_sq, double delta_m) {
    const std::size_t m = row_norm_sq.size();
    if (m == 0) throw DomainError("trim_packing: empty list");
    const double md = static_cast<double>(m);
    if (!(delta_m >= 1.0 / md - 1e-15 && delta_m <= 1.0 - 1.0 / md + 1e-15))
        throw DomainError("trim_packing: delta_m must lie in [1/M, 1 - 1/M]");
    const auto keep = static_cast<std::size_t>(std::ceil(delta_m * md - 1e-9));
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return row_norm_sq[a] < row_norm_sq[b]; });
    idx.resize(std::max<std::size_t>(keep, 1));
    return idx;
}

// --- text format -------------------------------------------------------------

namespace {

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_comment(std::ostream& out, const std::string& comment) {
    std::istringstream lines(comment);
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << '\n';
}

bool next_content_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        return true;
    }
    return false;
}

struct Header {
    unsigned m, k;
    std::size_t count;
    double d_min;
    std::string metric;
};

Header read_header(std::istream& in) {
    std::string line;
    if (!next_content_line(in, line)) throw DomainError("packing file: missing header");
    std::istringstream hs(line);
    Header h{};
    if (!(hs >> h.m >> h.k >> h.count >> h.d_min >> h.metric))
        throw DomainError("packing file: malformed header '" + line + "'");
    return h;
}

}  // namespace

void write_codebook(std::ostream& out, const BinaryCodebook& code, const std::string& comment) {
    write_comment(out, comment);
    out << code.m << " 0 " << code.codewords.size() << ' ' << code.d_min_claimed << " hamming\n";
    std::string row(code.m, '0');
    for (std::uint64_t w : code.codewords) {
        for (unsigned j = 0; j < code.m; ++j) row[j] = ((w >> j) & 1u) ? '1' : '0';
        out << row << '\n';
    }
}

BinaryCodebook read_codebook(std::istream& in) {
    const Header h = read_header(in);
    if (h.metric != "hamming") throw DomainError("read_codebook: metric must be hamming");
    if (h.m == 0 || h.m > 64) throw DomainError("read_codebook: length must be in [1, 64]");
    BinaryCodebook code{h.m, {}, static_cast<unsigned>(h.d_min)};
    std::string line;
    for (std::size_t i = 0; i < h.count; ++i) {
        if (!next_content_line(in, line) || line.size() != h.m)
            throw DomainError("read_codebook: codeword " + std::to_string(i) + " missing or wrong length");
        std::uint64_t w = 0;
        for (unsigned j = 0; j < h.m; ++j) {
            if (line[j] == '1') w |= std::uint64_t{1} << j;
            else if (line[j] != '0') throw DomainError("read_codebook: non-binary character");
        }
        code.codewords.push_back(w);
    }
    return code;
}

void write_sparse_packing(std::ostream& out, const SparsePacking& packing, const std::string& comment) {
    write_comment(out, comment);
    const double d_min = std::sqrt(packing.min_sq_distance);
    out << packing.n << ' ' << packing.k << ' ' << packing.codewords.size() << ' '
        << format_double(std::isfinite(d_min) ? d_min : 0.0) << " l2\n";
    for (const auto& u : packing.codewords) {
        for (Eigen::Index j = 0; j < u.size(); ++j) out << (j ? " " : "") << format_double(u[j]);
        out << '\n';
    }
}

SparsePacking read_sparse_packing(std::istream& in) {
    const Header h = read_header(in);
    if (h.metric != "l2") throw DomainError("read_sparse_packing: metric must be l2");
    SparsePacking p;
    p.n = h.m;
    p.k = h.k;
    std::string line;
    for (std::size_t i = 0; i < h.count; ++i) {
        if (!next_content_line(in, line)) throw DomainError("read_sparse_packing: missing codeword");
        Eigen::VectorXd u(h.m);
        const char* cur = line.data();
        const char* end = line.data() + line.size();
        for (unsigned j = 0; j < h.m; ++j) {
            while (cur < end && *cur == ' ') ++cur;
            auto [next, ec] = std::from_chars(cur, end, u[j]);
            if (ec != std::errc()) throw DomainError("read_sparse_packing: bad number in codeword " + std::to_string(i));
            cur = next;
        }
        p.codewords.push_back(std::move(u));
    }
    for (std::size_t i = 0; i < p.codewords.size(); ++i)
        for (std::size_t j = i + 1; j < p.codewords.size(); ++j)
            p.min_sq_distance = std::min(p.min_sq_distance, (p.codewords[i] - p.codewords[j]).squaredNorm());
    p.beta_hat = p.codewords.empty() ? 0.0 : measure_beta_hat(p.codewords);
    p.exceeds_existence_size =
        !p.codewords.empty() && std::log(static_cast<double>(p.codewords.size())) >
                                    0.25 * p.k * std::log(static_cast<double>(p.n) / p.k) + 1e-12;
    return p;
}

}  // namespace converse_kit
