#include "converse_kit/applications.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "converse_kit/errors.hpp"
#include "converse_kit/parallel.hpp"

namespace converse_kit {

namespace {

constexpr double kLog2 = std::numbers::ln2;

void require(bool ok, const char* inequality) {
    if (!ok) throw ConfigError(std::string("configuration violates ") + inequality);
}

void finish_eps(BoundReport& r) {
    r.eps_lower = clamp_probability(r.eps_raw);
    if (!(r.eps_raw >= 0.0)) r.add_flag("clamped");
}

BoundReport start_report(BoundMethod method, const Json& config) {
    BoundReport r;
    r.method = method;
    r.params["config"] = config;
    r.params["diagnostics"] = Json::array();
    return r;
}

void set_ratio(ComparisonReport& out) {
    if (out.strong.risk_lower && out.fano.risk_lower && *out.fano.risk_lower > 0.0)
        out.ratio = *out.strong.risk_lower / *out.fano.risk_lower;
}

}  // namespace

// --- density estimation -----------------------------------------------------

double DensityConfig::effective_nu() const {
    if (!kappa_sched) return nu;
    return std::pow(c0 / (c * c * a), 0.2) * (1.0 - std::pow(n, -1.0 / *kappa_sched));
}

void DensityConfig::validate() const {
    require(n >= 1.0, "n >= 1");
    require(c >= 0.0, "c >= 0");
    require(a > 0.0, "a > 0");
    require(c0 > 0.0, "c0 > 0");
    if (kappa_sched) {
        require(*kappa_sched > 25.0, "kappa_sched > 25");
        require(c > 0.0, "c > 0 (nu schedule)");
    }
    const double v = effective_nu();
    require(v > 0.0, "nu > 0");
    if (c > 0.0) require(v < std::pow(c0 / (c * c * a), 0.2), "nu < (c0/(c^2 a))^{1/5}");
    require(effective_c_g() >= 0.0 && effective_c_g() < 1.0, "c_g < 1");
}

Json DensityConfig::to_json() const {
    Json j;
    j["app"] = "density";
    j["n"] = n;
    j["nu"] = nu;
    j["nu_effective"] = effective_nu();
    j["c"] = c;
    j["a"] = a;
    j["c0"] = c0;
    j["c_g"] = effective_c_g();
    if (kappa_sched) j["kappa_sched"] = *kappa_sched;
    return j;
}

double density_eps_at_bandwidth(const DensityConfig& cfg, double m) {
    const double rate = cfg.c * cfg.c * cfg.a;
    return 1.0 - 2.0 * std::exp(-(m / 2.0) * (cfg.c0 - rate * cfg.n / std::pow(m, 5)));
}

ComparisonReport density_bound(const DensityConfig& cfg) {
    cfg.validate();
    const Json config = cfg.to_json();
    const double nu = cfg.effective_nu();
    const double rate = cfg.c * cfg.c * cfg.a;
    const double n5 = std::pow(cfg.n, 0.2);
    const double m = n5 / nu;
    const double psi = rate * std::pow(nu, 4) / 6.0 * std::pow(cfg.n, -0.8);

    ComparisonReport out;
    BoundReport& s = out.strong;
    s = start_report(BoundMethod::theorem1, config);
    s.lambda_star = 1.0;
    const double exponent = (n5 / (2.0 * nu)) * (cfg.c0 - std::pow(nu, 5) * rate);
    s.eps_raw = 1.0 - 2.0 * std::exp(-exponent);
    finish_eps(s);
    s.risk_lower = psi * s.eps_lower;
    s.params["m"] = m;
    s.params["psi_n"] = psi;
    s.params["exponent"] = exponent;
    const double pre = density_eps_at_bandwidth(cfg, m);
    s.params["pre_substitution_eps_raw"] = pre;
    s.params["pre_substitution_discrepancy"] = std::abs(pre - s.eps_raw);
    // Generic converse with the exact bracket (1 + c^2 a/m^4)^n and log M = c0 m.
    s.params["generic_route_eps_raw"] = theorem1_eps_raw(cfg.n * std::log1p(rate / std::pow(m, 4)), cfg.c0 * m, RenyiOrder(1.0));
    const double m_floor = std::floor(m);
    s.params["m_floor"] = m_floor;
    if (m_floor >= 1.0) {
        const double eps_floor = density_eps_at_bandwidth(cfg, m_floor);
        s.params["eps_raw_at_m_floor"] = eps_floor;
        s.params["risk_at_m_floor"] = rate / (6.0 * std::pow(m_floor, 4)) * clamp_probability(eps_floor);
        s.params["m_floor_discrepancy"] = eps_floor - s.eps_raw;
    }

    BoundReport& f = out.fano;
    f = start_report(BoundMethod::fano, config);
    const double cg = cfg.effective_c_g();
    f.eps_raw = 1.0 - (2.0 * rate * std::pow(nu, 5) / (1.0 - cg) + kLog2 / n5) / cfg.c0;
    finish_eps(f);
    f.risk_lower = psi * f.eps_lower;
    f.params["eps_supremum"] = 1.0 - 2.0 * rate * std::pow(nu, 5) / ((1.0 - cg) * cfg.c0);

    out.asymptote = std::pow(cfg.c0, 0.8) * std::pow(rate, 0.2) / 6.0 * std::pow(cfg.n, -0.8);
    set_ratio(out);
    return out;
}

// --- active learning ---------------------------------------------------------

void ActiveConfig::validate() const {
    require(n >= 1.0, "n >= 1");
    require(d >= 2.0, "d >= 2");
    require(alpha > 0.0, "alpha > 0");
    require(kappa >= 1.0, "kappa >= 1");
    require(L > 0.0, "L > 0");
    require(H > 0.0, "H > 0");
    require(c > 0.0 && c <= 0.5, "c in (0, 1/2]");
    require(nu > 0.0, "nu > 0");
    require(lambda > 0.0 && lambda <= 1.0, "lambda in (0, 1]");
}

Json ActiveConfig::to_json() const {
    Json j;
    j["app"] = "active";
    j["n"] = n;
    j["d"] = d;
    j["alpha"] = alpha;
    j["kappa"] = kappa;
    j["L"] = L;
    j["c"] = c;
    j["H"] = H;
    j["nu"] = nu;
    j["lambda"] = lambda;
    j["rho"] = rho();
    return j;
}

namespace {

double active_log_lead(double l) { return std::log1p(l) - (l / (1.0 + l)) * std::log(l); }

}  // namespace

double active_eps_at_bandwidth(const ActiveConfig& cfg, double m) {
    const double l = cfg.lambda;
    const double beta_m = cfg.L * cfg.H * std::pow(m, -cfg.alpha);
    const double denom = 1.0 - 2.0 * cfg.c * beta_m;
    if (!(denom > 0.0)) return -kInfinity;
    const double growth = 16.0 * cfg.c * cfg.c * std::pow(beta_m, 2.0 * (cfg.kappa - 1.0)) * cfg.n / denom;
    const double packing = std::pow(m, cfg.d - 1.0) * kLog2 / 8.0;
    return 1.0 - std::exp(active_log_lead(l) + (l / (1.0 + l)) * (growth - packing));
}

double active_excess_risk_floor(const ActiveConfig& cfg, double psi) {
    return std::min(4.0 * cfg.c / (cfg.kappa * std::pow(2.0, cfg.kappa)) * std::pow(psi, cfg.kappa), psi);
}

ComparisonReport active_bound(const ActiveConfig& cfg) {
    cfg.validate();
    const Json config = cfg.to_json();
    const double l = cfg.lambda;
    const double rho = cfg.rho();
    const double e = 2.0 * cfg.kappa - 2.0 + rho;
    const double lh = cfg.L * cfg.H;
    const double c2 = cfg.c * cfg.c;
    const double m = std::pow(cfg.n, 1.0 / (cfg.alpha * (2.0 * cfg.kappa - 2.0) + cfg.d - 1.0)) / cfg.nu;

    ComparisonReport out;
    BoundReport& s = out.strong;
    s = start_report(BoundMethod::theorem1, config);
    s.lambda_star = l;
    const double denom = 1.0 - 2.0 * cfg.c * lh * std::pow(cfg.n, -1.0 / e) / cfg.nu;
    if (denom > 0.0) {
        const double inner = kLog2 / 8.0 - 16.0 * c2 * std::pow(lh, 2.0 * cfg.kappa - 2.0) *
                                               std::pow(cfg.nu, cfg.d - 1.0 + 2.0 * cfg.alpha * (cfg.kappa - 1.0)) / denom;
        const double exponent = -l * std::pow(cfg.n, rho / e) / ((1.0 + l) * std::pow(cfg.nu, cfg.d - 1.0)) * inner;
        s.eps_raw = 1.0 - std::exp(active_log_lead(l) + exponent);
        s.params["bracket"] = inner;
        s.params["exponent"] = exponent;
        if (!(inner > 0.0)) s.add_flag("out_of_regime");
    } else {
        s.eps_raw = -kInfinity;
        s.add_flag("out_of_regime");
    }
    finish_eps(s);

    const double psi = lh * std::pow(m, -cfg.alpha) / 16.0;
    const double prefactor =
        4.0 * cfg.c * std::pow(cfg.nu, cfg.kappa * cfg.alpha) / cfg.kappa * std::pow(lh / 32.0, cfg.kappa) *
        std::pow(cfg.n, -cfg.kappa / e);
    const double floor_value = active_excess_risk_floor(cfg, psi);
    double risk_scale = prefactor;
    if (floor_value < prefactor * (1.0 - 1e-12)) {
        risk_scale = floor_value;
        s.add_flag("f_psi_min_differs");
    }
    s.risk_lower = risk_scale * s.eps_lower;
    s.params["m"] = m;
    s.params["psi_n"] = psi;
    s.params["f_psi_power_form"] = prefactor;
    s.params["f_psi_min"] = floor_value;

    const double em = active_eps_at_bandwidth(cfg, m);
    s.params["bandwidth_form_eps_raw"] = em;
    s.params["bandwidth_form_discrepancy"] = std::abs(em - s.eps_raw);
    const double beta_m = lh * std::pow(m, -cfg.alpha);
    if (1.0 - 2.0 * cfg.c * beta_m > 0.0) {
        const double per_sample = 16.0 * c2 * std::pow(beta_m, 2.0 * (cfg.kappa - 1.0)) / (1.0 - 2.0 * cfg.c * beta_m);
        s.params["generic_route_eps_raw"] =
            theorem1_eps_raw(per_sample * l * cfg.n, std::pow(m, cfg.d - 1.0) * kLog2 / 8.0, RenyiOrder(l));
        const double tv = 2.0 * cfg.c * std::pow(beta_m, cfg.kappa - 1.0);
        const double q_min = 0.5 - cfg.c * beta_m;
        s.params["verdu_sason_per_sample"] = verdu_sason_renyi_upper(tv, q_min, RenyiOrder(l));
        s.params["lemma_per_sample"] = per_sample;
    }
    const double m_floor = std::floor(m);
    s.params["m_floor"] = m_floor;
    if (m_floor >= 1.0) {
        const double eps_floor = active_eps_at_bandwidth(cfg, m_floor);
        s.params["eps_raw_at_m_floor"] = eps_floor;
        s.params["m_floor_discrepancy"] = eps_floor - em;
    }

    BoundReport& f = out.fano;
    f = start_report(BoundMethod::fano, config);
    const double xi = 256.0 / kLog2 * c2 * std::pow(lh, 2.0 * cfg.kappa - 2.0) * cfg.nu;
    f.eps_raw = 1.0 - 2.0 * xi -
                std::sqrt(32.0 * xi * std::pow(cfg.nu, cfg.d - 1.0) / kLog2) *
                    std::pow(cfg.n, -rho / (4.0 * (cfg.kappa - 1.0) + 2.0 * rho));
    finish_eps(f);
    f.risk_lower = risk_scale * f.eps_lower;
    f.params["xi"] = xi;
    if (xi >= 0.5) f.add_flag("vacuous");

    out.asymptote = 4.0 * cfg.c / (cfg.kappa * std::pow(32.0, cfg.kappa)) *
                    std::pow(kLog2 / (128.0 * c2), cfg.kappa / e) * std::pow(lh, cfg.kappa * rho / e) *
                    std::pow(cfg.n, -cfg.kappa / e);
    set_ratio(out);
    return out;
}

// --- compressed sensing ------------------------------------------------------

double CsConfig::log_m() const { return (k / 4.0) * std::log(n / k); }

double CsConfig::effective_delta_m() const { return delta_m.value_or(1.0 / log_m()); }

void CsConfig::validate() const {
    require(k > 0.0, "k > 0");
    require(n >= k, "n >= k");
    require(sigma_sq > 0.0, "sigma_sq > 0");
    require(frob_norm_sq > 0.0, "frob_norm_sq > 0");
    require(lambda > 0.0, "lambda > 0");
    require(Delta > 0.0 && Delta < 1.0, "Delta in (0, 1)");
    require(beta >= 0.0, "beta >= 0");
    if (delta_m) require(*delta_m > 0.0 && *delta_m < 1.0, "delta_m in (0, 1)");
}

Json CsConfig::to_json() const {
    Json j;
    j["app"] = "cs";
    j["n"] = n;
    j["k"] = k;
    j["sigma_sq"] = sigma_sq;
    j["frob_norm_sq"] = frob_norm_sq;
    j["lambda"] = lambda;
    j["Delta"] = Delta;
    j["beta"] = beta;
    if (delta_m) j["delta_m"] = *delta_m;
    j["log_m"] = log_m();
    return j;
}

ComparisonReport cs_bound(const CsConfig& cfg) {
    cfg.validate();
    const Json config = cfg.to_json();
    const double l = cfg.lambda;
    const double log_m = cfg.log_m();
    const double delta = cfg.effective_delta_m();
    const bool degenerate = !(log_m > 2.0);
    const bool usable = log_m > 0.0 && delta > 0.0 && delta < 1.0;

    ComparisonReport out;
    BoundReport& s = out.strong;
    s = start_report(BoundMethod::theorem1, config);
    s.lambda_star = l;
    s.params["log_m"] = log_m;
    s.params["delta_m"] = delta;
    double risk_scale = 0.0;
    if (usable) {
        s.eps_raw = 1.0 - std::exp(std::log1p(l) + (l / (1.0 + l)) * (-cfg.Delta * log_m - std::log(l) - std::log(delta)));
        const double c_sq = 2.0 * cfg.n * cfg.sigma_sq * (1.0 - delta) * log_m * (1.0 - cfg.Delta) /
                            (cfg.frob_norm_sq * (1.0 + cfg.beta) * (1.0 + l));
        risk_scale = c_sq / (8.0 * cfg.n);
        s.params["c_sq"] = c_sq;
        s.params["psi_n"] = std::sqrt(c_sq) / (2.0 * std::numbers::sqrt2);
        const double log_bracket = l * (1.0 + l) * cfg.frob_norm_sq * c_sq * (1.0 + cfg.beta) /
                                   (2.0 * cfg.sigma_sq * cfg.n * (1.0 - delta));
        s.params["generic_route_eps_raw"] = theorem1_eps_raw(log_bracket, std::log(delta) + log_m, RenyiOrder(l));
    } else {
        s.eps_raw = -kInfinity;
    }
    finish_eps(s);
    s.risk_lower = risk_scale * s.eps_lower;
    if (degenerate) s.add_flag("degenerate");

    BoundReport& f = out.fano;
    f = start_report(BoundMethod::fano, config);
    const double log_m_trimmed = usable ? std::log(delta) + log_m : -kInfinity;
    // Average KL to N(0, sigma^2 I) at the same operating point bounds I(theta; Y).
    const double info = log_m * (1.0 - cfg.Delta) / (1.0 + l);
    f.eps_raw = log_m_trimmed > 0.0 ? 1.0 - (kLog2 + info) / log_m_trimmed : -kInfinity;
    finish_eps(f);
    f.risk_lower = std::max(0.0, cfg.sigma_sq / (32.0 * cfg.frob_norm_sq * (1.0 + cfg.beta)) * (log_m - 2.0));
    f.params["mutual_information_upper"] = info;
    if (degenerate) f.add_flag("degenerate");

    out.asymptote = std::max(0.0, cfg.sigma_sq / (4.0 * cfg.frob_norm_sq) * log_m);
    set_ratio(out);
    return out;
}

// --- dispatch and sweeps -----------------------------------------------------

std::string app_name(const AppConfig& cfg) {
    switch (cfg.index()) {
        case 0: return "density";
        case 1: return "active";
        default: return "cs";
    }
}

ComparisonReport evaluate(const AppConfig& cfg) {
    return std::visit(
        [](const auto& c) -> ComparisonReport {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, DensityConfig>) return density_bound(c);
            else if constexpr (std::is_same_v<T, ActiveConfig>) return active_bound(c);
            else return cs_bound(c);
        },
        cfg);
}

namespace {

template <typename Config>
struct Field {
    const char* name;
    void (*set)(Config&, double);
};

const std::vector<Field<DensityConfig>>& density_fields() {
    static const std::vector<Field<DensityConfig>> fields = {
        {"n", [](DensityConfig& c, double v) { c.n = v; }},
        {"nu", [](DensityConfig& c, double v) { c.nu = v; }},
        {"c", [](DensityConfig& c, double v) { c.c = v; }},
        {"a", [](DensityConfig& c, double v) { c.a = v; }},
        {"c0", [](DensityConfig& c, double v) { c.c0 = v; }},
        {"c_g", [](DensityConfig& c, double v) { c.c_g = v; }},
        {"kappa_sched", [](DensityConfig& c, double v) { c.kappa_sched = v; }},
    };
    return fields;
}

const std::vector<Field<ActiveConfig>>& active_fields() {
    static const std::vector<Field<ActiveConfig>> fields = {
        {"n", [](ActiveConfig& c, double v) { c.n = v; }},
        {"d", [](ActiveConfig& c, double v) { c.d = v; }},
        {"alpha", [](ActiveConfig& c, double v) { c.alpha = v; }},
        {"kappa", [](ActiveConfig& c, double v) { c.kappa = v; }},
        {"L", [](ActiveConfig& c, double v) { c.L = v; }},
        {"c", [](ActiveConfig& c, double v) { c.c = v; }},
        {"H", [](ActiveConfig& c, double v) { c.H = v; }},
        {"nu", [](ActiveConfig& c, double v) { c.nu = v; }},
        {"lambda", [](ActiveConfig& c, double v) { c.lambda = v; }},
    };
    return fields;
}

const std::vector<Field<CsConfig>>& cs_fields() {
    static const std::vector<Field<CsConfig>> fields = {
        {"n", [](CsConfig& c, double v) { c.n = v; }},
        {"k", [](CsConfig& c, double v) { c.k = v; }},
        {"sigma_sq", [](CsConfig& c, double v) { c.sigma_sq = v; }},
        {"frob_norm_sq", [](CsConfig& c, double v) { c.frob_norm_sq = v; }},
        {"lambda", [](CsConfig& c, double v) { c.lambda = v; }},
        {"Delta", [](CsConfig& c, double v) { c.Delta = v; }},
        {"beta", [](CsConfig& c, double v) { c.beta = v; }},
        {"delta_m", [](CsConfig& c, double v) { c.delta_m = v; }},
    };
    return fields;
}

template <typename Config>
const std::vector<Field<Config>>& fields_of() {
    if constexpr (std::is_same_v<Config, DensityConfig>) return density_fields();
    else if constexpr (std::is_same_v<Config, ActiveConfig>) return active_fields();
    else return cs_fields();
}

}  // namespace

std::vector<std::string> parameter_names(const AppConfig& cfg) {
    return std::visit(
        [](const auto& c) {
            std::vector<std::string> names;
            for (const auto& f : fields_of<std::decay_t<decltype(c)>>()) names.emplace_back(f.name);
            return names;
        },
        cfg);
}

AppConfig with_parameter(const AppConfig& cfg, const std::string& name, double value) {
    return std::visit(
        [&](const auto& c) -> AppConfig {
            using T = std::decay_t<decltype(c)>;
            for (const auto& f : fields_of<T>()) {
                if (name == f.name) {
                    T copy = c;
                    f.set(copy, value);
                    return copy;
                }
            }
            throw ConfigError("unknown parameter '" + name + "' for application " + app_name(cfg));
        },
        cfg);
}

std::vector<ComparisonReport> sweep(const AppConfig& cfg, const std::string& vary, std::span<const double> values) {
    with_parameter(cfg, vary, 0.0);  // rejects unknown names even when values is empty
    std::vector<ComparisonReport> reports(values.size());
    parallel_for(values.size(), [&](std::size_t i) { reports[i] = evaluate(with_parameter(cfg, vary, values[i])); });
    return reports;
}

std::optional<std::size_t> argmax_strong_risk(std::span<const ComparisonReport> reports) {
    if (reports.empty()) return std::nullopt;
    std::size_t best = 0;
    for (std::size_t i = 1; i < reports.size(); ++i)
        if (reports[i].strong.risk_lower.value_or(0.0) > reports[best].strong.risk_lower.value_or(0.0)) best = i;
    return best;
}

}  // namespace converse_kit
