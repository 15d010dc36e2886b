#include "cli.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "converse_kit/applications.hpp"
#include "converse_kit/errors.hpp"
#include "converse_kit/packing.hpp"
#include "converse_kit/report_io.hpp"
#include "converse_kit/verify.hpp"

namespace converse_kit::cli {

namespace {

void add_density_flags(CLI::App* app, DensityConfig& cfg, std::optional<double>& c_g,
                       std::optional<double>& kappa_sched) {
    app->add_option("--n", cfg.n, "sample count")->capture_default_str();
    app->add_option("--nu", cfg.nu, "bandwidth constant nu")->capture_default_str();
    app->add_option("--c", cfg.c, "perturbation scale")->capture_default_str();
    app->add_option("--a", cfg.a, "integral of g^2")->capture_default_str();
    app->add_option("--c0", cfg.c0, "packing exponent")->capture_default_str();
    app->add_option("--c-g", c_g, "c sup|g| (default c)");
    app->add_option("--kappa-sched", kappa_sched, "use the nu schedule with this kappa (> 25)");
}

void add_active_flags(CLI::App* app, ActiveConfig& cfg) {
    app->add_option("--n", cfg.n, "label budget")->capture_default_str();
    app->add_option("--d", cfg.d, "dimension (>= 2)")->capture_default_str();
    app->add_option("--alpha", cfg.alpha, "boundary smoothness")->capture_default_str();
    app->add_option("--kappa", cfg.kappa, "noise exponent (>= 1)")->capture_default_str();
    app->add_option("--L", cfg.L, "Holder constant")->capture_default_str();
    app->add_option("--c", cfg.c, "margin constant in (0, 1/2]")->capture_default_str();
    app->add_option("--H", cfg.H, "norm of the bump function")->capture_default_str();
    app->add_option("--nu", cfg.nu, "bandwidth constant nu")->capture_default_str();
    app->add_option("--lambda", cfg.lambda, "order parameter in (0, 1]")->capture_default_str();
}

void add_cs_flags(CLI::App* app, CsConfig& cfg, std::optional<double>& delta_m) {
    app->add_option("--n", cfg.n, "ambient dimension")->capture_default_str();
    app->add_option("--k", cfg.k, "sparsity")->capture_default_str();
    app->add_option("--sigma2", cfg.sigma_sq, "noise variance")->capture_default_str();
    app->add_option("--frob2", cfg.frob_norm_sq, "squared Frobenius norm of A")->capture_default_str();
    app->add_option("--lambda", cfg.lambda, "order parameter (> 0)")->capture_default_str();
    app->add_option("--delta", cfg.Delta, "Delta in (0, 1)")->capture_default_str();
    app->add_option("--beta", cfg.beta, "near-isotropy constant")->capture_default_str();
    app->add_option("--delta-m", delta_m, "trimmed fraction (default 1/log M)");
}

/// Flag spellings accepted by --vary in addition to the field names.
std::string canonical_parameter(const std::string& name) {
    static const std::map<std::string, std::string> aliases = {
        {"sigma2", "sigma_sq"}, {"frob2", "frob_norm_sq"}, {"delta", "Delta"},
        {"delta-m", "delta_m"}, {"c-g", "c_g"},          {"kappa-sched", "kappa_sched"},
    };
    const auto it = aliases.find(name);
    return it == aliases.end() ? name : it->second;
}

std::string joined_command(int argc, const char* const* argv) {
    std::string cmd;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) cmd += ' ';
        cmd += argv[i];
    }
    return cmd;
}

void emit(const std::string& content, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") out << content;
    else write_atomic(path, content);
}

Json config_json(const AppConfig& cfg) {
    return std::visit([](const auto& c) { return c.to_json(); }, cfg);
}

std::vector<double> sweep_values(const std::vector<double>& listed, std::optional<double> from, std::optional<double> to,
                                 std::size_t points, bool log_spaced) {
    if (!listed.empty()) return listed;
    if (!from || !to) throw ConfigError("sweep needs --values or both --from and --to");
    if (points == 0) return {};
    if (log_spaced && !(*from > 0.0 && *to > 0.0)) throw ConfigError("--log requires --from > 0 and --to > 0");
    std::vector<double> values(points);
    const double span = points == 1 ? 1.0 : static_cast<double>(points - 1);
    const double ratio = log_spaced ? std::pow(*to / *from, 1.0 / span) : 0.0;
    for (std::size_t i = 0; i < points; ++i)
        values[i] = log_spaced ? *from * std::pow(ratio, static_cast<double>(i))
                               : *from + static_cast<double>(i) / span * (*to - *from);
    values.front() = *from;
    if (points > 1) values.back() = *to;
    return values;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Strong-converse minimax lower bounds: application bounds, sweeps, oracle suites, packings",
                 "converse-kit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    DensityConfig density;
    ActiveConfig active;
    CsConfig cs;
    std::optional<double> c_g, kappa_sched, delta_m;
    std::string out_path;

    // bound
    CLI::App* bound = app.add_subcommand("bound", "evaluate one application bound and write its JSON report");
    bound->require_subcommand(1);
    CLI::App* bound_density = bound->add_subcommand("density", "density estimation");
    CLI::App* bound_active = bound->add_subcommand("active", "active learning");
    CLI::App* bound_cs = bound->add_subcommand("cs", "compressed sensing");
    add_density_flags(bound_density, density, c_g, kappa_sched);
    add_active_flags(bound_active, active);
    add_cs_flags(bound_cs, cs, delta_m);
    for (CLI::App* sub : {bound_density, bound_active, bound_cs})
        sub->add_option("--out", out_path, "output file (default stdout)");

    // sweep
    std::string vary;
    std::vector<double> listed;
    std::optional<double> from, to;
    std::size_t points = 9;
    bool log_spaced = false;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "evaluate an application over a parameter range, write CSV");
    sweep_cmd->require_subcommand(1);
    CLI::App* sweep_density = sweep_cmd->add_subcommand("density", "density estimation");
    CLI::App* sweep_active = sweep_cmd->add_subcommand("active", "active learning");
    CLI::App* sweep_cs = sweep_cmd->add_subcommand("cs", "compressed sensing");
    add_density_flags(sweep_density, density, c_g, kappa_sched);
    add_active_flags(sweep_active, active);
    add_cs_flags(sweep_cs, cs, delta_m);
    for (CLI::App* sub : {sweep_density, sweep_active, sweep_cs}) {
        sub->add_option("--vary", vary, "parameter to vary")->required();
        sub->add_option("--values", listed, "comma-separated values")->delimiter(',');
        sub->add_option("--from", from, "range start");
        sub->add_option("--to", to, "range end");
        sub->add_option("--points", points, "number of range points")->capture_default_str();
        sub->add_flag("--log", log_spaced, "log-spaced range");
        sub->add_option("--out", out_path, "output CSV file (default stdout)");
    }

    // verify
    std::string suite;
    std::uint64_t seed = 7;
    std::size_t count = 200;
    unsigned m = 12, d_min = 4;
    std::string json_path;
    CLI::App* verify = app.add_subcommand("verify", "run an oracle or invariant suite");
    verify->add_option("suite", suite, "soundness | divergence | fano-recovery | packing")
        ->required()
        ->check(CLI::IsMember({"soundness", "divergence", "fano-recovery", "packing"}));
    verify->add_option("--seed", seed, "suite seed")->capture_default_str();
    verify->add_option("--count", count, "number of random instances")->capture_default_str();
    verify->add_option("--m", m, "code length for the packing suite")->capture_default_str();
    verify->add_option("--dmin", d_min, "minimum distance for the packing suite")->capture_default_str();
    verify->add_option("--json", json_path, "also write the result as JSON");

    // pack
    CLI::App* pack = app.add_subcommand("pack", "construct a packing and write it in the text format");
    pack->require_subcommand(1);
    CLI::App* pack_gv = pack->add_subcommand("gv", "greedy binary code");
    std::string order_name = "lex";
    pack_gv->add_option("--m", m, "code length (<= 24)")->required();
    pack_gv->add_option("--dmin", d_min, "minimum Hamming distance")->required();
    pack_gv->add_option("--order", order_name, "lex | random")
        ->check(CLI::IsMember({"lex", "random"}))
        ->capture_default_str();
    pack_gv->add_option("--seed", seed, "seed for --order random")->capture_default_str();
    pack_gv->add_option("--out", out_path, "output file (default stdout)");
    CLI::App* pack_cs = pack->add_subcommand("cs", "random sparse packing on the unit sphere");
    unsigned pack_n = 64, pack_k = 4;
    std::size_t pack_count = 16, max_attempts = 100000;
    pack_cs->add_option("--n", pack_n, "ambient dimension (<= 512)")->capture_default_str();
    pack_cs->add_option("--k", pack_k, "sparsity")->capture_default_str();
    pack_cs->add_option("--count", pack_count, "number of codewords")->capture_default_str();
    pack_cs->add_option("--seed", seed, "sampler seed")->capture_default_str();
    pack_cs->add_option("--max-attempts", max_attempts, "draw budget")->capture_default_str();
    pack_cs->add_option("--out", out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    const std::string command = joined_command(argc, argv);
    if (c_g) density.c_g = c_g;
    if (kappa_sched) density.kappa_sched = kappa_sched;
    if (delta_m) cs.delta_m = delta_m;

    try {
        if (bound->parsed()) {
            AppConfig cfg = bound_density->parsed() ? AppConfig(density)
                            : bound_active->parsed() ? AppConfig(active)
                                                     : AppConfig(cs);
            const ComparisonReport report = evaluate(cfg);
            const auto manifest = RunManifest::make(command, config_json(cfg));
            emit(dump(to_json(report, manifest)), out_path, out);
            return kOk;
        }
        if (sweep_cmd->parsed()) {
            AppConfig cfg = sweep_density->parsed() ? AppConfig(density)
                            : sweep_active->parsed() ? AppConfig(active)
                                                     : AppConfig(cs);
            const std::string name = canonical_parameter(vary);
            const auto values = sweep_values(listed, from, to, points, log_spaced);
            const auto reports = sweep(cfg, name, values);
            Json config = config_json(cfg);
            config["vary"] = name;
            const auto manifest = RunManifest::make(command, config);
            emit(sweep_csv(values, reports, manifest), out_path, out);
            if (!out_path.empty() && out_path != "-") {
                out << "wrote " << reports.size() << " rows to " << out_path << "\n";
                if (const auto best = argmax_strong_risk(reports))
                    out << "largest strong risk bound at " << name << " = " << values[*best] << "\n";
            }
            return kOk;
        }
        if (verify->parsed()) {
            const SuiteResult result = run_suite(suite, seed, count, m, d_min);
            out << result.summary() << "\n";
            for (const auto& f : result.failures) out << "  FAIL " << f << "\n";
            if (!result.details.empty()) out << "  details " << result.details.dump() << "\n";
            if (!json_path.empty()) {
                Json j;
                j["suite"] = result.suite;
                j["total"] = result.total;
                j["passed"] = result.passed;
                j["worst_margin"] = std::isfinite(result.worst_margin) ? Json(result.worst_margin) : Json(nullptr);
                j["failures"] = result.failures;
                j["details"] = result.details;
                Json config;
                config["suite"] = suite;
                config["count"] = count;
                j["manifest"] = RunManifest::make(command, config, seed).to_json();
                write_atomic(json_path, dump(j));
            }
            return result.ok() ? kOk : kSuiteFailure;
        }
        if (pack_gv->parsed()) {
            const GreedyOrder order = order_name == "lex" ? GreedyOrder::lexicographic : GreedyOrder::seeded_random;
            const BinaryCodebook code = gv_greedy(m, d_min, order, seed);
            const Certification cert = verify_packing(PackingSet::from_codebook(code));
            Json config;
            config["m"] = m;
            config["d_min"] = d_min;
            config["order"] = order_name;
            const auto manifest = RunManifest::make(command, config, seed);
            std::ostringstream text;
            write_codebook(text, code,
                           "manifest " + manifest.to_json().dump() + "\nsize " + std::to_string(code.codewords.size()) +
                               " gv_count_bound " + std::to_string(gv_count_bound(m, d_min)) + " certified " +
                               (cert.passed ? "yes" : "no"));
            emit(text.str(), out_path, out);
            return cert.passed ? kOk : kSuiteFailure;
        }
        if (pack_cs->parsed()) {
            const SparsePacking sp = cs_random_packing(pack_n, pack_k, pack_count, seed, max_attempts);
            Json config;
            config["n"] = pack_n;
            config["k"] = pack_k;
            config["count"] = pack_count;
            const auto manifest = RunManifest::make(command, config, seed);
            char stats[160];
            std::snprintf(stats, sizeof stats, "beta_hat %.17g min_sq_distance %.17g exceeds_existence_size %s",
                          sp.beta_hat, sp.min_sq_distance, sp.exceeds_existence_size ? "yes" : "no");
            std::ostringstream text;
            write_sparse_packing(text, sp, "manifest " + manifest.to_json().dump() + "\n" + stats);
            emit(text.str(), out_path, out);
            return kOk;
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const IncompletePackingError& e) {
        err << "error: " << e.what() << "\n";
        return kSuiteFailure;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const DomainError& e) {
        err << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const CapabilityError& e) {
        err << "configuration error: " << e.what() << "\n";
        return kConfigError;
    }
    return kOk;
}

}  // namespace converse_kit::cli
