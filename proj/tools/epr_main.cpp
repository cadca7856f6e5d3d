// Command-line front end. Subcommands: sweep, chsh, threshold-scan, theory,
// reproduce. All outputs embed the fully resolved config; identical resolved
// configs produce byte-identical files regardless of EPR_THREADS or kernel.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "epr/analysis.hpp"
#include "epr/config.hpp"
#include "epr/engine.hpp"
#include "epr/errors.hpp"
#include "epr/oracle.hpp"
#include "epr/report.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> sets;
    std::string output = "-";
    std::string kernel = "auto";
    std::string seed, pairs, steps, alpha_start, alpha_end;
    std::string beta, delta, threshold, eta, decoherence;
};

std::string trimmed(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "key=value config file");
    cmd->add_option("--set", o.sets,
                    "config override key=value (repeatable, wins over --config)");
    cmd->add_option("-o,--output", o.output, "output path, or - for stdout")
        ->capture_default_str();
    cmd->add_option("--kernel", o.kernel, "tally kernel")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}))
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--pairs", o.pairs, "pairs emitted per setting");
    cmd->add_option("--steps", o.steps, "alpha grid points");
    cmd->add_option("--alpha-start", o.alpha_start, "alpha grid start (rad, or e.g. 45deg)");
    cmd->add_option("--alpha-end", o.alpha_end, "alpha grid end (rad, or e.g. 180deg)");
    cmd->add_option("--beta", o.beta, "analyzer 2 angle (rad, or e.g. 22.5deg)");
    cmd->add_option("--delta", o.delta, "photon 2 source offset (rad, or e.g. 90deg)");
    cmd->add_option("--threshold", o.threshold, "switch dead-zone half-width, in [0, 0.5)");
    cmd->add_option("--eta", o.eta, "detection efficiency, in (0, 1]");
    cmd->add_option("--decoherence", o.decoherence, "decoherence fraction, in [0, 1]");
}

epr::RunConfig build_config(const CommonOpts& o) {
    epr::RunConfig cfg;
    if (!o.config_path.empty()) epr::load_config_file(cfg, o.config_path);
    for (const std::string& kv : o.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw epr::ConfigError("--set expects key=value, got '" + kv + "'");
        epr::apply_override(cfg, trimmed(kv.substr(0, eq)), kv.substr(eq + 1));
    }
    if (!o.seed.empty()) epr::apply_override(cfg, "seed", o.seed);
    if (!o.pairs.empty()) epr::apply_override(cfg, "pairs", o.pairs);
    if (!o.steps.empty()) epr::apply_override(cfg, "steps", o.steps);
    if (!o.alpha_start.empty()) epr::apply_override(cfg, "alpha_start", o.alpha_start);
    if (!o.alpha_end.empty()) epr::apply_override(cfg, "alpha_end", o.alpha_end);
    if (!o.beta.empty()) epr::apply_override(cfg, "beta", o.beta);
    if (!o.delta.empty()) epr::apply_override(cfg, "delta", o.delta);
    if (!o.threshold.empty()) epr::apply_override(cfg, "threshold", o.threshold);
    if (!o.eta.empty()) epr::apply_override(cfg, "eta", o.eta);
    if (!o.decoherence.empty()) epr::apply_override(cfg, "decoherence", o.decoherence);
    cfg.validate();
    return cfg;
}

epr::KernelKind pick_kernel(const std::string& name) {
    if (name == "scalar") return epr::KernelKind::Scalar;
    if (name == "avx2") {
        if (!epr::kernels::avx2_available())
            throw epr::ConfigError("avx2 kernel is not available on this machine");
        return epr::KernelKind::Avx2;
    }
    return epr::kernels::select_kernel();
}

template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path == "-") {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw epr::IoError("cannot open output file '" + path + "'");
    fn(out);
    out.flush();
    if (!out) throw epr::IoError("failed writing output file '" + path + "'");
}

std::vector<double> linear_grid(double from, double to, std::uint32_t steps) {
    if (steps < 1) throw epr::ValidationError("scan needs at least 1 step");
    std::vector<double> grid;
    grid.reserve(steps);
    if (steps == 1) {
        grid.push_back(from);
        return grid;
    }
    for (std::uint32_t k = 0; k < steps; ++k)
        grid.push_back(from + (static_cast<double>(k) * (to - from)) /
                                  static_cast<double>(steps - 1));
    return grid;
}

std::vector<epr::ScanPoint> run_scan(const epr::RunConfig& cfg,
                                     const std::vector<double>& thresholds,
                                     std::uint32_t runs, epr::KernelKind kernel) {
    std::vector<epr::ScanPoint> points;
    points.reserve(thresholds.size());
    for (double th : thresholds) {
        epr::RunConfig c = cfg;
        c.threshold = th;
        points.push_back({th, epr::chsh(c, {}, runs, 0, kernel)});
    }
    return points;
}

void run_reproduce(const std::string& figure, const CommonOpts& opts) {
    const epr::RunConfig cfg = build_config(opts);
    const epr::KernelKind kernel = pick_kernel(opts.kernel);
    with_output(opts.output, [&](std::ostream& os) {
        if (figure == "fig2") {
            epr::write_sweep_csv(os, cfg, epr::sweep(cfg, kernel), "fig2");
        } else if (figure == "fig3") {
            epr::RunConfig c = cfg;
            c.threshold = 0.05;
            bool first = true;
            for (double eta : {0.5, 0.2, 0.1}) {
                c.efficiency = eta;
                if (!first) os << '\n';
                first = false;
                epr::write_sweep_csv(os, c, epr::sweep(c, kernel),
                                     "fig3 eta=" + epr::format_double(eta));
            }
        } else if (figure == "fig4") {
            epr::RunConfig c = cfg;
            c.threshold = 0.05;
            bool first = true;
            for (double d : {0.1, 0.5, 1.0}) {
                c.decoherence = d;
                if (!first) os << '\n';
                first = false;
                epr::write_sweep_csv(os, c, epr::sweep(c, kernel),
                                     "fig4 decoherence=" + epr::format_double(d));
            }
        } else if (figure == "fig5a") {
            epr::RunConfig c = cfg;
            c.pairs_per_setting = 10000;
            std::vector<double> grid;
            for (int k = 0; k <= 8; ++k) grid.push_back(0.025 * k);
            epr::write_scan_csv(os, c, run_scan(c, grid, 10, kernel));
        } else {  // fig5b
            epr::RunConfig c = cfg;
            c.threshold = 0.1;
            c.decoherence = 0.1;
            epr::write_sweep_csv(os, c, epr::sweep(c, kernel), "fig5b");
        }
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local hidden-variable EPR photon-pair simulator"};
    app.require_subcommand(1);

    auto* sweep_cmd =
        app.add_subcommand("sweep", "simulate the coincidence curve over the alpha grid");
    CommonOpts sweep_opts;
    add_common(sweep_cmd, sweep_opts);
    sweep_cmd->callback([&] {
        const epr::RunConfig cfg = build_config(sweep_opts);
        const epr::CorrelationCurve curve = epr::sweep(cfg, pick_kernel(sweep_opts.kernel));
        with_output(sweep_opts.output,
                    [&](std::ostream& os) { epr::write_sweep_csv(os, cfg, curve); });
    });

    auto* chsh_cmd = app.add_subcommand("chsh", "run repeated CHSH experiments");
    CommonOpts chsh_opts;
    add_common(chsh_cmd, chsh_opts);
    std::uint32_t chsh_runs = 10;
    std::vector<std::string> angle_tokens;
    chsh_cmd->add_option("--runs", chsh_runs, "independent repetitions")
        ->capture_default_str();
    chsh_cmd->add_option("--angles", angle_tokens, "a a_prime b b_prime (rad or Ndeg)")
        ->expected(4);
    chsh_cmd->callback([&] {
        const epr::RunConfig cfg = build_config(chsh_opts);
        epr::ChshAngles angles;
        if (!angle_tokens.empty()) {
            angles.a = epr::parse_angle(angle_tokens[0]);
            angles.a_prime = epr::parse_angle(angle_tokens[1]);
            angles.b = epr::parse_angle(angle_tokens[2]);
            angles.b_prime = epr::parse_angle(angle_tokens[3]);
        }
        const epr::ChshResult result =
            epr::chsh(cfg, angles, chsh_runs, 0, pick_kernel(chsh_opts.kernel));
        with_output(chsh_opts.output, [&](std::ostream& os) {
            epr::write_chsh_json(os, "chsh", cfg, result);
        });
    });

    auto* scan_cmd =
        app.add_subcommand("threshold-scan", "CHSH S over a grid of switch thresholds");
    CommonOpts scan_opts;
    add_common(scan_cmd, scan_opts);
    double scan_from = 0.0, scan_to = 0.2;
    std::uint32_t scan_steps = 5, scan_runs = 10;
    scan_cmd->add_option("--from", scan_from, "first threshold")->capture_default_str();
    scan_cmd->add_option("--to", scan_to, "last threshold")->capture_default_str();
    scan_cmd->add_option("--scan-steps", scan_steps, "grid points")->capture_default_str();
    scan_cmd->add_option("--runs", scan_runs, "repetitions per point")->capture_default_str();
    scan_cmd->callback([&] {
        const epr::RunConfig cfg = build_config(scan_opts);
        const auto points = run_scan(cfg, linear_grid(scan_from, scan_to, scan_steps),
                                     scan_runs, pick_kernel(scan_opts.kernel));
        with_output(scan_opts.output,
                    [&](std::ostream& os) { epr::write_scan_csv(os, cfg, points); });
    });

    auto* theory_cmd =
        app.add_subcommand("theory", "exact oracle curves on the same grids");
    CommonOpts theory_opts;
    add_common(theory_cmd, theory_opts);
    std::string theory_curve = "sweep";
    double theory_from = 0.0, theory_to = 0.2;
    std::uint32_t theory_steps = 5, theory_nodes = 2048;
    theory_cmd->add_option("--curve", theory_curve, "which curve to emit")
        ->check(CLI::IsMember({"sweep", "chsh-scan"}))
        ->capture_default_str();
    theory_cmd->add_option("--from", theory_from, "first threshold (chsh-scan)")
        ->capture_default_str();
    theory_cmd->add_option("--to", theory_to, "last threshold (chsh-scan)")
        ->capture_default_str();
    theory_cmd->add_option("--scan-steps", theory_steps, "grid points (chsh-scan)")
        ->capture_default_str();
    theory_cmd->add_option("--nodes", theory_nodes, "quadrature nodes per eps axis")
        ->capture_default_str();
    theory_cmd->callback([&] {
        const epr::RunConfig cfg = build_config(theory_opts);
        with_output(theory_opts.output, [&](std::ostream& os) {
            if (theory_curve == "sweep")
                epr::write_theory_sweep_csv(os, cfg, theory_nodes);
            else
                epr::write_theory_scan_csv(os, cfg,
                                           linear_grid(theory_from, theory_to, theory_steps),
                                           {}, theory_nodes);
        });
    });

    auto* rep_cmd =
        app.add_subcommand("reproduce", "emit the data file for a published figure");
    CommonOpts rep_opts;
    std::string figure;
    rep_cmd->add_option("figure", figure, "fig2|fig3|fig4|fig5a|fig5b")
        ->required()
        ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig5a", "fig5b"}));
    add_common(rep_cmd, rep_opts);
    rep_cmd->callback([&] { run_reproduce(figure, rep_opts); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const epr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const epr::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 3;
    } catch (const epr::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 4;
    } catch (const epr::EmptyTallyError& e) {
        std::cerr << "empty tally: " << e.what() << '\n';
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
