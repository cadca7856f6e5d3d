#include "epr/report.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "epr/config.hpp"
#include "epr/errors.hpp"

#include "json.hpp"

namespace epr {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

namespace {

const char* kTallyColumns =
    "n_pp,n_pm,n_mp,n_mm,n_p_undet,n_undet_p,n_m_undet,n_undet_m,n_undet_undet";

void write_tally_cells(std::ostream& out, const CoincidenceTally& t) {
    out << t.counts[0][0] << ',' << t.counts[0][1] << ',' << t.counts[1][0] << ','
        << t.counts[1][1] << ',' << t.counts[0][2] << ',' << t.counts[2][0] << ','
        << t.counts[1][2] << ',' << t.counts[2][1] << ',' << t.counts[2][2];
}

}  // namespace

void write_sweep_csv(std::ostream& out, const RunConfig& cfg,
                     const CorrelationCurve& curve, const std::string& label) {
    out << "# epr sweep\n";
    if (!label.empty()) out << "# label: " << label << '\n';
    out << "# config: " << describe(cfg) << '\n';
    out << "setting_index," << "alpha_rad,beta_rad," << kTallyColumns
        << ",emitted,recorded,E\n";
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        const CurvePoint& pt = curve.points[i];
        out << i << ',' << format_double(pt.alpha) << ',' << format_double(pt.beta) << ',';
        write_tally_cells(out, pt.tally);
        out << ',' << pt.tally.emitted << ',' << pt.tally.recorded << ',';
        if (pt.tally.definite_sum() > 0)
            out << format_double(correlation_E(pt.tally));
        else
            out << "nan";
        out << '\n';
    }
}

void write_theory_sweep_csv(std::ostream& out, const RunConfig& cfg,
                            std::uint32_t nodes_per_dim) {
    cfg.validate();
    out << "# epr theory sweep\n";
    out << "# config: " << describe(cfg) << '\n';
    out << "setting_index,alpha_rad,beta_rad,"
           "p_pp,p_pm,p_mp,p_mm,p_p_undet,p_undet_p,p_m_undet,p_undet_m,p_undet_undet,"
           "e_exact,analog_pp\n";
    const std::vector<double> alphas = sweep_alphas(cfg);
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        const oracle::OutcomeDistribution dist = oracle::digital_distribution(
            alphas[i], cfg.beta, cfg.delta, cfg.threshold, cfg.decoherence, nodes_per_dim);
        out << i << ',' << format_double(alphas[i]) << ',' << format_double(cfg.beta)
            << ',' << format_double(dist.p[0][0]) << ',' << format_double(dist.p[0][1])
            << ',' << format_double(dist.p[1][0]) << ',' << format_double(dist.p[1][1])
            << ',' << format_double(dist.p[0][2]) << ',' << format_double(dist.p[2][0])
            << ',' << format_double(dist.p[1][2]) << ',' << format_double(dist.p[2][1])
            << ',' << format_double(dist.p[2][2]) << ',';
        const double den = dist.p[0][0] + dist.p[0][1] + dist.p[1][0] + dist.p[1][1];
        if (den > 0.0)
            out << format_double(
                (dist.p[0][0] + dist.p[1][1] - dist.p[0][1] - dist.p[1][0]) / den);
        else
            out << "nan";
        out << ',' << format_double(oracle::analog_integral(alphas[i], cfg.beta, cfg.delta))
            << '\n';
    }
}

void write_scan_csv(std::ostream& out, const RunConfig& cfg,
                    const std::vector<ScanPoint>& points) {
    out << "# epr threshold scan\n";
    out << "# config: " << describe(cfg) << '\n';
    if (!points.empty())
        out << "# runs=" << points.front().chsh.runs
            << " pairs_per_run=" << points.front().chsh.pairs_per_run << '\n';
    out << "threshold,s_mean,s_stddev,s_value,violation\n";
    for (const ScanPoint& pt : points) {
        out << format_double(pt.threshold) << ',' << format_double(pt.chsh.s_mean) << ','
            << format_double(pt.chsh.s_stddev) << ',' << format_double(pt.chsh.s_value)
            << ',' << format_double(pt.chsh.violation) << '\n';
    }
}

void write_theory_scan_csv(std::ostream& out, const RunConfig& cfg,
                           const std::vector<double>& thresholds,
                           const ChshAngles& angles, std::uint32_t nodes_per_dim) {
    out << "# epr theory threshold scan\n";
    out << "# config: " << describe(cfg) << '\n';
    out << "threshold,s_exact\n";
    for (double th : thresholds) {
        const double s =
            oracle::oracle_chsh(cfg.delta, th, cfg.decoherence, angles, nodes_per_dim);
        out << format_double(th) << ',' << format_double(s) << '\n';
    }
}

void write_chsh_json(std::ostream& out, const std::string& command,
                     const RunConfig& cfg, const ChshResult& result) {
    nlohmann::json j;
    j["command"] = command;
    j["config"] = {{"seed", cfg.seed},
                   {"pairs", cfg.pairs_per_setting},
                   {"delta", cfg.delta},
                   {"threshold", cfg.threshold},
                   {"eta", cfg.efficiency},
                   {"decoherence", cfg.decoherence}};
    j["angles"] = {{"a", result.angles.a},
                   {"a_prime", result.angles.a_prime},
                   {"b", result.angles.b},
                   {"b_prime", result.angles.b_prime}};
    j["combo_order"] =
        nlohmann::json::array({"a,b", "a,b_prime", "a_prime,b", "a_prime,b_prime"});
    j["runs"] = result.runs;
    j["pairs_per_run"] = result.pairs_per_run;
    j["e_values"] = result.e_values;
    j["s_value"] = result.s_value;
    j["violation"] = result.violation;
    j["s_per_run"] = result.s_per_run;
    j["s_mean"] = result.s_mean;
    j["s_stddev"] = result.s_stddev;
    out << j.dump(2) << '\n';
}

}  // namespace epr
