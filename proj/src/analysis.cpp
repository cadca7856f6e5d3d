#include "epr/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "epr/errors.hpp"

namespace epr {

double correlation_E(const CoincidenceTally& tally) {
    const std::uint64_t pp = tally.counts[0][0];
    const std::uint64_t pm = tally.counts[0][1];
    const std::uint64_t mp = tally.counts[1][0];
    const std::uint64_t mm = tally.counts[1][1];
    const std::uint64_t den = pp + pm + mp + mm;
    if (den == 0) throw EmptyTallyError("no definite coincidences to correlate");
    const std::int64_t num =
        static_cast<std::int64_t>(pp + mm) - static_cast<std::int64_t>(pm + mp);
    return static_cast<double>(num) / static_cast<double>(den);
}

double chsh_combine(const std::array<double, 4>& e) {
    return std::fabs(e[0] - e[1]) + std::fabs(e[2] + e[3]);
}

ChshResult chsh(const RunConfig& cfg, const ChshAngles& angles, std::uint32_t runs,
                std::uint64_t pairs_per_run, KernelKind kernel, unsigned workers) {
    if (runs < 1) throw ValidationError("chsh needs at least 1 run");
    if (!std::isfinite(angles.a) || !std::isfinite(angles.a_prime) ||
        !std::isfinite(angles.b) || !std::isfinite(angles.b_prime))
        throw ValidationError("chsh angles must be finite");

    RunConfig rc = cfg;
    if (pairs_per_run != 0) rc.pairs_per_setting = pairs_per_run;
    rc.validate();

    const std::array<std::pair<double, double>, 4> combos{{{angles.a, angles.b},
                                                           {angles.a, angles.b_prime},
                                                           {angles.a_prime, angles.b},
                                                           {angles.a_prime, angles.b_prime}}};

    ChshResult res;
    res.angles = angles;
    res.runs = runs;
    res.pairs_per_run = rc.pairs_per_setting;
    res.s_per_run.reserve(runs);

    std::array<CoincidenceTally, 4> pooled{};
    for (std::uint32_t r = 0; r < runs; ++r) {
        std::array<double, 4> e_run{};
        for (std::uint32_t c = 0; c < 4; ++c) {
            RunConfig combo_cfg = rc;
            combo_cfg.beta = combos[c].second;
            const CoincidenceTally t =
                run_setting(combo_cfg, combos[c].first, r * 4 + c, kernel, workers);
            pooled[c] += t;
            e_run[c] = correlation_E(t);
        }
        res.s_per_run.push_back(chsh_combine(e_run));
    }

    for (std::uint32_t c = 0; c < 4; ++c) res.e_values[c] = correlation_E(pooled[c]);
    res.s_value = chsh_combine(res.e_values);
    res.violation = res.s_value - 2.0;

    double mean = 0.0;
    for (double s : res.s_per_run) mean += s;
    mean /= static_cast<double>(runs);
    res.s_mean = mean;
    double var = 0.0;
    if (runs > 1) {
        for (double s : res.s_per_run) var += (s - mean) * (s - mean);
        var /= static_cast<double>(runs - 1);
    }
    res.s_stddev = std::sqrt(var);
    return res;
}

double visibility(const CorrelationCurve& curve) {
    const std::size_t n = curve.points.size();
    if (n == 0) throw DegenerateFitError("visibility needs a non-empty curve");

    // Window-5 centered moving average, truncated at the curve edges, so a
    // single lucky zero bin cannot fake perfect visibility.
    std::vector<double> smooth(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= 2 ? i - 2 : 0;
        const std::size_t hi = std::min(n - 1, i + 2);
        double acc = 0.0;
        for (std::size_t j = lo; j <= hi; ++j)
            acc += static_cast<double>(curve.points[j].tally.counts[0][0]);
        smooth[i] = acc / static_cast<double>(hi - lo + 1);
    }

    const auto [mn_it, mx_it] = std::minmax_element(smooth.begin(), smooth.end());
    if (*mx_it == 0.0) throw EmptyTallyError("visibility of an all-zero curve");
    return (*mx_it - *mn_it) / (*mx_it + *mn_it);
}

namespace {

// frac(x) in [0, 1) -> triangle wave: 0 at integers, 1 at half-integers.
double tri_wave(double x) {
    const double s = x - std::floor(x);
    return 1.0 - std::fabs(2.0 * s - 1.0);
}

double fit_rmse(const std::vector<double>& y, const std::vector<double>& model) {
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - model[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(y.size()));
}

// Least squares of y against {1, cos(2a), sin(2a)} via 3x3 normal equations;
// the harmonic coefficients convert back to amplitude/phase of a sin^2 law.
SinusoidFit fit_sin2(const std::vector<double>& alpha, const std::vector<double>& y) {
    const std::size_t n = alpha.size();
    double m[3][4] = {};
    for (std::size_t i = 0; i < n; ++i) {
        const double b[3] = {1.0, std::cos(2.0 * alpha[i]), std::sin(2.0 * alpha[i])};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) m[r][c] += b[r] * b[c];
            m[r][3] += b[r] * y[i];
        }
    }

    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
        if (std::fabs(m[pivot][col]) < 1e-9 * static_cast<double>(n))
            throw DegenerateFitError("sin^2 fit basis is singular on this grid");
        if (pivot != col)
            for (int c = 0; c < 4; ++c) std::swap(m[pivot][c], m[col][c]);
        for (int r = col + 1; r < 3; ++r) {
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
        }
    }
    double coef[3];
    for (int r = 2; r >= 0; --r) {
        double acc = m[r][3];
        for (int c = r + 1; c < 3; ++c) acc -= m[r][c] * coef[c];
        coef[r] = acc / m[r][r];
    }

    // offset + A*sin^2(a - phase) = (offset + A/2) - (A/2)cos(2a - 2*phase)
    SinusoidFit fit;
    fit.amplitude = 2.0 * std::hypot(coef[1], coef[2]);
    fit.phase = 0.5 * std::atan2(-coef[2], -coef[1]);
    if (fit.phase < 0.0) fit.phase += kPi;
    fit.offset = coef[0] - fit.amplitude / 2.0;

    std::vector<double> model(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = std::sin(alpha[i] - fit.phase);
        model[i] = fit.offset + fit.amplitude * s * s;
    }
    fit.rmse = fit_rmse(y, model);
    return fit;
}

// Phase is scanned on a fixed grid (the wave is not differentiable), with a
// closed-form 2-parameter least squares at each candidate.
SinusoidFit fit_triangle(const std::vector<double>& alpha, const std::vector<double>& y) {
    const std::size_t n = alpha.size();
    constexpr int kPhaseSteps = 1024;

    SinusoidFit best;
    bool found = false;
    std::vector<double> basis(n);
    for (int k = 0; k < kPhaseSteps; ++k) {
        const double phase = (static_cast<double>(k) * kPi) / kPhaseSteps;
        double sx = 0.0, sxx = 0.0, sy = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            basis[i] = tri_wave((alpha[i] - phase) / kPi);
            sx += basis[i];
            sxx += basis[i] * basis[i];
            sy += y[i];
            sxy += basis[i] * y[i];
        }
        const double den = static_cast<double>(n) * sxx - sx * sx;
        if (std::fabs(den) < 1e-12 * static_cast<double>(n)) continue;
        const double a = (static_cast<double>(n) * sxy - sx * sy) / den;
        const double off = (sy - a * sx) / static_cast<double>(n);

        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = y[i] - (off + a * basis[i]);
            acc += d * d;
        }
        const double rmse = std::sqrt(acc / static_cast<double>(n));
        if (!found || rmse < best.rmse) {
            best.amplitude = a;
            best.phase = phase;
            best.offset = off;
            best.rmse = rmse;
            found = true;
        }
    }
    if (!found) throw DegenerateFitError("triangle fit basis is degenerate on this grid");
    return best;
}

}  // namespace

ShapeFitResult shape_fit(const CorrelationCurve& curve) {
    const std::size_t n = curve.points.size();
    if (n < 3) throw ValidationError("shape fit needs at least 3 curve points");

    std::vector<double> alpha(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        alpha[i] = curve.points[i].alpha;
        y[i] = static_cast<double>(curve.points[i].tally.counts[0][0]);
    }
    const auto [mn_it, mx_it] = std::minmax_element(y.begin(), y.end());
    const double ymin = *mn_it, ymax = *mx_it;
    if (ymax == ymin) throw DegenerateFitError("shape fit on a constant curve");
    for (double& v : y) v /= ymax;

    return {fit_sin2(alpha, y), fit_triangle(alpha, y)};
}

}  // namespace epr
