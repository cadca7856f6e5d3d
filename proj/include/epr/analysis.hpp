#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "epr/engine.hpp"

namespace epr {

// Post-selected correlation (N++ + N-- - N+- - N-+) / sum of those four.
// Throws EmptyTallyError when all four definite cells are empty.
double correlation_E(const CoincidenceTally& tally);

struct ChshAngles {
    double a = 0.0;
    double a_prime = kPi / 4.0;
    double b = kPi / 8.0;
    double b_prime = 3.0 * kPi / 8.0;
};

// |E(a,b) - E(a,b')| + |E(a',b) + E(a',b')|
double chsh_combine(const std::array<double, 4>& e);

struct ChshResult {
    ChshAngles angles;
    // Combo order (a,b), (a,b'), (a',b), (a',b'); E from tallies pooled
    // over all runs.
    std::array<double, 4> e_values{};
    double s_value = 0.0;    // S of the pooled e_values
    double violation = 0.0;  // s_value - 2
    std::uint32_t runs = 0;
    std::uint64_t pairs_per_run = 0;
    std::vector<double> s_per_run;
    double s_mean = 0.0;
    double s_stddev = 0.0;  // sample stddev over runs; 0 when runs == 1
};

// Runs `runs` independent CHSH experiments. Run r, combo c draws from
// setting_index = r*4 + c, so every (run, combo) has its own substream family.
// pairs_per_run = 0 uses cfg.pairs_per_setting.
ChshResult chsh(const RunConfig& cfg, const ChshAngles& angles = {},
                std::uint32_t runs = 10, std::uint64_t pairs_per_run = 0,
                KernelKind kernel = kernels::select_kernel(), unsigned workers = 0);

// (max - min) / (max + min) of the window-5 centered moving average of the
// per-setting N++ counts (window truncated at the curve edges).
double visibility(const CorrelationCurve& curve);

struct SinusoidFit {
    double amplitude = 0.0;
    double phase = 0.0;  // alpha of the curve minimum, in [0, pi)
    double offset = 0.0;
    double rmse = 0.0;   // on the max-normalized curve
};

// Least-squares fits of the normalized N++ curve against
//   offset + amplitude * sin^2(alpha - phase)          (smooth model)
//   offset + amplitude * tri((alpha - phase)/pi)       (period-pi triangle)
// Both peak at phase + pi/2, so the parameters are directly comparable.
struct ShapeFitResult {
    SinusoidFit sin2;
    SinusoidFit triangle;
};

ShapeFitResult shape_fit(const CorrelationCurve& curve);

}  // namespace epr
