#pragma once

#include <cstdint>
#include <vector>

#include "epr/kernels/tally_kernel.hpp"
#include "epr/model.hpp"
#include "epr/outcomes.hpp"

namespace epr {

using kernels::KernelKind;
using kernels::efficiency_gate;

struct RunConfig {
    std::uint64_t seed = 42;
    std::uint64_t pairs_per_setting = 1000;
    double alpha_start = 0.0;
    double alpha_end = kPi;
    std::uint32_t steps = 101;
    double beta = 0.0;
    double delta = kPi / 2.0;
    double threshold = 0.0;
    double efficiency = 1.0;
    double decoherence = 0.0;

    // Throws ValidationError naming every violated range at once.
    void validate() const;
};

struct CurvePoint {
    double alpha = 0.0;
    double beta = 0.0;
    CoincidenceTally tally;
};

struct CorrelationCurve {
    std::vector<CurvePoint> points;
};

// Analyzer-1 grid: alpha_start + k*(alpha_end - alpha_start)/(steps - 1);
// steps = 1 collapses to alpha_start alone.
std::vector<double> sweep_alphas(const RunConfig& cfg);

// workers = 0 resolves EPR_THREADS, then hardware_concurrency(), then 1.
// Results never depend on the resolved count.
unsigned resolve_workers(unsigned workers = 0);

CoincidenceTally run_setting(const RunConfig& cfg, double alpha,
                             std::uint32_t setting_index,
                             KernelKind kernel = kernels::select_kernel(),
                             unsigned workers = 0);

CorrelationCurve sweep(const RunConfig& cfg,
                       KernelKind kernel = kernels::select_kernel(),
                       unsigned workers = 0);

}  // namespace epr
