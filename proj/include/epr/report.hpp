#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "epr/analysis.hpp"
#include "epr/oracle.hpp"

namespace epr {

// Shortest round-trip decimal rendering (std::to_chars); "nan" for NaN.
std::string format_double(double value);

// Simulated sweep: one row per setting with the full 3x3 tally and E.
// Cells with no definite coincidences render E as "nan".
void write_sweep_csv(std::ostream& out, const RunConfig& cfg,
                     const CorrelationCurve& curve, const std::string& label = "");

// Oracle counterpart of write_sweep_csv over the same alpha grid.
void write_theory_sweep_csv(std::ostream& out, const RunConfig& cfg,
                            std::uint32_t nodes_per_dim = 2048);

struct ScanPoint {
    double threshold = 0.0;
    ChshResult chsh;
};

void write_scan_csv(std::ostream& out, const RunConfig& cfg,
                    const std::vector<ScanPoint>& points);

void write_theory_scan_csv(std::ostream& out, const RunConfig& cfg,
                           const std::vector<double>& thresholds,
                           const ChshAngles& angles = {},
                           std::uint32_t nodes_per_dim = 2048);

// Full CHSH result as JSON, including per-run S values and the exact command
// configuration, so a run can be reproduced from the file alone.
void write_chsh_json(std::ostream& out, const std::string& command,
                     const RunConfig& cfg, const ChshResult& result);

}  // namespace epr
