#pragma once

#include <array>
#include <cstdint>

#include "epr/analysis.hpp"

namespace epr {
namespace oracle {

// Exact outcome probabilities for one analyzer pair, indexed
// [outcome1][outcome2] with Plus=0, Minus=1, Undetected=2. Rows/cols sum to 1.
struct OutcomeDistribution {
    std::array<std::array<double, 3>, 3> p{};

    double& cell(int o1, int o2) { return p[static_cast<std::size_t>(o1)][static_cast<std::size_t>(o2)]; }
    double cell(int o1, int o2) const { return p[static_cast<std::size_t>(o1)][static_cast<std::size_t>(o2)]; }
    double sum() const;
};

// Mean of cos^2(lambda - alpha) * cos^2((lambda + delta) - beta) over lambda:
// 1/8 * (2 + cos(2*(alpha - beta + delta))). The analog (pre-switch) ++
// intensity of the model.
double analog_integral(double alpha, double beta, double delta);

// Same quantity by periodic midpoint quadrature; exact (up to rounding) for
// nodes >= 5 because the integrand is a trig polynomial of degree 4.
double analog_integral_quadrature(double alpha, double beta, double delta,
                                  std::uint32_t nodes = 4096);

// Exact distribution for the digital (thresholded) switch. threshold_s is the
// CLI-level s in [0, 0.5); decoherence d in [0, 1] averages over the
// eps1/eps2 jitter with a composite midpoint rule of nodes_per_dim points per
// axis (the double average collapses to a single sum over eps2 - eps1).
// d = 0 is evaluated in closed form without quadrature.
OutcomeDistribution digital_distribution(double alpha, double beta, double delta,
                                         double threshold_s, double decoherence,
                                         std::uint32_t nodes_per_dim = 2048);

// Post-selected E of a digital distribution. Throws EmptyTallyError when the
// four definite cells carry zero probability.
double oracle_E(double alpha, double beta, double delta, double threshold_s,
                double decoherence, std::uint32_t nodes_per_dim = 2048);

// Deterministic S for the four CHSH combos at the given settings.
double oracle_chsh(double delta, double threshold_s, double decoherence,
                   const ChshAngles& angles = {}, std::uint32_t nodes_per_dim = 2048);

}  // namespace oracle
}  // namespace epr
