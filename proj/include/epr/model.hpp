#pragma once

#include <cmath>
#include <numbers>

#include "epr/errors.hpp"
#include "epr/kernels/cosine.hpp"
#include "epr/outcomes.hpp"
#include "epr/philox.hpp"

namespace epr {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Reduce an angle to [0, 2*pi). fmod is exact, so in-range values pass through
// unchanged.
inline double wrap_two_pi(double angle) {
    double r = std::fmod(angle, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

// Polarizer switch settings: analyzer angle plus the dead-zone half-width.
// threshold 0 keeps every photon detectable (up to measure-zero boundaries).
struct DetectorSettings {
    double angle;      // radians, reduced to [0, 2*pi)
    double threshold;  // in [0, 0.5)

    DetectorSettings(double angle_rad, double threshold_s)
        : angle(wrap_two_pi(angle_rad)), threshold(threshold_s) {
        if (!std::isfinite(angle_rad))
            throw ValidationError("detector angle must be finite");
        if (!(threshold_s >= 0.0 && threshold_s < 0.5))
            throw ValidationError("detector threshold must lie in [0, 0.5)");
    }
};

// Shared polarization of one photon pair. Photon 1 reaches its analyzer at
// lambda + eps1, photon 2 at (lambda + delta) + eps2; eps are the per-photon
// decoherence perturbations.
struct PairState {
    double lambda;
    double delta;
    double eps1;
    double eps2;

    double angle1() const { return lambda + eps1; }
    double angle2() const { return (lambda + delta) + eps2; }
};

// Three-outcome intensity split: Plus when cos^2(phi - a) > 1/2 + threshold,
// Minus when it is below 1/2 - threshold, Undetected in the dead zone between.
// Evaluated in the equivalent half-angle form cos(2(phi - a)) vs 2*threshold.
// Boundary ties land in Undetected.
inline SwitchOutcome classify_half_angle(double cos2x, double t) {
    if (cos2x > t) return SwitchOutcome::Plus;
    if (cos2x < -t) return SwitchOutcome::Minus;
    return SwitchOutcome::Undetected;
}

// Single classification routine shared by measure() and the tally kernels;
// t = 2 * threshold.
inline SwitchOutcome classify_at(double photon_angle, double analyzer_angle, double t) {
    const double dx = photon_angle - analyzer_angle;
    return classify_half_angle(kernels::reduced_cos(dx + dx), t);
}

inline SwitchOutcome measure(double photon_angle, const DetectorSettings& det) {
    return classify_at(photon_angle, det.angle, 2.0 * det.threshold);
}

// Draw one pair: lambda ~ U[0, 2*pi); eps1, eps2 ~ U[-d*pi/2, +d*pi/2).
// d = 0 draws no eps words at all and both perturbations are exactly zero.
inline PairState emit_pair(Substream& rng, double delta, double decoherence) {
    PairState p{};
    p.lambda = rng.next_unit() * kTwoPi;
    p.delta = delta;
    if (decoherence > 0.0) {
        const double half = decoherence * (kPi / 2.0);
        const double span = half + half;
        p.eps1 = std::fma(rng.next_unit(), span, -half);
        p.eps2 = std::fma(rng.next_unit(), span, -half);
    } else {
        p.eps1 = 0.0;
        p.eps2 = 0.0;
    }
    return p;
}

}  // namespace epr
