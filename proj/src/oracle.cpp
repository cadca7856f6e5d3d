// Deterministic reference for the simulator, computed from arc geometry
// instead of sampling. In the doubled angle theta = 2*lambda each switch
// outcome is a union of arcs on the circle, so every joint probability is an
// exact arc-overlap length; the decoherence average reduces to a single sum
// because the probabilities depend on eps1 and eps2 only through their
// difference.

#include "epr/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "epr/errors.hpp"

namespace epr {
namespace oracle {
namespace {

// Circular distance from angle x to 0, in [0, pi].
double circ_dist(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r > kPi ? kTwoPi - r : r;
}

// Intersection length of two arcs with half-widths w1, w2 and centers dc
// apart. Valid while w1 + w2 <= pi, which 2w + 2wu = pi guarantees here.
double arc_overlap(double dc, double w1, double w2) {
    return std::max(0.0, std::min({w1 + w2 - dc, 2.0 * w1, 2.0 * w2}));
}

// Adds the arc-length (not yet normalized) outcome masses for one value of
// g = 2*(alpha - beta + delta) + 2*(eps2 - eps1). Plus arcs have half-width
// w around the analyzer axis, Minus the same around the opposite axis, and
// the two dead zones half-width wu around the axes halfway between.
void accumulate(double g, double w, double wu, double weight, OutcomeDistribution& dist) {
    const double d0 = circ_dist(g);
    const double dpi = circ_dist(g + kPi);
    const double same = weight * arc_overlap(d0, w, w);
    const double opp = weight * arc_overlap(dpi, w, w);
    const double mixed = weight * (arc_overlap(circ_dist(g + kPi / 2.0), w, wu) +
                                   arc_overlap(circ_dist(g - kPi / 2.0), w, wu));
    const double both_undet =
        weight * 2.0 * (arc_overlap(d0, wu, wu) + arc_overlap(dpi, wu, wu));
    dist.p[0][0] += same;
    dist.p[1][1] += same;
    dist.p[0][1] += opp;
    dist.p[1][0] += opp;
    dist.p[0][2] += mixed;
    dist.p[2][0] += mixed;
    dist.p[1][2] += mixed;
    dist.p[2][1] += mixed;
    dist.p[2][2] += both_undet;
}

void check_params(double threshold_s, double decoherence) {
    if (!(threshold_s >= 0.0 && threshold_s < 0.5))
        throw ValidationError("threshold must lie in [0, 0.5)");
    if (!(decoherence >= 0.0 && decoherence <= 1.0))
        throw ValidationError("decoherence must lie in [0, 1]");
}

}  // namespace

double OutcomeDistribution::sum() const {
    double acc = 0.0;
    for (const auto& row : p)
        for (double v : row) acc += v;
    return acc;
}

double analog_integral(double alpha, double beta, double delta) {
    return (2.0 + std::cos(2.0 * (alpha - beta + delta))) / 8.0;
}

double analog_integral_quadrature(double alpha, double beta, double delta,
                                  std::uint32_t nodes) {
    if (nodes < 5)
        throw ValidationError("analog quadrature needs at least 5 nodes");
    double acc = 0.0;
    for (std::uint32_t j = 0; j < nodes; ++j) {
        const double lambda = (static_cast<double>(j) + 0.5) * kTwoPi /
                              static_cast<double>(nodes);
        const double c1 = std::cos(lambda - alpha);
        const double c2 = std::cos((lambda + delta) - beta);
        acc += c1 * c1 * c2 * c2;
    }
    return acc / static_cast<double>(nodes);
}

OutcomeDistribution digital_distribution(double alpha, double beta, double delta,
                                         double threshold_s, double decoherence,
                                         std::uint32_t nodes_per_dim) {
    check_params(threshold_s, decoherence);
    if (nodes_per_dim < 1)
        throw ValidationError("nodes_per_dim must be >= 1");

    const double t = 2.0 * threshold_s;
    const double w = std::acos(t);
    const double wu = kPi / 2.0 - w;
    const double g0 = 2.0 * (alpha - beta + delta);

    OutcomeDistribution dist;
    double scale;
    if (decoherence <= 0.0) {
        accumulate(g0, w, wu, 1.0, dist);
        scale = 1.0 / kTwoPi;
    } else {
        // Composite midpoint over (eps1, eps2). The integrand depends only on
        // eps2 - eps1, so the m x m grid collapses to the difference diagonal:
        // offset k*h occurs (m - |k|) times.
        const std::int64_t m = static_cast<std::int64_t>(nodes_per_dim);
        const double h = decoherence * kPi / static_cast<double>(m);
        for (std::int64_t k = -(m - 1); k <= m - 1; ++k) {
            const double weight = static_cast<double>(m - std::llabs(k));
            accumulate(g0 + 2.0 * (static_cast<double>(k) * h), w, wu, weight, dist);
        }
        scale = 1.0 / (static_cast<double>(m) * static_cast<double>(m)) / kTwoPi;
    }
    for (auto& row : dist.p)
        for (double& v : row) v *= scale;
    return dist;
}

double oracle_E(double alpha, double beta, double delta, double threshold_s,
                double decoherence, std::uint32_t nodes_per_dim) {
    const OutcomeDistribution dist =
        digital_distribution(alpha, beta, delta, threshold_s, decoherence, nodes_per_dim);
    const double den = dist.p[0][0] + dist.p[0][1] + dist.p[1][0] + dist.p[1][1];
    if (den <= 0.0)
        throw EmptyTallyError("definite outcome probability is zero at these settings");
    return (dist.p[0][0] + dist.p[1][1] - dist.p[0][1] - dist.p[1][0]) / den;
}

double oracle_chsh(double delta, double threshold_s, double decoherence,
                   const ChshAngles& angles, std::uint32_t nodes_per_dim) {
    const std::array<double, 4> e{
        oracle_E(angles.a, angles.b, delta, threshold_s, decoherence, nodes_per_dim),
        oracle_E(angles.a, angles.b_prime, delta, threshold_s, decoherence, nodes_per_dim),
        oracle_E(angles.a_prime, angles.b, delta, threshold_s, decoherence, nodes_per_dim),
        oracle_E(angles.a_prime, angles.b_prime, delta, threshold_s, decoherence,
                 nodes_per_dim)};
    return chsh_combine(e);
}

}  // namespace oracle
}  // namespace epr
