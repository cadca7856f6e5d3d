#pragma once

#include <cmath>
#include <limits>
#include <numbers>

namespace epr::kernels {

// Quadrant constants for the shared cosine. Two fma steps with the split pi/2
// keep the reduction residual near 1e-29 at the largest quotient this code
// ever sees, far below the polynomial's own rounding noise.
inline constexpr double kTwoOverPi = 0x1.45f306dc9c883p-1;
inline constexpr double kPiOver2Hi = 0x1.921fb54442d18p+0;
inline constexpr double kPiOver2Lo = 0x1.1a62633145c07p-54;

// Taylor polynomials on [-pi/4, pi/4]; the omitted tails sit below 1 ulp.
// Every coefficient is a correctly rounded factorial reciprocal.
inline double cos_poly(double z) {
    double p = 1.0 / 20922789888000.0;          // 1/16!
    p = std::fma(p, z, -1.0 / 87178291200.0);   // 1/14!
    p = std::fma(p, z, 1.0 / 479001600.0);      // 1/12!
    p = std::fma(p, z, -1.0 / 3628800.0);       // 1/10!
    p = std::fma(p, z, 1.0 / 40320.0);          // 1/8!
    p = std::fma(p, z, -1.0 / 720.0);           // 1/6!
    p = std::fma(p, z, 1.0 / 24.0);             // 1/4!
    p = std::fma(p, z, -0.5);                   // 1/2!
    return std::fma(p, z, 1.0);
}

inline double sin_poly(double r, double z) {
    double p = 1.0 / 355687428096000.0;          // 1/17!
    p = std::fma(p, z, -1.0 / 1307674368000.0);  // 1/15!
    p = std::fma(p, z, 1.0 / 6227020800.0);      // 1/13!
    p = std::fma(p, z, -1.0 / 39916800.0);       // 1/11!
    p = std::fma(p, z, 1.0 / 362880.0);          // 1/9!
    p = std::fma(p, z, -1.0 / 5040.0);           // 1/7!
    p = std::fma(p, z, 1.0 / 120.0);             // 1/5!
    p = std::fma(p, z, -1.0 / 6.0);              // 1/3!
    return r * std::fma(z, p, 1.0);
}

// cos(x), accurate to a few ulp for |x| <= 4096. This is the one cosine used
// on the simulation path: the scalar kernel and measure() call it directly and
// the AVX2 kernel mirrors it operation for operation (same rounding, same fma
// placement), so outcome classifications are bit-identical across variants.
// Larger arguments take one exact fmod first and lose nothing but speed.
inline double reduced_cos(double x) {
    if (!(std::fabs(x) <= 4096.0)) {
        if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
        x = std::fmod(x, 2.0 * std::numbers::pi);
    }
    const double q = std::nearbyint(x * kTwoOverPi);
    double r = std::fma(q, -kPiOver2Hi, x);
    r = std::fma(q, -kPiOver2Lo, r);
    const double z = r * r;
    const double c = cos_poly(z);
    const double s = sin_poly(r, z);
    switch (static_cast<int>(q) & 3) {
        case 0: return c;
        case 1: return -s;
        case 2: return -c;
        default: return s;
    }
}

}  // namespace epr::kernels
