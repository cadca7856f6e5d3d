#pragma once

#include <cmath>
#include <cstdint>

#include "epr/model.hpp"
#include "epr/outcomes.hpp"

namespace epr::kernels {

// Everything a kernel needs for one detector-pair setting, fully resolved in
// advance so the scalar and SIMD variants consume identical doubles.
struct SettingParams {
    std::uint64_t seed = 0;
    std::uint32_t setting_index = 0;
    double alpha = 0.0;      // analyzer 1 angle, reduced to [0, 2*pi)
    double beta = 0.0;       // analyzer 2 angle, reduced
    double delta = 0.0;      // photon 2 source offset, reduced
    double threshold = 0.0;  // dead-zone half-width
    double efficiency = 1.0;
    double decoherence = 0.0;
};

// Deterministic decimation: pair i records iff the lattice floor((i+1)*eta)
// gains a step at i. Exactly floor(N*eta) of N consecutive pairs record, with
// no RNG involved, so efficiency never perturbs the physics draws.
inline bool efficiency_gate(std::uint64_t pair_index, double efficiency) {
    const double i = static_cast<double>(pair_index);
    return std::floor((i + 1.0) * efficiency) - std::floor(i * efficiency) == 1.0;
}

// Simulate and classify one recorded pair. Also the AVX2 kernel's tail path,
// which is what keeps the two variants bit-identical at any pair count.
inline void tally_one_pair(const SettingParams& sp, std::uint64_t pair_index,
                           CoincidenceTally& tally) {
    Substream rng(sp.seed, sp.setting_index, pair_index);
    const PairState ps = emit_pair(rng, sp.delta, sp.decoherence);
    const double t = 2.0 * sp.threshold;
    const SwitchOutcome o1 = classify_at(ps.angle1(), sp.alpha, t);
    const SwitchOutcome o2 = classify_at(ps.angle2(), sp.beta, t);
    ++tally.cell(o1, o2);
    ++tally.recorded;
}

// Tally pairs [first, first + count) into `tally`. Variants must produce
// bit-identical tallies; the AVX2 one just takes four pairs per step.
void tally_scalar(const SettingParams& sp, std::uint64_t first, std::uint64_t count,
                  CoincidenceTally& tally);
#if defined(EPR_HAVE_AVX2)
void tally_avx2(const SettingParams& sp, std::uint64_t first, std::uint64_t count,
                CoincidenceTally& tally);
#endif

enum class KernelKind { Scalar, Avx2 };

bool avx2_available();       // compiled in and supported by this CPU
KernelKind select_kernel();  // honors EPR_KERNEL=auto|scalar|avx2
const char* kernel_name(KernelKind kind);

using TallyFn = void (*)(const SettingParams&, std::uint64_t, std::uint64_t,
                         CoincidenceTally&);
TallyFn kernel_fn(KernelKind kind);  // throws ValidationError if unavailable

}  // namespace epr::kernels
