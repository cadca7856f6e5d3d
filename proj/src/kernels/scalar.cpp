#include "epr/kernels/tally_kernel.hpp"

namespace epr {
namespace kernels {

void tally_scalar(const SettingParams& sp, std::uint64_t first_pair,
                  std::uint64_t count, CoincidenceTally& tally) {
    tally.emitted += count;
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t pair = first_pair + i;
        if (!efficiency_gate(pair, sp.efficiency)) continue;
        tally_one_pair(sp, pair, tally);
    }
}

}  // namespace kernels
}  // namespace epr
