#pragma once

#include <array>
#include <cstdint>

namespace epr {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Stateless:
// every output block is a pure function of (counter, key), which is what makes
// per-pair substreams order-independent and SIMD lanes trivially independent.
inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

using PhiloxBlock = std::array<std::uint32_t, 4>;

inline PhiloxBlock philox4x32_10(PhiloxBlock ctr, std::uint32_t k0, std::uint32_t k1) {
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t{kPhiloxM0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{kPhiloxM1} * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ k0,
               static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ k1,
               static_cast<std::uint32_t>(p0)};
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    return ctr;
}

// One pair's private random stream, keyed by (seed, setting, pair). Word j is
// the low (even j) or high (odd j) 64-bit half of counter block j/2, so any
// word can be produced without generating the ones before it.
class Substream {
public:
    Substream(std::uint64_t seed, std::uint32_t setting_index, std::uint64_t pair_index)
        : key_lo_(static_cast<std::uint32_t>(seed)),
          key_hi_(static_cast<std::uint32_t>(seed >> 32)),
          pair_lo_(static_cast<std::uint32_t>(pair_index)),
          pair_hi_(static_cast<std::uint32_t>(pair_index >> 32)),
          setting_(setting_index) {}

    std::uint64_t word(std::uint32_t index) const {
        const PhiloxBlock out =
            philox4x32_10({index >> 1, pair_lo_, pair_hi_, setting_}, key_lo_, key_hi_);
        if (index & 1u) return std::uint64_t{out[2]} | (std::uint64_t{out[3]} << 32);
        return std::uint64_t{out[0]} | (std::uint64_t{out[1]} << 32);
    }

    std::uint64_t next_u64() { return word(cursor_++); }
    double next_unit() { return unit_double(next_u64()); }

    // 52-bit mantissa keeps the integer-to-double step exactly representable;
    // the AVX2 kernel reproduces it bit-for-bit with integer ops.
    static double unit_double(std::uint64_t bits) {
        return static_cast<double>(bits >> 12) * 0x1p-52;
    }

private:
    std::uint32_t key_lo_, key_hi_, pair_lo_, pair_hi_, setting_;
    std::uint32_t cursor_ = 0;
};

}  // namespace epr
