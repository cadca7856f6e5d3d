// AVX2 tally kernel: four pairs per step, bit-identical to tally_scalar.
//
// Identity holds because every floating-point step is the same operation in
// the same order as the scalar path: 52-bit uniforms enter through an exact
// integer conversion, eps uses one fmadd, the cosine mirrors reduced_cos
// (round-to-nearest quadrant, two fmadd reduction steps, fmadd-Horner
// polynomials), and comparisons reuse the same > t / < -t split. Lanes never
// interact, and the remainder of a block goes through tally_one_pair, the
// same routine the scalar kernel is built from.

#include "epr/kernels/tally_kernel.hpp"

#if defined(EPR_HAVE_AVX2)

#include <immintrin.h>

#include "epr/kernels/cosine.hpp"
#include "epr/philox.hpp"

namespace epr {
namespace kernels {
namespace {

struct VecBlock {
    __m256i out0, out1, out2, out3;
};

// Counter words live one-per-64-bit-lane so _mm256_mul_epu32 yields the full
// 32x32 product directly. Key bumps happen in scalar u32 arithmetic to get
// the exact wraparound, then rebroadcast.
inline VecBlock philox4_vec(__m256i c0, __m256i c1, __m256i c2, __m256i c3,
                            std::uint32_t k0, std::uint32_t k1) {
    const __m256i m0 = _mm256_set1_epi64x(static_cast<long long>(kPhiloxM0));
    const __m256i m1 = _mm256_set1_epi64x(static_cast<long long>(kPhiloxM1));
    const __m256i lo32 = _mm256_set1_epi64x(0xFFFFFFFFll);
    for (int round = 0; round < 10; ++round) {
        const __m256i p0 = _mm256_mul_epu32(m0, c0);
        const __m256i p1 = _mm256_mul_epu32(m1, c2);
        const __m256i k0v = _mm256_set1_epi64x(static_cast<long long>(k0));
        const __m256i k1v = _mm256_set1_epi64x(static_cast<long long>(k1));
        const __m256i n0 =
            _mm256_xor_si256(_mm256_xor_si256(_mm256_srli_epi64(p1, 32), c1), k0v);
        const __m256i n1 = _mm256_and_si256(p1, lo32);
        const __m256i n2 =
            _mm256_xor_si256(_mm256_xor_si256(_mm256_srli_epi64(p0, 32), c3), k1v);
        const __m256i n3 = _mm256_and_si256(p0, lo32);
        c0 = n0;
        c1 = n1;
        c2 = n2;
        c3 = n3;
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    return {c0, c1, c2, c3};
}

inline __m256i word_low(const VecBlock& b) {
    return _mm256_or_si256(b.out0, _mm256_slli_epi64(b.out1, 32));
}

inline __m256i word_high(const VecBlock& b) {
    return _mm256_or_si256(b.out2, _mm256_slli_epi64(b.out3, 32));
}

// (bits >> 12) * 2^-52 with the shifted value converted exactly via the
// 2^52 bias trick; matches Substream::unit_double bit for bit.
inline __m256d unit_from_bits(__m256i bits) {
    const __m256i mant = _mm256_srli_epi64(bits, 12);
    const __m256i biased =
        _mm256_or_si256(mant, _mm256_set1_epi64x(0x4330000000000000ll));
    const __m256d value =
        _mm256_sub_pd(_mm256_castsi256_pd(biased), _mm256_set1_pd(0x1p52));
    return _mm256_mul_pd(value, _mm256_set1_pd(0x1p-52));
}

// reduced_cos on four lanes. Callers guarantee |x| <= 4096 (analyzer angles
// are pre-wrapped and lambda/eps are bounded), so the fmod fallback of the
// scalar version is unreachable here.
inline __m256d vec_cos(__m256d x) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d q = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kTwoOverPi)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fmadd_pd(q, _mm256_set1_pd(-kPiOver2Hi), x);
    r = _mm256_fmadd_pd(q, _mm256_set1_pd(-kPiOver2Lo), r);
    const __m256d z = _mm256_mul_pd(r, r);

    __m256d pc = _mm256_set1_pd(1.0 / 20922789888000.0);
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(-1.0 / 87178291200.0));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(1.0 / 479001600.0));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(-1.0 / 3628800.0));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(1.0 / 40320.0));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(-1.0 / 720.0));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(1.0 / 24.0));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(-0.5));
    const __m256d c = _mm256_fmadd_pd(pc, z, one);

    __m256d ps = _mm256_set1_pd(1.0 / 355687428096000.0);
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-1.0 / 1307674368000.0));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(1.0 / 6227020800.0));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-1.0 / 39916800.0));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(1.0 / 362880.0));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-1.0 / 5040.0));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(1.0 / 120.0));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-1.0 / 6.0));
    const __m256d s = _mm256_mul_pd(r, _mm256_fmadd_pd(z, ps, one));

    // Quadrant pick, same truncation-and-mask as the scalar switch. q is
    // exactly integral so the int conversion is lossless.
    const __m128i qi = _mm_and_si128(_mm256_cvtpd_epi32(q), _mm_set1_epi32(3));
    const __m256d is1 = _mm256_castsi256_pd(
        _mm256_cvtepi32_epi64(_mm_cmpeq_epi32(qi, _mm_set1_epi32(1))));
    const __m256d is2 = _mm256_castsi256_pd(
        _mm256_cvtepi32_epi64(_mm_cmpeq_epi32(qi, _mm_set1_epi32(2))));
    const __m256d is3 = _mm256_castsi256_pd(
        _mm256_cvtepi32_epi64(_mm_cmpeq_epi32(qi, _mm_set1_epi32(3))));

    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d res = _mm256_blendv_pd(c, _mm256_xor_pd(s, sign), is1);
    res = _mm256_blendv_pd(res, _mm256_xor_pd(c, sign), is2);
    return _mm256_blendv_pd(res, s, is3);
}

}  // namespace

void tally_avx2(const SettingParams& sp, std::uint64_t first, std::uint64_t count,
                CoincidenceTally& tally) {
    tally.emitted += count;

    const __m256d two_pi = _mm256_set1_pd(kTwoPi);
    const __m256d delta_v = _mm256_set1_pd(sp.delta);
    const __m256d alpha_v = _mm256_set1_pd(sp.alpha);
    const __m256d beta_v = _mm256_set1_pd(sp.beta);
    const double t = 2.0 * sp.threshold;
    const __m256d t_v = _mm256_set1_pd(t);
    const __m256d neg_t_v = _mm256_set1_pd(-t);
    const __m256d eta_v = _mm256_set1_pd(sp.efficiency);
    const __m256d one = _mm256_set1_pd(1.0);

    const bool jitter = sp.decoherence > 0.0;
    const double half = sp.decoherence * (kPi / 2.0);
    const double span = half + half;
    const __m256d span_v = _mm256_set1_pd(span);
    const __m256d neg_half_v = _mm256_set1_pd(-half);

    const std::uint32_t key_lo = static_cast<std::uint32_t>(sp.seed);
    const std::uint32_t key_hi = static_cast<std::uint32_t>(sp.seed >> 32);
    const __m256i setting_v =
        _mm256_set1_epi64x(static_cast<long long>(sp.setting_index));

    const std::uint64_t end = first + count;
    std::uint64_t i = first;
    for (; i + 4 <= end; i += 4) {
        const __m256d idx =
            _mm256_set_pd(static_cast<double>(i + 3), static_cast<double>(i + 2),
                          static_cast<double>(i + 1), static_cast<double>(i));
        const __m256d gained = _mm256_sub_pd(
            _mm256_floor_pd(_mm256_mul_pd(_mm256_add_pd(idx, one), eta_v)),
            _mm256_floor_pd(_mm256_mul_pd(idx, eta_v)));
        const int gate = _mm256_movemask_pd(_mm256_cmp_pd(gained, one, _CMP_EQ_OQ));
        if (gate == 0) continue;

        const __m256i pair_lo = _mm256_set_epi64x(
            static_cast<long long>(static_cast<std::uint32_t>(i + 3)),
            static_cast<long long>(static_cast<std::uint32_t>(i + 2)),
            static_cast<long long>(static_cast<std::uint32_t>(i + 1)),
            static_cast<long long>(static_cast<std::uint32_t>(i)));
        const __m256i pair_hi = _mm256_set_epi64x(
            static_cast<long long>(static_cast<std::uint32_t>((i + 3) >> 32)),
            static_cast<long long>(static_cast<std::uint32_t>((i + 2) >> 32)),
            static_cast<long long>(static_cast<std::uint32_t>((i + 1) >> 32)),
            static_cast<long long>(static_cast<std::uint32_t>(i >> 32)));

        const VecBlock b0 = philox4_vec(_mm256_setzero_si256(), pair_lo, pair_hi,
                                        setting_v, key_lo, key_hi);
        const __m256d lam = _mm256_mul_pd(unit_from_bits(word_low(b0)), two_pi);

        __m256d eps1 = _mm256_setzero_pd();
        __m256d eps2 = _mm256_setzero_pd();
        if (jitter) {
            eps1 = _mm256_fmadd_pd(unit_from_bits(word_high(b0)), span_v, neg_half_v);
            const VecBlock b1 =
                philox4_vec(_mm256_set1_epi64x(1), pair_lo, pair_hi, setting_v,
                            key_lo, key_hi);
            eps2 = _mm256_fmadd_pd(unit_from_bits(word_low(b1)), span_v, neg_half_v);
        }

        const __m256d phi1 = _mm256_add_pd(lam, eps1);
        const __m256d phi2 = _mm256_add_pd(_mm256_add_pd(lam, delta_v), eps2);

        const __m256d dx1 = _mm256_sub_pd(phi1, alpha_v);
        const __m256d dx2 = _mm256_sub_pd(phi2, beta_v);
        const __m256d c1 = vec_cos(_mm256_add_pd(dx1, dx1));
        const __m256d c2 = vec_cos(_mm256_add_pd(dx2, dx2));

        const int plus1 = _mm256_movemask_pd(_mm256_cmp_pd(c1, t_v, _CMP_GT_OQ));
        const int minus1 = _mm256_movemask_pd(_mm256_cmp_pd(c1, neg_t_v, _CMP_LT_OQ));
        const int plus2 = _mm256_movemask_pd(_mm256_cmp_pd(c2, t_v, _CMP_GT_OQ));
        const int minus2 = _mm256_movemask_pd(_mm256_cmp_pd(c2, neg_t_v, _CMP_LT_OQ));

        for (int lane = 0; lane < 4; ++lane) {
            if (((gate >> lane) & 1) == 0) continue;
            const int o1 = ((plus1 >> lane) & 1) ? 0 : (((minus1 >> lane) & 1) ? 1 : 2);
            const int o2 = ((plus2 >> lane) & 1) ? 0 : (((minus2 >> lane) & 1) ? 1 : 2);
            ++tally.counts[static_cast<std::size_t>(o1)][static_cast<std::size_t>(o2)];
            ++tally.recorded;
        }
    }

    for (; i < end; ++i) {
        if (!efficiency_gate(i, sp.efficiency)) continue;
        tally_one_pair(sp, i, tally);
    }
}

}  // namespace kernels
}  // namespace epr

#endif  // EPR_HAVE_AVX2
