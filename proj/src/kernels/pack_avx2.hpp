#pragma once

// AVX2/FMA pack. Must be included only from a translation unit compiled
// with -mavx2 -mfma.

#include <immintrin.h>

#include <cstdint>

namespace estsim::kernels::detail {

struct AvxPack {
    using F = __m256;
    using I = __m256i;
    using U64 = __m256i;

    static F set1(float x) { return _mm256_set1_ps(x); }
    static I set1_i(std::int32_t x) { return _mm256_set1_epi32(x); }
    static F load(const float* p) { return _mm256_loadu_ps(p); }
    static void store(float* p, F a) { _mm256_storeu_ps(p, a); }

    static F add(F a, F b) { return _mm256_add_ps(a, b); }
    static F sub(F a, F b) { return _mm256_sub_ps(a, b); }
    static F mul(F a, F b) { return _mm256_mul_ps(a, b); }
    static F fma(F a, F b, F c) { return _mm256_fmadd_ps(a, b, c); }
    static F sqrt(F a) { return _mm256_sqrt_ps(a); }
    static F min(F a, F b) { return _mm256_min_ps(a, b); }

    static F cvt_i_to_f(I a) { return _mm256_cvtepi32_ps(a); }
    static I cvt_f_to_i_nearest(F a) { return _mm256_cvtps_epi32(a); }

    static I and32(I a, I b) { return _mm256_and_si256(a, b); }
    static I or32(I a, I b) { return _mm256_or_si256(a, b); }
    static I add32(I a, I b) { return _mm256_add_epi32(a, b); }
    static I sub32(I a, I b) { return _mm256_sub_epi32(a, b); }
    static I srl32(I a, int k) { return _mm256_srli_epi32(a, k); }
    static I sll32(I a, int k) { return _mm256_slli_epi32(a, k); }

    static F i_as_f(I a) { return _mm256_castsi256_ps(a); }
    static I f_as_i(F a) { return _mm256_castps_si256(a); }

    static F and_f(F mask, F a) { return _mm256_and_ps(mask, a); }
    static F xor_f(F a, F b) { return _mm256_xor_ps(a, b); }
    static F cmp_lt(F a, F b) { return _mm256_cmp_ps(a, b, _CMP_LT_OQ); }
    static F mask_from_eq32(I a, I b) {
        return _mm256_castsi256_ps(_mm256_cmpeq_epi32(a, b));
    }
    static F blend(F a, F b, F mask) { return _mm256_blendv_ps(a, b, mask); }

    static float hadd_tree(F a) {
        __m128 lo = _mm256_castps256_ps128(a);
        __m128 hi = _mm256_extractf128_ps(a, 1);
        __m128 b = _mm_add_ps(lo, hi); // [a0+a4, a1+a5, a2+a6, a3+a7]
        __m128 c = _mm_add_ps(b, _mm_movehl_ps(b, b)); // [b0+b2, b1+b3, ..]
        __m128 d = _mm_add_ss(c, _mm_shuffle_ps(c, c, 0x55));
        return _mm_cvtss_f32(d);
    }
    static float hmin_tree(F a) {
        __m128 lo = _mm256_castps256_ps128(a);
        __m128 hi = _mm256_extractf128_ps(a, 1);
        __m128 b = _mm_min_ps(lo, hi);
        __m128 c = _mm_min_ps(b, _mm_movehl_ps(b, b));
        __m128 d = _mm_min_ss(c, _mm_shuffle_ps(c, c, 0x55));
        return _mm_cvtss_f32(d);
    }

    static U64 load_u64(const std::uint64_t* p) {
        return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
    }
    static U64 add64(U64 a, U64 b) { return _mm256_add_epi64(a, b); }
    static U64 xor64(U64 a, U64 b) { return _mm256_xor_si256(a, b); }
    static U64 or64(U64 a, U64 b) { return _mm256_or_si256(a, b); }
    static U64 sll64(U64 a, int k) { return _mm256_slli_epi64(a, k); }
    static U64 srl64(U64 a, int k) { return _mm256_srli_epi64(a, k); }
    static I u64_as_i32(U64 a) { return a; }
};

} // namespace estsim::kernels::detail
