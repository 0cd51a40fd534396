#pragma once

// 8-lane pack emulated with plain arrays. This is the reference
// implementation; semantics mirror the AVX2 intrinsics lane for lane
// (blend keys off the mask sign bit, converts round to nearest-even).

#include <bit>
#include <cmath>
#include <cstdint>

namespace estsim::kernels::detail {

struct ScalarPack {
    struct F { float v[8]; };
    struct I { std::int32_t v[8]; };
    struct U64 { std::uint64_t v[4]; };

    static F set1(float x) {
        F r;
        for (auto& e : r.v) e = x;
        return r;
    }
    static I set1_i(std::int32_t x) {
        I r;
        for (auto& e : r.v) e = x;
        return r;
    }
    static F load(const float* p) {
        F r;
        for (int i = 0; i < 8; ++i) r.v[i] = p[i];
        return r;
    }
    static void store(float* p, F a) {
        for (int i = 0; i < 8; ++i) p[i] = a.v[i];
    }

    static F add(F a, F b) { return map2(a, b, [](float x, float y) { return x + y; }); }
    static F sub(F a, F b) { return map2(a, b, [](float x, float y) { return x - y; }); }
    static F mul(F a, F b) { return map2(a, b, [](float x, float y) { return x * y; }); }
    static F fma(F a, F b, F c) {
        F r;
        for (int i = 0; i < 8; ++i) r.v[i] = std::fmaf(a.v[i], b.v[i], c.v[i]);
        return r;
    }
    static F sqrt(F a) {
        F r;
        for (int i = 0; i < 8; ++i) r.v[i] = std::sqrt(a.v[i]);
        return r;
    }
    static F min(F a, F b) { return map2(a, b, [](float x, float y) { return y < x ? y : x; }); }

    static F cvt_i_to_f(I a) {
        F r;
        for (int i = 0; i < 8; ++i) r.v[i] = static_cast<float>(a.v[i]);
        return r;
    }
    static I cvt_f_to_i_nearest(F a) {
        I r;
        for (int i = 0; i < 8; ++i) r.v[i] = static_cast<std::int32_t>(std::lrintf(a.v[i]));
        return r;
    }

    static I and32(I a, I b) { return mapi2(a, b, [](std::uint32_t x, std::uint32_t y) { return x & y; }); }
    static I or32(I a, I b) { return mapi2(a, b, [](std::uint32_t x, std::uint32_t y) { return x | y; }); }
    static I add32(I a, I b) { return mapi2(a, b, [](std::uint32_t x, std::uint32_t y) { return x + y; }); }
    static I sub32(I a, I b) { return mapi2(a, b, [](std::uint32_t x, std::uint32_t y) { return x - y; }); }
    static I srl32(I a, int k) {
        I r;
        for (int i = 0; i < 8; ++i)
            r.v[i] = static_cast<std::int32_t>(static_cast<std::uint32_t>(a.v[i]) >> k);
        return r;
    }
    static I sll32(I a, int k) {
        I r;
        for (int i = 0; i < 8; ++i)
            r.v[i] = static_cast<std::int32_t>(static_cast<std::uint32_t>(a.v[i]) << k);
        return r;
    }

    static F i_as_f(I a) {
        F r;
        for (int i = 0; i < 8; ++i) r.v[i] = std::bit_cast<float>(a.v[i]);
        return r;
    }
    static I f_as_i(F a) {
        I r;
        for (int i = 0; i < 8; ++i) r.v[i] = std::bit_cast<std::int32_t>(a.v[i]);
        return r;
    }

    static F and_f(F mask, F a) {
        F r;
        for (int i = 0; i < 8; ++i)
            r.v[i] = std::bit_cast<float>(std::bit_cast<std::uint32_t>(mask.v[i]) &
                                          std::bit_cast<std::uint32_t>(a.v[i]));
        return r;
    }
    static F xor_f(F a, F b) {
        F r;
        for (int i = 0; i < 8; ++i)
            r.v[i] = std::bit_cast<float>(std::bit_cast<std::uint32_t>(a.v[i]) ^
                                          std::bit_cast<std::uint32_t>(b.v[i]));
        return r;
    }
    static F cmp_lt(F a, F b) {
        F r;
        for (int i = 0; i < 8; ++i)
            r.v[i] = std::bit_cast<float>(a.v[i] < b.v[i] ? 0xffffffffu : 0u);
        return r;
    }
    static F mask_from_eq32(I a, I b) {
        F r;
        for (int i = 0; i < 8; ++i)
            r.v[i] = std::bit_cast<float>(a.v[i] == b.v[i] ? 0xffffffffu : 0u);
        return r;
    }
    // Selects b where the mask sign bit is set (blendv semantics).
    static F blend(F a, F b, F mask) {
        F r;
        for (int i = 0; i < 8; ++i)
            r.v[i] = (std::bit_cast<std::uint32_t>(mask.v[i]) >> 31) ? b.v[i] : a.v[i];
        return r;
    }

    static float hadd_tree(F a) {
        float b0 = a.v[0] + a.v[4], b1 = a.v[1] + a.v[5];
        float b2 = a.v[2] + a.v[6], b3 = a.v[3] + a.v[7];
        float c0 = b0 + b2, c1 = b1 + b3;
        return c0 + c1;
    }
    static float hmin_tree(F a) {
        auto m = [](float x, float y) { return y < x ? y : x; };
        float b0 = m(a.v[0], a.v[4]), b1 = m(a.v[1], a.v[5]);
        float b2 = m(a.v[2], a.v[6]), b3 = m(a.v[3], a.v[7]);
        return m(m(b0, b2), m(b1, b3));
    }

    static U64 load_u64(const std::uint64_t* p) {
        U64 r;
        for (int i = 0; i < 4; ++i) r.v[i] = p[i];
        return r;
    }
    static U64 add64(U64 a, U64 b) { return mapu2(a, b, [](std::uint64_t x, std::uint64_t y) { return x + y; }); }
    static U64 xor64(U64 a, U64 b) { return mapu2(a, b, [](std::uint64_t x, std::uint64_t y) { return x ^ y; }); }
    static U64 or64(U64 a, U64 b) { return mapu2(a, b, [](std::uint64_t x, std::uint64_t y) { return x | y; }); }
    static U64 sll64(U64 a, int k) {
        U64 r;
        for (int i = 0; i < 4; ++i) r.v[i] = a.v[i] << k;
        return r;
    }
    static U64 srl64(U64 a, int k) {
        U64 r;
        for (int i = 0; i < 4; ++i) r.v[i] = a.v[i] >> k;
        return r;
    }
    // Little-endian u32 lane view, matching the 256-bit register layout.
    static I u64_as_i32(U64 a) {
        I r;
        for (int i = 0; i < 4; ++i) {
            r.v[2 * i] = static_cast<std::int32_t>(static_cast<std::uint32_t>(a.v[i]));
            r.v[2 * i + 1] = static_cast<std::int32_t>(static_cast<std::uint32_t>(a.v[i] >> 32));
        }
        return r;
    }

  private:
    template <class Op>
    static F map2(F a, F b, Op op) {
        F r;
        for (int i = 0; i < 8; ++i) r.v[i] = op(a.v[i], b.v[i]);
        return r;
    }
    template <class Op>
    static I mapi2(I a, I b, Op op) {
        I r;
        for (int i = 0; i < 8; ++i)
            r.v[i] = static_cast<std::int32_t>(op(static_cast<std::uint32_t>(a.v[i]),
                                                  static_cast<std::uint32_t>(b.v[i])));
        return r;
    }
    template <class Op>
    static U64 mapu2(U64 a, U64 b, Op op) {
        U64 r;
        for (int i = 0; i < 4; ++i) r.v[i] = op(a.v[i], b.v[i]);
        return r;
    }
};

} // namespace estsim::kernels::detail
