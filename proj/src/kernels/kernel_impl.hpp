#pragma once

// Kernel bodies, generic over an 8-lane pack type P (pack_scalar.hpp or
// pack_avx2.hpp). Every floating-point operation is spelled explicitly
// (fma vs mul+add) and both translation units are compiled with
// -ffp-contract=off, so the scalar and AVX2 instantiations round
// identically and produce bit-equal output.

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <cstring>

namespace estsim::kernels::detail {

// --- 4-lane xoshiro256++ ----------------------------------------------

inline std::uint64_t splitmix64_step(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

template <class P>
struct RngState4 {
    typename P::U64 s0, s1, s2, s3;

    explicit RngState4(std::uint64_t seed) {
        std::uint64_t chain = seed;
        std::uint64_t lane_seed[4];
        for (auto& ls : lane_seed) ls = splitmix64_step(chain);
        std::uint64_t w[4][4];
        for (int lane = 0; lane < 4; ++lane) {
            std::uint64_t sm = lane_seed[lane];
            for (int j = 0; j < 4; ++j) w[j][lane] = splitmix64_step(sm);
        }
        s0 = P::load_u64(w[0]);
        s1 = P::load_u64(w[1]);
        s2 = P::load_u64(w[2]);
        s3 = P::load_u64(w[3]);
    }

    // One step of all four lanes; the 256-bit result doubles as 8 u32 lanes.
    typename P::I next_u32x8() {
        using U = typename P::U64;
        U sum = P::add64(s0, s3);
        U rotated = P::or64(P::sll64(sum, 23), P::srl64(sum, 41));
        U result = P::add64(rotated, s0);
        U t = P::sll64(s1, 17);
        s2 = P::xor64(s2, s0);
        s3 = P::xor64(s3, s1);
        s1 = P::xor64(s1, s2);
        s0 = P::xor64(s0, s3);
        s2 = P::xor64(s2, t);
        s3 = P::or64(P::sll64(s3, 45), P::srl64(s3, 19));
        return P::u64_as_i32(result);
    }
};

// --- float log on (0, 1) ------------------------------------------------

template <class P>
inline typename P::F log_unit(typename P::F x) {
    using F = typename P::F;
    using I = typename P::I;
    I ix = P::f_as_i(x);
    I e_i = P::sub32(P::srl32(ix, 23), P::set1_i(126));
    I mant = P::or32(P::and32(ix, P::set1_i(0x007fffff)), P::set1_i(0x3f000000));
    F m = P::i_as_f(mant); // [0.5, 1)
    F below = P::cmp_lt(m, P::set1(0.70710678118654752440f));
    F e = P::add(P::cvt_i_to_f(e_i), P::and_f(below, P::set1(-1.0f)));
    F xm = P::sub(P::add(m, P::and_f(below, m)), P::set1(1.0f));
    F z = P::mul(xm, xm);

    F p = P::set1(7.0376836292e-2f);
    p = P::fma(p, xm, P::set1(-1.1514610310e-1f));
    p = P::fma(p, xm, P::set1(1.1676998740e-1f));
    p = P::fma(p, xm, P::set1(-1.2420140846e-1f));
    p = P::fma(p, xm, P::set1(1.4249322787e-1f));
    p = P::fma(p, xm, P::set1(-1.6668057665e-1f));
    p = P::fma(p, xm, P::set1(2.0000714765e-1f));
    p = P::fma(p, xm, P::set1(-2.4999993993e-1f));
    p = P::fma(p, xm, P::set1(3.3333331174e-1f));

    F y = P::mul(P::mul(xm, z), p);
    y = P::fma(e, P::set1(-2.12194440e-4f), y);
    y = P::fma(z, P::set1(-0.5f), y);
    F res = P::add(xm, y);
    return P::fma(e, P::set1(0.693359375f), res);
}

// --- sin/cos of 2*pi*u for u in [0, 1) ----------------------------------

template <class P>
inline void sincos_2pi(typename P::F u, typename P::F& s, typename P::F& c) {
    using F = typename P::F;
    using I = typename P::I;
    F y = P::mul(u, P::set1(4.0f));
    I n = P::cvt_f_to_i_nearest(y);
    F t = P::sub(y, P::cvt_i_to_f(n)); // [-0.5, 0.5]
    F z = P::mul(t, t);

    F ps = P::set1(1.6044118478735982e-4f);
    ps = P::fma(ps, z, P::set1(-4.6817541353186785e-3f));
    ps = P::fma(ps, z, P::set1(7.9692626246167040e-2f));
    ps = P::fma(ps, z, P::set1(-6.4596409750624625e-1f));
    ps = P::fma(ps, z, P::set1(1.5707963267948966f));
    F sp = P::mul(t, ps); // sin(pi/2 * t)

    F pc = P::set1(9.1926027483942658e-4f);
    pc = P::fma(pc, z, P::set1(-2.0863480763353004e-2f));
    pc = P::fma(pc, z, P::set1(2.5366950790104802e-1f));
    pc = P::fma(pc, z, P::set1(-1.2337005501361697f));
    pc = P::fma(pc, z, P::set1(1.0f)); // cos(pi/2 * t)

    I q = P::and32(n, P::set1_i(3));
    F swap = P::mask_from_eq32(P::and32(q, P::set1_i(1)), P::set1_i(1));
    F base_s = P::blend(sp, pc, swap);
    F base_c = P::blend(pc, sp, swap);
    I sgn_s = P::sll32(P::and32(q, P::set1_i(2)), 30);
    I sgn_c = P::sll32(P::and32(P::add32(q, P::set1_i(1)), P::set1_i(2)), 30);
    s = P::xor_f(base_s, P::i_as_f(sgn_s));
    c = P::xor_f(base_c, P::i_as_f(sgn_c));
}

// --- Box-Muller: 16 standard normals per round ---------------------------

template <class P>
void gaussian_fill_impl(float* dst, std::size_t n, std::uint64_t seed) {
    RngState4<P> rng(seed);
    const auto round16 = [&](float* out) {
        using F = typename P::F;
        F u1 = P::fma(P::cvt_i_to_f(P::srl32(rng.next_u32x8(), 8)),
                      P::set1(0x1.0p-24f), P::set1(0x1.0p-25f));
        F u2 = P::fma(P::cvt_i_to_f(P::srl32(rng.next_u32x8(), 8)),
                      P::set1(0x1.0p-24f), P::set1(0x1.0p-25f));
        F r = P::sqrt(P::mul(log_unit<P>(u1), P::set1(-2.0f)));
        F s, c;
        sincos_2pi<P>(u2, s, c);
        P::store(out, P::mul(r, c));
        P::store(out + 8, P::mul(r, s));
    };

    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) round16(dst + i);
    if (i < n) {
        float tail[16];
        round16(tail);
        std::memcpy(dst + i, tail, (n - i) * sizeof(float));
    }
}

// --- moving average -------------------------------------------------------

template <class P>
void moving_average_impl(const float* x, std::size_t n, std::size_t w, float* out) {
    assert(w >= 1 && w <= n);
    const std::size_t n_out = n - w + 1;
    const float inv_w = 1.0f / static_cast<float>(w);
    std::size_t i = 0;
    for (; i + 8 <= n_out; i += 8) {
        typename P::F acc = P::set1(0.0f);
        for (std::size_t k = 0; k < w; ++k) acc = P::add(acc, P::load(x + i + k));
        P::store(out + i, P::mul(acc, P::set1(inv_w)));
    }
    for (; i < n_out; ++i) {
        float acc = 0.0f;
        for (std::size_t k = 0; k < w; ++k) acc += x[i + k];
        out[i] = acc * inv_w;
    }
}

// --- striped window sum (order fixed so both ISAs round identically) ------

template <class P>
inline float window_mean(const float* x, std::size_t w) {
    float sum;
    if (w < 8) {
        sum = 0.0f;
        for (std::size_t k = 0; k < w; ++k) sum += x[k];
    } else {
        typename P::F acc = P::set1(0.0f);
        std::size_t k = 0;
        for (; k + 8 <= w; k += 8) acc = P::add(acc, P::load(x + k));
        sum = P::hadd_tree(acc);
        for (; k < w; ++k) sum += x[k];
    }
    return sum * (1.0f / static_cast<float>(w));
}

template <class P>
void cds_resample_impl(const float* x, std::size_t n, std::size_t period,
                       std::size_t gate, std::size_t sep, float* out,
                       std::size_t n_out) {
    (void)n;
    for (std::size_t j = 0; j < n_out; ++j) {
        const std::size_t base = j * period;
        assert(base + sep + gate <= n);
        out[j] = window_mean<P>(x + base, gate) - window_mean<P>(x + base + sep, gate);
    }
}

// --- min reduction --------------------------------------------------------

template <class P>
float min_value_impl(const float* x, std::size_t n) {
    assert(n >= 1);
    std::size_t i = 0;
    float m;
    if (n >= 8) {
        typename P::F acc = P::load(x);
        i = 8;
        for (; i + 8 <= n; i += 8) acc = P::min(acc, P::load(x + i));
        m = P::hmin_tree(acc);
    } else {
        m = x[0];
        i = 1;
    }
    for (; i < n; ++i) m = x[i] < m ? x[i] : m;
    return m;
}

} // namespace estsim::kernels::detail
