#include "estsim/kernels.hpp"

#include <cassert>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace estsim::kernels {

bool avx2_supported() {
#if defined(ESTSIM_WITH_AVX2) && (defined(__x86_64__) || defined(__i386__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

struct Table {
    void (*gaussian_fill)(float*, std::size_t, std::uint64_t);
    void (*moving_average)(const float*, std::size_t, std::size_t, float*);
    float (*min_value)(const float*, std::size_t);
    void (*cds_resample)(const float*, std::size_t, std::size_t, std::size_t,
                         std::size_t, float*, std::size_t);
    Isa isa;
};

Table make_table(Isa isa) {
#ifdef ESTSIM_WITH_AVX2
    if (isa == Isa::avx2)
        return {&avx2::gaussian_fill, &avx2::moving_average, &avx2::min_value,
                &avx2::cds_resample, Isa::avx2};
#endif
    return {&scalar::gaussian_fill, &scalar::moving_average, &scalar::min_value,
            &scalar::cds_resample, Isa::scalar};
}

Isa initial_isa() {
    if (const char* env = std::getenv("ESTSIM_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
        if (std::strcmp(env, "avx2") == 0 && avx2_supported()) return Isa::avx2;
    }
    return avx2_supported() ? Isa::avx2 : Isa::scalar;
}

Table& table() {
    static Table t = make_table(initial_isa());
    return t;
}

} // namespace

Isa active_isa() { return table().isa; }

void set_isa(Isa isa) {
    if (isa == Isa::avx2 && !avx2_supported())
        throw std::runtime_error("AVX2 kernels unavailable on this machine");
    table() = make_table(isa);
}

void gaussian_fill(float* dst, std::size_t n, std::uint64_t seed) {
    table().gaussian_fill(dst, n, seed);
}

void moving_average(const float* x, std::size_t n, std::size_t window, float* out) {
    table().moving_average(x, n, window, out);
}

float min_value(const float* x, std::size_t n) { return table().min_value(x, n); }

void cds_resample(const float* x, std::size_t n, std::size_t period,
                  std::size_t gate, std::size_t sep, float* out, std::size_t n_out) {
    table().cds_resample(x, n, period, gate, sep, out, n_out);
}

std::size_t cds_output_length(std::size_t n, std::size_t period, std::size_t gate,
                              std::size_t sep) {
    assert(period > 0);
    const std::size_t span = sep + gate;
    if (span > n) return 0;
    return (n - span) / period + 1;
}

void iir_lowpass(float* x, std::size_t n, float alpha, float y0) {
    float y = y0;
    for (std::size_t i = 0; i < n; ++i) {
        y += alpha * (x[i] - y);
        x[i] = y;
    }
}

} // namespace estsim::kernels
