#pragma once

#include <cstddef>
#include <cstdint>

// Hot per-sample loops of the trace pipeline. Each kernel has a scalar
// reference implementation and (on x86-64) an AVX2 variant selected at
// runtime. The two paths are bit-identical by construction: both are
// instantiations of the same arithmetic expressed over an 8-lane pack
// abstraction, so the ISA choice never changes results, only speed.
// Equivalence is enforced by tests/test_kernels.cpp.
//
// The environment variable ESTSIM_KERNELS=scalar|avx2 overrides dispatch.

namespace estsim::kernels {

enum class Isa { scalar, avx2 };

bool avx2_supported();
Isa active_isa();
void set_isa(Isa isa); // throws if the ISA is unavailable on this machine

// Fills dst with n standard normals from a counter-free 4-lane
// xoshiro256++ stream (Box-Muller). One call per noise stream; the seed
// fully determines the output.
void gaussian_fill(float* dst, std::size_t n, std::uint64_t seed);

// Single-pole low-pass, in place: y[i] = y[i-1] + alpha*(x[i] - y[i-1]).
// Sequential recurrence; scalar on every ISA.
void iir_lowpass(float* x, std::size_t n, float alpha, float y0);

// out[i] = mean(x[i .. i+window)); writes n - window + 1 values.
void moving_average(const float* x, std::size_t n, std::size_t window, float* out);

float min_value(const float* x, std::size_t n);

// Boxcar resampler core: out[j] = mean(x[j*period .. +gate)) -
// mean(x[j*period+sep .. +gate)). Caller sizes out via cds_output_length.
void cds_resample(const float* x, std::size_t n, std::size_t period,
                  std::size_t gate, std::size_t sep, float* out, std::size_t n_out);

std::size_t cds_output_length(std::size_t n, std::size_t period, std::size_t gate,
                              std::size_t sep);

// Direct access to each implementation, for equivalence tests.
namespace scalar {
void gaussian_fill(float* dst, std::size_t n, std::uint64_t seed);
void moving_average(const float* x, std::size_t n, std::size_t window, float* out);
float min_value(const float* x, std::size_t n);
void cds_resample(const float* x, std::size_t n, std::size_t period,
                  std::size_t gate, std::size_t sep, float* out, std::size_t n_out);
} // namespace scalar

namespace avx2 {
// Present only when the project was built with AVX2 support; call
// avx2_supported() before using.
void gaussian_fill(float* dst, std::size_t n, std::uint64_t seed);
void moving_average(const float* x, std::size_t n, std::size_t window, float* out);
float min_value(const float* x, std::size_t n);
void cds_resample(const float* x, std::size_t n, std::size_t period,
                  std::size_t gate, std::size_t sep, float* out, std::size_t n_out);
} // namespace avx2

} // namespace estsim::kernels
