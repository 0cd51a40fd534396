#if defined(__AVX2__) && defined(__FMA__)

#include "estsim/kernels.hpp"

#include "kernel_impl.hpp"
#include "pack_avx2.hpp"

namespace estsim::kernels::avx2 {

using detail::AvxPack;

void gaussian_fill(float* dst, std::size_t n, std::uint64_t seed) {
    detail::gaussian_fill_impl<AvxPack>(dst, n, seed);
}

void moving_average(const float* x, std::size_t n, std::size_t window, float* out) {
    detail::moving_average_impl<AvxPack>(x, n, window, out);
}

float min_value(const float* x, std::size_t n) {
    return detail::min_value_impl<AvxPack>(x, n);
}

void cds_resample(const float* x, std::size_t n, std::size_t period,
                  std::size_t gate, std::size_t sep, float* out, std::size_t n_out) {
    detail::cds_resample_impl<AvxPack>(x, n, period, gate, sep, out, n_out);
}

} // namespace estsim::kernels::avx2

#endif
