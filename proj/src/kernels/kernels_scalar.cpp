#include "estsim/kernels.hpp"

#include "kernel_impl.hpp"
#include "pack_scalar.hpp"

namespace estsim::kernels::scalar {

using detail::ScalarPack;

void gaussian_fill(float* dst, std::size_t n, std::uint64_t seed) {
    detail::gaussian_fill_impl<ScalarPack>(dst, n, seed);
}

void moving_average(const float* x, std::size_t n, std::size_t window, float* out) {
    detail::moving_average_impl<ScalarPack>(x, n, window, out);
}

float min_value(const float* x, std::size_t n) {
    return detail::min_value_impl<ScalarPack>(x, n);
}

void cds_resample(const float* x, std::size_t n, std::size_t period,
                  std::size_t gate, std::size_t sep, float* out, std::size_t n_out) {
    detail::cds_resample_impl<ScalarPack>(x, n, period, gate, sep, out, n_out);
}

} // namespace estsim::kernels::scalar
