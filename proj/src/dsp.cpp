#include "estsim/dsp.hpp"

#include "estsim/kernels.hpp"
#include "estsim/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace estsim::dsp {

void CdsConfig::validate() const {
    if (rate_khz <= 0) throw std::invalid_argument("cds rate must be positive");
    if (gate_width_us <= 0) throw std::invalid_argument("cds gate width must be positive");
    if (gate_width_us >= period_us())
        throw std::invalid_argument("cds gate width must be below one period");
    if (gate_baseline_separation_us <= 0 || gate_baseline_separation_us > period_us())
        throw std::invalid_argument("cds separation must be in (0, period]");
}

std::vector<float> cds_filter(std::span<const float> samples, double dt_us,
                              const CdsConfig& cds) {
    cds.validate();
    const auto period_n =
        static_cast<std::size_t>(std::llround(cds.period_us() / dt_us));
    const auto sep_n = static_cast<std::size_t>(
        std::llround(cds.gate_baseline_separation_us / dt_us));
    const auto gate_n = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(cds.gate_width_us / dt_us)));
    if (period_n == 0 || sep_n == 0)
        throw std::invalid_argument("cds timing below one sample");
    const std::size_t n_out =
        kernels::cds_output_length(samples.size(), period_n, gate_n, sep_n);
    if (n_out == 0) throw std::invalid_argument("trace shorter than one cds period");
    std::vector<float> out(n_out);
    kernels::cds_resample(samples.data(), samples.size(), period_n, gate_n, sep_n,
                          out.data(), n_out);
    return out;
}

std::pair<int, int> count_events_cds(std::span<const float> resampled, float threshold_pos,
                                     float threshold_neg) {
    if (!std::isfinite(threshold_pos) || !std::isfinite(threshold_neg))
        throw std::invalid_argument("thresholds must be finite");
    int out_count = 0, in_count = 0;
    bool occupied = true;
    for (float v : resampled) {
        if (occupied && v > threshold_pos) {
            ++out_count;
            occupied = false;
        } else if (!occupied && v < threshold_neg) {
            ++in_count;
            occupied = true;
        }
    }
    return {out_count, in_count};
}

namespace {

std::size_t ma_window(double dt_us, std::size_t n) {
    auto w = static_cast<std::size_t>(std::llround(1.0 / dt_us)); // 1 us integration
    w = std::max<std::size_t>(1, w);
    return std::min(w, n);
}

} // namespace

float direct_peak_extract(std::span<const float> samples, double dt_us) {
    if (samples.empty()) throw std::invalid_argument("empty trace");
    const std::size_t w = ma_window(dt_us, samples.size());
    static thread_local std::vector<float> ma;
    ma.resize(samples.size() - w + 1);
    kernels::moving_average(samples.data(), samples.size(), w, ma.data());
    return kernels::min_value(ma.data(), ma.size());
}

float cds_peak_statistic(std::span<const float> resampled) {
    if (resampled.empty()) throw std::invalid_argument("empty cds stream");
    float m = resampled[0];
    for (float v : resampled) m = std::max(m, v);
    return m;
}

float direct_dip_statistic(std::span<const float> samples, double dt_us,
                           double level_occupied) {
    return static_cast<float>(level_occupied) - direct_peak_extract(samples, dt_us);
}

PeakHistogram build_peak_histogram(std::span<const double> excited_stats,
                                   std::span<const double> ground_stats,
                                   std::size_t bins) {
    if (excited_stats.empty() || ground_stats.empty())
        throw std::invalid_argument("both classes must be populated");
    double lo = excited_stats[0], hi = excited_stats[0];
    for (double v : excited_stats) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (double v : ground_stats) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const auto he = numerics::make_histogram(excited_stats, bins, lo, hi);
    const auto hg = numerics::make_histogram(ground_stats, bins, lo, hi);
    PeakHistogram h;
    h.bin_edges = he.edges;
    h.counts_excited = he.counts;
    h.counts_ground = hg.counts;
    return h;
}

model::DetectionFidelity optimize_threshold(const PeakHistogram& hist) {
    const std::size_t bins = hist.counts_excited.size();
    if (bins == 0 || hist.counts_ground.size() != bins ||
        hist.bin_edges.size() != bins + 1)
        throw std::invalid_argument("malformed peak histogram");
    double n_exc = 0.0, n_gnd = 0.0;
    for (double c : hist.counts_excited) n_exc += c;
    for (double c : hist.counts_ground) n_gnd += c;
    if (n_exc <= 0.0 || n_gnd <= 0.0)
        throw std::invalid_argument("both classes must be populated");

    // Threshold at edge k: detected iff statistic >= edge. Walking k upward,
    // E_T accumulates excited mass below, E_N loses ground mass.
    model::DetectionFidelity best;
    double best_total = std::numeric_limits<double>::infinity();
    double below_exc = 0.0, below_gnd = 0.0;
    for (std::size_t k = 0; k <= bins; ++k) {
        const double e_t = below_exc / n_exc;
        const double e_n = (n_gnd - below_gnd) / n_gnd;
        const double total = e_t + e_n;
        if (total < best_total - 1e-15 ||
            (std::abs(total - best_total) <= 1e-15 && e_n < best.e_n)) {
            best_total = total;
            best = {e_t, e_n, hist.bin_edges[k]};
        }
        if (k < bins) {
            below_exc += hist.counts_excited[k];
            below_gnd += hist.counts_ground[k];
        }
    }
    return best;
}

TunnelTimeFit tunnel_time_histogram_from_times(std::span<const double> first_out_times_us,
                                               double meas_window_us, std::size_t bins) {
    if (first_out_times_us.size() < 100)
        throw std::invalid_argument("need at least 100 tunneling events");
    double m = 0.0;
    for (double t : first_out_times_us) m += t;
    m /= static_cast<double>(first_out_times_us.size());
    const double hi = std::min(meas_window_us, 6.0 * m);
    const auto h = numerics::make_histogram(first_out_times_us, bins, 0.0, hi);
    TunnelTimeFit fit;
    fit.centers_us.resize(h.bins());
    for (std::size_t i = 0; i < h.bins(); ++i) fit.centers_us[i] = h.center(i);
    fit.counts = h.counts;
    const auto ef = numerics::fit_exponential(fit.centers_us, fit.counts, m);
    fit.tau_us = ef.tau;
    fit.amplitude = ef.amplitude;
    return fit;
}

TunnelTimeFit tunnel_time_histogram(std::span<const tracegen::Trace> ensemble,
                                    std::size_t bins) {
    std::vector<double> times;
    double window = 0.0;
    for (const auto& tr : ensemble) {
        window = std::max(window, tr.dt_us * static_cast<double>(tr.samples.size()));
        if (tr.meta && tr.meta->has_out_event())
            times.push_back(tr.meta->events.front().time_us);
    }
    if (times.empty()) throw std::invalid_argument("no tunneling events in ensemble");
    return tunnel_time_histogram_from_times(times, window, bins);
}

} // namespace estsim::dsp
