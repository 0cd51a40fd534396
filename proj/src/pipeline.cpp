#include "estsim/pipeline.hpp"

#include "estsim/kernels.hpp"
#include "estsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace estsim::pipeline {

namespace {

// Per-trace detection statistic for either scheme, on a reused buffer.
struct StatExtractor {
    const model::ReadoutConfig& cfg;
    const tracegen::SignalModel& sig;
    const dsp::CdsConfig& cds;
    dsp::Scheme scheme;
    double dt_us;

    double operator()(std::span<const float> samples) const {
        if (scheme == dsp::Scheme::cds) {
            const auto out = dsp::cds_filter(samples, dt_us, cds);
            return dsp::cds_peak_statistic(out);
        }
        return dsp::direct_dip_statistic(samples, dt_us, sig.level_occupied);
    }
};

} // namespace

DetectionCalibration calibrate_detection(const model::ReadoutConfig& cfg,
                                         const tracegen::SignalModel& sig,
                                         const dsp::CdsConfig& cds, dsp::Scheme scheme,
                                         std::size_t traces_per_class,
                                         std::uint64_t seed) {
    if (traces_per_class == 0) throw std::invalid_argument("empty calibration class");
    model::ReadoutConfig ideal_cfg = cfg;
    ideal_cfg.t1_us = std::numeric_limits<double>::infinity();
    const model::ThermalParams no_thermal{};

    const StatExtractor stat{cfg, sig, cds, scheme, 1.0 / cfg.sample_rate_mhz};
    std::vector<float> buf(cfg.samples_per_window());
    std::vector<double> exc(traces_per_class), gnd(traces_per_class);
    for (std::size_t i = 0; i < traces_per_class; ++i) {
        auto rec = tracegen::sample_shot_events(
            tracegen::Prep::forced_t0(), rng::derive_seed(seed, rng::Stream::shot_events, i),
            ideal_cfg, no_thermal, 0.0, 0.0);
        tracegen::synthesize_trace_into(rec, sig, cfg,
                                        rng::derive_seed(seed, rng::Stream::trace_noise, i),
                                        buf);
        exc[i] = stat(buf);

        auto rec_g = tracegen::sample_shot_events(
            tracegen::Prep::forced_s(),
            rng::derive_seed(seed, rng::Stream::shot_events, traces_per_class + i),
            ideal_cfg, no_thermal, 0.0, 0.0);
        tracegen::synthesize_trace_into(
            rec_g, sig, cfg,
            rng::derive_seed(seed, rng::Stream::trace_noise, traces_per_class + i), buf);
        gnd[i] = stat(buf);
    }

    DetectionCalibration cal;
    cal.hist = dsp::build_peak_histogram(exc, gnd);
    cal.det = dsp::optimize_threshold(cal.hist);
    return cal;
}

namespace {

void accumulate_ma_samples(std::span<const float> samples, double dt_us,
                           numerics::Histogram1D& hist) {
    const auto w = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(1.0 / dt_us)));
    if (samples.size() < w) return;
    static thread_local std::vector<float> ma;
    ma.resize(samples.size() - w + 1);
    kernels::moving_average(samples.data(), samples.size(), w, ma.data());
    const double lo = hist.edges.front();
    const double width = hist.edges[1] - hist.edges[0];
    const auto bins = hist.counts.size();
    for (float v : ma) {
        auto k = static_cast<long>(std::floor((static_cast<double>(v) - lo) / width));
        k = std::clamp<long>(k, 0, static_cast<long>(bins) - 1);
        hist.counts[static_cast<std::size_t>(k)] += 1.0;
    }
}

numerics::Histogram1D empty_hist(const HistogramSpec& spec) {
    numerics::Histogram1D h;
    h.edges.resize(spec.bins + 1);
    h.counts.assign(spec.bins, 0.0);
    const double w = (spec.hi - spec.lo) / static_cast<double>(spec.bins);
    for (std::size_t i = 0; i <= spec.bins; ++i)
        h.edges[i] = spec.lo + w * static_cast<double>(i);
    return h;
}

} // namespace

fit::LarmorDataset larmor_run(const model::ReadoutConfig& cfg,
                              const model::ThermalParams& th,
                              const model::FieldParams& field,
                              const tracegen::SignalModel& sig,
                              const dsp::CdsConfig& cds, dsp::Scheme scheme,
                              double threshold, const LarmorProtocol& protocol,
                              std::uint64_t seed, numerics::Histogram1D* signal_hist,
                              const HistogramSpec& hist_spec) {
    const auto& times = protocol.evolve_times_ns;
    if (times.empty() || protocol.sweeps_per_chain == 0 || protocol.chains == 0)
        throw std::invalid_argument("empty protocol");

    if (signal_hist) *signal_hist = empty_hist(hist_spec);
    std::size_t hist_traces = 0;

    const double dt_us = 1.0 / cfg.sample_rate_mhz;
    std::vector<float> buf(cfg.samples_per_window());
    std::vector<double> sum(times.size(), 0.0), sum_sq(times.size(), 0.0);

    const auto thr = static_cast<float>(threshold);
    std::size_t shot_index = 0;
    for (std::size_t chain = 0; chain < protocol.chains; ++chain) {
        auto prep = tracegen::Prep::fresh();
        for (std::size_t sweep = 0; sweep < protocol.sweeps_per_chain; ++sweep) {
            for (std::size_t j = 0; j < times.size(); ++j, ++shot_index) {
                const double b = tracegen::draw_field_mhz(
                    field, rng::derive_seed(seed, rng::Stream::field_draw, shot_index));
                const auto rec = tracegen::sample_shot_events(
                    prep, rng::derive_seed(seed, rng::Stream::shot_events, shot_index),
                    cfg, th, b, times[j]);
                tracegen::synthesize_trace_into(
                    rec, sig, cfg,
                    rng::derive_seed(seed, rng::Stream::trace_noise, shot_index), buf);

                double counts = 0.0;
                if (scheme == dsp::Scheme::cds) {
                    const auto out = dsp::cds_filter(buf, dt_us, cds);
                    counts = dsp::count_events_cds(out, thr, -thr).first;
                } else {
                    counts =
                        dsp::direct_dip_statistic(buf, dt_us, sig.level_occupied) >= thr
                            ? 1.0
                            : 0.0;
                }
                sum[j] += counts;
                sum_sq[j] += counts * counts;

                if (signal_hist && hist_traces < hist_spec.max_traces) {
                    accumulate_ma_samples(buf, dt_us, *signal_hist);
                    ++hist_traces;
                }
                prep = rec.has_out_event()
                           ? tracegen::Prep::fresh()
                           : tracegen::Prep::carried(rec.end_state);
            }
        }
    }

    fit::LarmorDataset data;
    data.evolve_times_ns = times;
    const auto n = static_cast<double>(protocol.sweeps_per_chain * protocol.chains);
    data.shots_per_point = protocol.sweeps_per_chain * protocol.chains;
    data.mean_counts.resize(times.size());
    data.stderr_counts.resize(times.size());
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double m = sum[j] / n;
        data.mean_counts[j] = m;
        const double var = std::max(0.0, sum_sq[j] / n - m * m);
        data.stderr_counts[j] = std::sqrt(var / n);
    }
    return data;
}

numerics::Histogram1D integrated_histogram(const model::ReadoutConfig& cfg,
                                           const model::ThermalParams& th,
                                           const model::FieldParams& field,
                                           const tracegen::SignalModel& sig,
                                           std::size_t shots, double evolve_ns,
                                           std::uint64_t seed, const HistogramSpec& spec) {
    auto hist = empty_hist(spec);
    std::vector<float> buf(cfg.samples_per_window());
    for (std::size_t i = 0; i < shots; ++i) {
        const double b = tracegen::draw_field_mhz(
            field, rng::derive_seed(seed, rng::Stream::field_draw, i));
        const auto rec = tracegen::sample_shot_events(
            tracegen::Prep::fresh(), rng::derive_seed(seed, rng::Stream::shot_events, i),
            cfg, th, b, evolve_ns);
        tracegen::synthesize_trace_into(
            rec, sig, cfg, rng::derive_seed(seed, rng::Stream::trace_noise, i), buf);
        accumulate_ma_samples(buf, 1.0 / cfg.sample_rate_mhz, hist);
    }
    return hist;
}

ModeSeparation mode_separation(const numerics::Histogram1D& hist) {
    const auto bins = hist.counts.size();
    if (bins < 8) throw std::invalid_argument("histogram too coarse");
    std::vector<double> smooth(bins, 0.0);
    for (std::size_t i = 0; i < bins; ++i) {
        double s = hist.counts[i], n = 1.0;
        if (i > 0) { s += hist.counts[i - 1]; n += 1.0; }
        if (i + 1 < bins) { s += hist.counts[i + 1]; n += 1.0; }
        smooth[i] = s / n;
    }
    const auto peak1 =
        static_cast<std::size_t>(std::distance(smooth.begin(),
                                               std::max_element(smooth.begin(), smooth.end())));
    const long guard = std::max<long>(2, static_cast<long>(bins) / 5);
    double best = -1.0;
    std::size_t peak2 = peak1;
    for (std::size_t i = 0; i < bins; ++i) {
        if (std::llabs(static_cast<long>(i) - static_cast<long>(peak1)) <= guard) continue;
        if (smooth[i] > best) {
            best = smooth[i];
            peak2 = i;
        }
    }
    if (peak2 == peak1) throw std::runtime_error("histogram is not bimodal");

    const auto moments = [&](std::size_t center, long half) {
        double w = 0.0, m1 = 0.0, m2 = 0.0;
        for (long k = static_cast<long>(center) - half;
             k <= static_cast<long>(center) + half; ++k) {
            if (k < 0 || k >= static_cast<long>(bins)) continue;
            const double c = hist.counts[static_cast<std::size_t>(k)];
            const double x = hist.center(static_cast<std::size_t>(k));
            w += c;
            m1 += c * x;
            m2 += c * x * x;
        }
        if (w <= 0.0) throw std::runtime_error("empty histogram mode");
        m1 /= w;
        return std::pair{m1, std::sqrt(std::max(0.0, m2 / w - m1 * m1))};
    };

    const long half =
        std::max<long>(2, std::llabs(static_cast<long>(peak2) - static_cast<long>(peak1)) / 4);
    auto [ma, sa] = moments(peak1, half);
    auto [mb, sb] = moments(peak2, half);
    ModeSeparation sep;
    if (ma <= mb) {
        sep = {ma, sa, mb, sb, 0.0};
    } else {
        sep = {mb, sb, ma, sa, 0.0};
    }
    sep.separation = (sep.mean_high - sep.mean_low) /
                     std::sqrt(sep.sigma_low * sep.sigma_low + sep.sigma_high * sep.sigma_high);
    return sep;
}

double match_noise_sigma(const numerics::Histogram1D& measured,
                         const model::ReadoutConfig& cfg, const model::ThermalParams& th,
                         const model::FieldParams& field,
                         const tracegen::SignalModel& sig0, std::size_t shots,
                         double evolve_ns, std::uint64_t seed) {
    const auto target = mode_separation(measured);
    tracegen::SignalModel sig = sig0;
    if (sig.noise_sigma <= 0.0) sig.noise_sigma = 0.1;
    for (int it = 0; it < 4; ++it) {
        const auto h = integrated_histogram(cfg, th, field, sig, shots, evolve_ns,
                                            rng::derive_seed(seed, rng::Stream::aux, it));
        const auto got = mode_separation(h);
        const double ratio = target.sigma_high / std::max(1e-9, got.sigma_high);
        sig.noise_sigma *= ratio;
        if (std::abs(ratio - 1.0) < 0.01) break;
    }
    return sig.noise_sigma;
}

} // namespace estsim::pipeline
