#pragma once

#include "estsim/model.hpp"
#include "estsim/tracegen.hpp"

#include <span>
#include <utility>
#include <vector>

// Detection-electronics emulation: CDS boxcar resampling, event counting,
// direct peak extraction, peak histograms, threshold optimization.

namespace estsim::dsp {

enum class Scheme { cds, direct_peak };

struct CdsConfig {
    double rate_khz = 200.0;
    double gate_width_us = 0.1;
    double gate_baseline_separation_us = 5.0;

    double period_us() const { return 1e3 / rate_khz; }
    void validate() const;
};

struct PeakHistogram {
    std::vector<double> bin_edges;
    std::vector<double> counts_excited;
    std::vector<double> counts_ground;
};

// Pseudo-derivative resampling: out[j] = mean(gate at t_j) - mean(gate at
// t_j + separation). A falling edge between the two windows produces a
// positive peak; constant input maps to zero.
std::vector<float> cds_filter(std::span<const float> samples, double dt_us,
                              const CdsConfig& cds);

inline std::vector<float> cds_filter(const tracegen::Trace& tr, const CdsConfig& cds) {
    return cds_filter(tr.samples, tr.dt_us, cds);
}

// Counts out/in events on a CDS stream with a polarity-alternation rule:
// a positive crossing is counted only while the dot is presumed occupied
// and flips the presumption; a negative crossing only while empty. This
// emulates a hardware discriminator pair tracking charge state and keeps
// repeated same-sign noise peaks from inflating the count.
std::pair<int, int> count_events_cds(std::span<const float> resampled, float threshold_pos,
                                     float threshold_neg);

// Minimum of the 1 us moving-averaged trace (tunnel-out dips the signal
// toward the empty level).
float direct_peak_extract(std::span<const float> samples, double dt_us);

inline float direct_peak_extract(const tracegen::Trace& tr) {
    return direct_peak_extract(tr.samples, tr.dt_us);
}

// Per-trace detection statistic fed to the threshold scan; larger means
// "more tunneling-like" for either scheme.
float cds_peak_statistic(std::span<const float> resampled);
float direct_dip_statistic(std::span<const float> samples, double dt_us,
                           double level_occupied);

PeakHistogram build_peak_histogram(std::span<const double> excited_stats,
                                   std::span<const double> ground_stats,
                                   std::size_t bins = 200);

// Scans thresholds over the bin edges; E_T(v) = fraction of the excited
// class below v, E_N(v) = fraction of the ground class at or above v.
// Returns the argmin of E_T + E_N, ties broken toward smaller E_N.
model::DetectionFidelity optimize_threshold(const PeakHistogram& hist);

struct TunnelTimeFit {
    std::vector<double> centers_us;
    std::vector<double> counts;
    double tau_us = 0.0;
    double amplitude = 0.0;
};

// Histogram of first tunnel-out times with an exponential-decay fit.
TunnelTimeFit tunnel_time_histogram(std::span<const tracegen::Trace> ensemble,
                                    std::size_t bins = 60);
TunnelTimeFit tunnel_time_histogram_from_times(std::span<const double> first_out_times_us,
                                               double meas_window_us,
                                               std::size_t bins = 60);

} // namespace estsim::dsp
