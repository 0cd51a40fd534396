#pragma once

#include "estsim/dsp.hpp"
#include "estsim/fit.hpp"
#include "estsim/model.hpp"
#include "estsim/numerics.hpp"
#include "estsim/tracegen.hpp"

#include <cstdint>
#include <optional>

// Streaming experiment drivers composing tracegen and dsp: detection
// calibration on ideal ensembles, the swept Larmor protocol, and the
// signal-histogram plumbing used for noise matching. Traces are produced,
// analyzed and discarded shot by shot, so ensemble size is bounded only by
// time.

namespace estsim::pipeline {

struct DetectionCalibration {
    dsp::PeakHistogram hist;
    model::DetectionFidelity det;
};

// Ideal ground/excited ensembles (no thermal events, no relaxation) ->
// per-trace detection statistics -> threshold scan.
DetectionCalibration calibrate_detection(const model::ReadoutConfig& cfg,
                                         const tracegen::SignalModel& sig,
                                         const dsp::CdsConfig& cds, dsp::Scheme scheme,
                                         std::size_t traces_per_class,
                                         std::uint64_t seed);

struct LarmorProtocol {
    std::vector<double> evolve_times_ns;
    std::size_t sweeps_per_chain = 2000; // consecutive passes over the time grid
    std::size_t chains = 1;              // independent repeats (fresh start each)
};

struct HistogramSpec {
    std::size_t bins = 300;
    double lo = -1.0;
    double hi = 2.0;
    std::size_t max_traces = 2000; // integrate samples from this many traces
};

// Swept single-shot protocol: within a chain the windows follow each other,
// so a shot whose window had no tunneling event carries its electron into
// the next one (no re-initialization); after an event the next shot is
// freshly initialized. Counting uses the polarity-alternation counter at
// +-threshold (CDS) or the dip statistic against the threshold (direct).
// Optionally accumulates the 1 us-integrated sample histogram of the first
// traces, which stands in for the measured signal histogram.
fit::LarmorDataset larmor_run(const model::ReadoutConfig& cfg,
                              const model::ThermalParams& th,
                              const model::FieldParams& field,
                              const tracegen::SignalModel& sig,
                              const dsp::CdsConfig& cds, dsp::Scheme scheme,
                              double threshold, const LarmorProtocol& protocol,
                              std::uint64_t seed,
                              numerics::Histogram1D* signal_hist = nullptr,
                              const HistogramSpec& hist_spec = {});

// Histogram of 1 us-integrated samples from a fresh ensemble at one
// evolution time (the pi-pulse histogram of the calibration procedure).
numerics::Histogram1D integrated_histogram(const model::ReadoutConfig& cfg,
                                           const model::ThermalParams& th,
                                           const model::FieldParams& field,
                                           const tracegen::SignalModel& sig,
                                           std::size_t shots, double evolve_ns,
                                           std::uint64_t seed,
                                           const HistogramSpec& spec = {});

struct ModeSeparation {
    double mean_low = 0.0;
    double sigma_low = 0.0;
    double mean_high = 0.0;
    double sigma_high = 0.0;
    double separation = 0.0; // |mean gap| / sqrt(sigma_lo^2 + sigma_hi^2)
};

// Locates the two modes of a bimodal histogram and their local widths.
ModeSeparation mode_separation(const numerics::Histogram1D& hist);

// Adjusts the noise amplitude until the simulated integrated histogram's
// occupied-mode width matches the measured one (fixed-point iteration on
// the width ratio).
double match_noise_sigma(const numerics::Histogram1D& measured,
                         const model::ReadoutConfig& cfg,
                         const model::ThermalParams& th,
                         const model::FieldParams& field,
                         const tracegen::SignalModel& sig0, std::size_t shots,
                         double evolve_ns, std::uint64_t seed);

} // namespace estsim::pipeline
