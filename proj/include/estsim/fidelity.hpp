#pragma once

#include "estsim/dsp.hpp"
#include "estsim/model.hpp"

#include <cstdint>
#include <utility>

// Measurement-fidelity bookkeeping: ground/excited misclassification
// probabilities assembled from the thermal parameters, the relaxation
// survival fraction and the detection errors.

namespace estsim::fidelity {

struct FidelityReport {
    double r_s = 0.0;        // ground-state misclassification probability
    double r_t0 = 0.0;       // excited-state misclassification probability
    double f_meas = 0.0;     // 1 - (r_s + r_t0)/2
    double visibility = 0.0; // 1 - r_s - r_t0
    dsp::Scheme scheme = dsp::Scheme::cds;
};

// Ground-state infidelity: false counts plus detected false tunnelings,
// including double-tunneling paths.
double singlet_infidelity(const model::ThermalParams& th,
                          const model::DetectionFidelity& det);

// Excited-state infidelity: relaxation before tunneling plus missed
// detections of the tunneling (and of the double event).
double triplet_infidelity(double r, double r_s, const model::ThermalParams& th,
                          const model::DetectionFidelity& det);

FidelityReport total_fidelity(double r_s, double r_t0,
                              dsp::Scheme scheme = dsp::Scheme::cds);

// Runs the detection-calibration pipeline once per scheme with identical
// dwell/relaxation/thermal parameters and reports the resulting closed-form
// fidelity of each.
std::pair<FidelityReport, FidelityReport> compare_detection_schemes(
    const model::ReadoutConfig& cfg, const model::ThermalParams& th,
    const tracegen::SignalModel& sig, const dsp::CdsConfig& cds,
    std::size_t traces_per_class, std::uint64_t seed);

} // namespace estsim::fidelity
