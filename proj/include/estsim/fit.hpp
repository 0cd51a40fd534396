#pragma once

#include "estsim/dsp.hpp"
#include "estsim/model.hpp"
#include "estsim/numerics.hpp"
#include "estsim/tracegen.hpp"

#include <cstdint>
#include <span>
#include <vector>

// Parameter estimation: least-squares Larmor-curve fitting against the
// closed-form model, the iterative detection/noise calibration loop, and
// the Fermi-Dirac-derivative thermometry / tunnel-coupling fit.

namespace estsim::fit {

struct LarmorDataset {
    std::vector<double> evolve_times_ns;
    std::vector<double> mean_counts;   // counted tunnel-out events per shot
    std::vector<double> stderr_counts; // standard error of each mean
    std::size_t shots_per_point = 0;

    void validate() const;
};

struct LarmorFit {
    model::ThermalParams thermal;
    double sigma_mhz = 0.0;
    double delta_b_mhz = 0.0;
    double residual = 0.0;   // sum of squared deviations at the optimum
    double t2_star_ns = 0.0; // 1/(sqrt(2) pi sigma), derived
    bool converged = false;
    int evals = 0;
};

// Least-squares fit of the field-averaged count model to measured mean
// counts, over (alpha1, alpha2, beta, sigma, delta_b) with the detection
// errors held fixed. Bounded simplex search from a deterministic grid of
// starts; the field-frequency start comes from the periodogram peak of the
// data. Returns the best of all starts; `converged = false` carries the
// best iterate when the evaluation budget ran out.
LarmorFit fit_larmor(const LarmorDataset& data, const model::ReadoutConfig& cfg,
                     const model::DetectionFidelity& det,
                     const LarmorFit* init = nullptr);

struct CalibrationResult {
    LarmorFit fit;
    model::DetectionFidelity det;
    double noise_sigma = 0.0;
    std::vector<double> f_meas_history; // one entry per outer iteration
    int iterations = 0;
    bool converged = false;
};

struct CalibrationOptions {
    std::size_t traces_per_class = 15000; // ideal traces for threshold calibration
    std::size_t histogram_shots = 2000;   // shots per noise-matching histogram
    double pi_pulse_ns = 1.0;
    int max_iterations = 20;
    double f_meas_tol = 1e-3;
};

// The full calibration loop: fit the Larmor curve with the current
// detection errors, match the simulated signal histogram to the measured
// one by adjusting the noise amplitude, regenerate ideal traces and
// recompute the detection errors at the optimal threshold, refit; stop when
// the total measurement fidelity moves less than f_meas_tol.
// `converged = false` carries the best iterate and the fidelity history.
CalibrationResult calibrate_iteratively(const LarmorDataset& data,
                                        const numerics::Histogram1D& measured_hist,
                                        const model::ReadoutConfig& cfg,
                                        const dsp::CdsConfig& cds, dsp::Scheme scheme,
                                        const tracegen::SignalModel& sig_init,
                                        std::uint64_t seed,
                                        const CalibrationOptions& opts = {});

enum class BroadeningMode { temperature, coupling };

struct ThermalFitParams {
    double a_offset = 0.0;
    double amplitude = 0.0;
    double lever_arm = 0.0; // eV per volt, fixed input
    double v_offset = 0.0;
    double width_ev = 0.0; // k_B T_e or 2 t_c
    BroadeningMode mode = BroadeningMode::temperature;

    double temperature_mk() const;
    double coupling_ghz() const; // 2 t_c / h
};

// Least-squares fit of a Fermi-Dirac-derivative line shape
// A_offset - (A a / w) e^{a(V-V0)/w} / (1 + e^{a(V-V0)/w})^2
// to a (gate voltage, demodulated-signal derivative) sweep.
ThermalFitParams fit_fermi_dirac(std::span<const double> v1, std::span<const double> dv,
                                 BroadeningMode mode, double lever_arm);

} // namespace estsim::fit
