#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

// Closed-form probability model of energy-selective-tunneling readout:
// relaxation survival within the measurement window, the ideal Larmor
// probability, the shot-to-shot detection recursion, the expected counter
// reading, and Gaussian field-fluctuation averaging. All functions are
// pure; everything downstream (fitting, fidelity) is built on top.

namespace estsim::model {

struct ReadoutConfig {
    double tau_out_us = 16.0;     // excited-state tunnel-out mean dwell
    double tau_in_us = 117.0;     // refill (tunnel-in) mean dwell
    double t1_us = 337.0;         // excited-state relaxation time (may be +inf)
    double meas_window_us = 150.0;
    double sample_rate_mhz = 14.0;
    double cds_rate_khz = 200.0;
    double cds_gate_width_us = 0.1;

    std::size_t samples_per_window() const;
    void validate() const; // throws std::invalid_argument
};

struct ThermalParams {
    double alpha1 = 0.0; // ground-state false tunnel-out probability per window
    double alpha2 = 0.0; // double-tunneling probability of a reinitialized ground state
    double beta = 0.0;   // false-initialization probability

    // Total double-tunneling probability.
    double p2() const { return beta + (1.0 - beta) * alpha2; }
    void validate() const;
};

struct FieldParams {
    double delta_b_mhz = 500.0; // longitudinal field difference, as a frequency
    double sigma_mhz = 0.0;     // std dev of its shot-to-shot Gaussian spread

    void validate() const;
};

struct DetectionFidelity {
    double e_t = 0.0;      // P(miss a real tunneling peak) = 1 - T_T
    double e_n = 0.0;      // P(false count on a quiet window) = 1 - T_N
    double threshold = 0.0;
};

// Probability that an excited state produces a tunnel-out event inside the
// window, i.e. tunneling wins against both relaxation and the window end:
// r = integral_0^M exp(-t/T1) exp(-t/tau_out) dt / tau_out.
double survival_fraction(const ReadoutConfig& cfg);

// Ideal excited-state probability after evolving for t under field
// difference delta_b: sin^2(pi * delta_b * t).
double ideal_t0_probability(double t_ns, double delta_b_mhz);

// Per-shot branch factors of the detection recursion. `after_event` applies
// when the previous window produced a tunneling event (the electron was
// re-initialized, possibly falsely); `after_no_event` when it did not (the
// same ground-state electron is evolved again).
struct RecursionBranches {
    double after_event;
    double after_no_event;
};
RecursionBranches recursion_branches(double f, double r, const ThermalParams& th);

// P(>=1 tunneling event in window j) along a sweep of evolution times,
// starting from the post-initialization branch (P = 1 before the first
// shot). Times must be sorted ascending.
std::vector<double> detection_prob_recursion(std::span<const double> times_ns,
                                             const ReadoutConfig& cfg,
                                             const ThermalParams& th,
                                             double delta_b_mhz);

// Same recursion evaluated on the periodic steady state of the sweep cycle
// (one warm-up pass discarded). Matches data averaged over many repeated
// sweeps, where the initial transient is invisible.
std::vector<double> detection_prob_steady(std::span<const double> times_ns,
                                          const ReadoutConfig& cfg,
                                          const ThermalParams& th,
                                          double delta_b_mhz);

// Mean number of counted tunneling events per window:
// A = P (1 + P2) T_T + (1 - P)(1 - T_N). A mean count, not a probability.
double expected_counts(double p, const ThermalParams& th, const DetectionFidelity& det);

// Gaussian-weighted average of a curve family over the field distribution:
// 201-point grid spanning +-5 sigma, weights renormalized to sum to one.
// sigma = 0 returns the central curve exactly.
std::vector<double> gaussian_average(const std::function<double(double t, double b)>& curve,
                                     double delta_b_mhz, double sigma_mhz,
                                     std::span<const double> times_ns);

// Vectorized form: `family(b, out)` writes the curve at field b for all
// times; used by the fitter where the recursion couples the whole sweep.
std::vector<double> gaussian_average_family(
    const std::function<void(double b, std::span<double> out)>& family,
    double delta_b_mhz, double sigma_mhz, std::size_t n_times);

// Full model of the measured Larmor curve: recursion (steady or single
// pass), count model, and Gaussian field averaging.
std::vector<double> larmor_model_curve(std::span<const double> times_ns,
                                       const ReadoutConfig& cfg,
                                       const ThermalParams& th,
                                       const DetectionFidelity& det,
                                       const FieldParams& field,
                                       bool steady = true);

inline constexpr std::size_t kGaussGridPoints = 201;

} // namespace estsim::model
