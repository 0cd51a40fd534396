#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace estsim::numerics {

// Bounded derivative-free simplex minimizer (Nelder-Mead with box
// projection and deterministic shrink-restarts).
struct SimplexOptions {
    int max_evals = 6000;
    double f_tol = 1e-14;
    double x_tol = 1e-11;
    int restarts = 3;
};

struct SimplexResult {
    std::vector<double> x;
    double fval = 0.0;
    int evals = 0;
    bool converged = false;
};

SimplexResult minimize_simplex(const std::function<double(std::span<const double>)>& f,
                               std::span<const double> x0, std::span<const double> step,
                               std::span<const double> lo, std::span<const double> hi,
                               const SimplexOptions& opts = {});

struct Histogram1D {
    std::vector<double> edges;  // size bins + 1
    std::vector<double> counts; // size bins

    std::size_t bins() const { return counts.size(); }
    double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
};

Histogram1D make_histogram(std::span<const double> values, std::size_t bins, double lo,
                           double hi);
Histogram1D make_histogram(std::span<const float> values, std::size_t bins, double lo,
                           double hi);

// Least-squares A*exp(-t/tau) fit to histogram counts.
struct ExponentialFit {
    double tau = 0.0;
    double amplitude = 0.0;
    bool converged = false;
};
ExponentialFit fit_exponential(std::span<const double> centers,
                               std::span<const double> counts, double tau0);

// argmax_f |sum_j (y_j - mean) exp(-2 pi i f t_j)| on a uniform frequency
// grid; times in ns, frequencies in MHz.
double dft_peak_frequency_mhz(std::span<const double> times_ns,
                              std::span<const double> values, double f_lo_mhz,
                              double f_hi_mhz, std::size_t n_grid = 4000);

// Fit y(t) = offset + amp * (1 - exp(-(t/T)^2) cos(2 pi f t)) — the
// dephasing-envelope shape of a field-averaged oscillation.
struct EnvelopeFit {
    double amplitude = 0.0;
    double offset = 0.0;
    double t2_star_ns = 0.0;
    double freq_mhz = 0.0;
    double residual = 0.0;
    bool converged = false;
};
EnvelopeFit fit_oscillation_envelope(std::span<const double> times_ns,
                                     std::span<const double> values,
                                     double freq_hint_mhz);

// Two-sided Kolmogorov-Smirnov asymptotic p-value for statistic d at
// sample size n.
double ks_pvalue(double d, std::size_t n);

// KS distance between sorted samples and a CDF.
double ks_statistic(std::span<const double> sorted_samples,
                    const std::function<double(double)>& cdf);

double mean(std::span<const double> xs);
double variance(std::span<const double> xs); // unbiased

} // namespace estsim::numerics
