#include "estsim/fit.hpp"

#include "estsim/fidelity.hpp"
#include "estsim/pipeline.hpp"
#include "estsim/rng.hpp"
#include "estsim/units.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace estsim::fit {

void LarmorDataset::validate() const {
    if (evolve_times_ns.size() != mean_counts.size() || evolve_times_ns.size() < 6)
        throw std::invalid_argument("larmor dataset needs >= 6 matching points");
    if (!std::is_sorted(evolve_times_ns.begin(), evolve_times_ns.end()))
        throw std::invalid_argument("evolution times must be sorted");
    if (shots_per_point < 1) throw std::invalid_argument("shots_per_point must be >= 1");
}

namespace {

constexpr double kLoBound[5] = {0.0, 0.0, 0.0, 0.05, 1.0};     // a1 a2 beta sigma dB
constexpr double kHiBound[5] = {0.5, 0.5, 0.6, 80.0, 5000.0};

double objective(std::span<const double> p, const LarmorDataset& data,
                 const model::ReadoutConfig& cfg, const model::DetectionFidelity& det) {
    model::ThermalParams th{p[0], p[1], p[2]};
    model::FieldParams field{p[4], p[3]};
    const auto curve =
        model::larmor_model_curve(data.evolve_times_ns, cfg, th, det, field, true);
    double ss = 0.0;
    for (std::size_t j = 0; j < curve.size(); ++j) {
        const double d = curve[j] - data.mean_counts[j];
        ss += d * d;
    }
    return ss;
}

} // namespace

LarmorFit fit_larmor(const LarmorDataset& data, const model::ReadoutConfig& cfg,
                     const model::DetectionFidelity& det, const LarmorFit* init) {
    data.validate();
    cfg.validate();

    // Frequency start from the periodogram peak; prevents period aliasing.
    const double span_ns = data.evolve_times_ns.back() - data.evolve_times_ns.front();
    const double f_lo = std::max(1.0, 0.5 * 1e3 / span_ns); // resolve >= half a period
    const double f_hi = 2000.0;
    const double f0 = numerics::dft_peak_frequency_mhz(data.evolve_times_ns,
                                                       data.mean_counts, f_lo, f_hi);
    if (span_ns * f0 * 1e-3 < 2.0)
        throw std::invalid_argument("data must span at least two oscillation periods");

    std::vector<std::array<double, 5>> starts;
    for (double beta0 : {0.0, 0.1})
        for (double sigma0 : {5.0, 20.0})
            for (double a0 : {0.02, 0.10})
                starts.push_back({a0, a0, beta0, sigma0, f0});
    if (init && init->delta_b_mhz > 0.0)
        starts.push_back({init->thermal.alpha1, init->thermal.alpha2, init->thermal.beta,
                          std::max(0.1, init->sigma_mhz), init->delta_b_mhz});

    auto obj = [&](std::span<const double> p) { return objective(p, data, cfg, det); };

    LarmorFit best;
    best.residual = std::numeric_limits<double>::infinity();
    int evals = 0;
    bool all_converged = true;
    for (const auto& s : starts) {
        const double step[5] = {0.03, 0.03, 0.04, 3.0, 0.01 * f0};
        numerics::SimplexOptions opts;
        opts.max_evals = 4000;
        const auto r = numerics::minimize_simplex(obj, s, step, kLoBound, kHiBound, opts);
        evals += r.evals;
        all_converged = all_converged && r.converged;
        if (r.fval < best.residual) {
            best.residual = r.fval;
            best.thermal = {r.x[0], r.x[1], r.x[2]};
            best.sigma_mhz = r.x[3];
            best.delta_b_mhz = r.x[4];
        }
    }
    best.t2_star_ns = units::t2_star_ns(best.sigma_mhz);
    best.evals = evals;
    best.converged = all_converged;
    return best;
}

CalibrationResult calibrate_iteratively(const LarmorDataset& data,
                                        const numerics::Histogram1D& measured_hist,
                                        const model::ReadoutConfig& cfg,
                                        const dsp::CdsConfig& cds, dsp::Scheme scheme,
                                        const tracegen::SignalModel& sig_init,
                                        std::uint64_t seed,
                                        const CalibrationOptions& opts) {
    CalibrationResult res;
    tracegen::SignalModel sig = sig_init;
    res.noise_sigma = sig.noise_sigma;
    res.det = pipeline::calibrate_detection(cfg, sig, cds, scheme, opts.traces_per_class,
                                            rng::derive_seed(seed, rng::Stream::aux, 100))
                  .det;
    const double r = model::survival_fraction(cfg);

    double prev_f = -1.0;
    for (int it = 0; it < opts.max_iterations; ++it) {
        res.iterations = it + 1;
        res.fit = fit_larmor(data, cfg, res.det, it > 0 ? &res.fit : nullptr);

        const model::FieldParams field{res.fit.delta_b_mhz, res.fit.sigma_mhz};
        sig.noise_sigma = pipeline::match_noise_sigma(
            measured_hist, cfg, res.fit.thermal, field, sig, opts.histogram_shots,
            opts.pi_pulse_ns, rng::derive_seed(seed, rng::Stream::aux, 200 + it));
        res.noise_sigma = sig.noise_sigma;

        res.det = pipeline::calibrate_detection(
                      cfg, sig, cds, scheme, opts.traces_per_class,
                      rng::derive_seed(seed, rng::Stream::aux, 300 + it))
                      .det;

        const double r_s = fidelity::singlet_infidelity(res.fit.thermal, res.det);
        const double r_t0 = fidelity::triplet_infidelity(r, r_s, res.fit.thermal, res.det);
        const double f = fidelity::total_fidelity(r_s, r_t0).f_meas;
        res.f_meas_history.push_back(f);
        if (prev_f >= 0.0 && std::abs(f - prev_f) < opts.f_meas_tol) {
            res.converged = true;
            break;
        }
        prev_f = f;
    }
    // One final refit against the converged detection errors.
    res.fit = fit_larmor(data, cfg, res.det, &res.fit);
    return res;
}

double ThermalFitParams::temperature_mk() const {
    return width_ev / units::kBoltzmannEvPerK * 1e3;
}

double ThermalFitParams::coupling_ghz() const {
    return width_ev / units::kPlanckEvS * 1e-9;
}

ThermalFitParams fit_fermi_dirac(std::span<const double> v1, std::span<const double> dv,
                                 BroadeningMode mode, double lever_arm) {
    if (v1.size() != dv.size() || v1.size() < 8)
        throw std::invalid_argument("fermi-dirac fit needs >= 8 sweep points");
    if (lever_arm <= 0.0) throw std::invalid_argument("lever arm must be positive");

    const auto i_min =
        static_cast<std::size_t>(std::distance(dv.begin(), std::min_element(dv.begin(), dv.end())));
    if (i_min == 0 || i_min + 1 == dv.size())
        throw std::invalid_argument("transition extremum not bracketed by the sweep");

    const double edge = 0.5 * (dv.front() + dv.back());
    const double depth = edge - dv[i_min];
    // FWHM of sech^2(x/2) in x is ~3.5255; map to the broadening width.
    double v_left = v1.front(), v_right = v1.back();
    for (std::size_t i = i_min; i-- > 0;)
        if (edge - dv[i] < 0.5 * depth) { v_left = v1[i]; break; }
    for (std::size_t i = i_min + 1; i < dv.size(); ++i)
        if (edge - dv[i] < 0.5 * depth) { v_right = v1[i]; break; }
    const double w0 = std::max(1e-9, lever_arm * (v_right - v_left) / 3.5255);

    auto sech2q = [](double x) {
        const double c = std::cosh(0.5 * x);
        return 0.25 / (c * c);
    };
    auto obj = [&](std::span<const double> p) {
        // p = {a_offset, amplitude, v_offset, width}
        double ss = 0.0;
        for (std::size_t i = 0; i < v1.size(); ++i) {
            const double x = lever_arm * (v1[i] - p[2]) / p[3];
            const double m = p[0] - (p[1] * lever_arm / p[3]) * sech2q(x);
            const double d = m - dv[i];
            ss += d * d;
        }
        return ss;
    };

    const double a0 = 4.0 * depth * w0 / lever_arm;
    const double x0[4] = {edge, a0, v1[i_min], w0};
    const double step[4] = {0.2 * depth + 1e-12, 0.3 * a0 + 1e-12,
                            0.1 * (v1.back() - v1.front()), 0.3 * w0};
    const double lo[4] = {-1e9, 0.0, v1.front(), 1e-12};
    const double hi[4] = {1e9, 1e9, v1.back(), 1.0};
    const auto r = numerics::minimize_simplex(obj, x0, step, lo, hi);

    ThermalFitParams out;
    out.a_offset = r.x[0];
    out.amplitude = r.x[1];
    out.lever_arm = lever_arm;
    out.v_offset = r.x[2];
    out.width_ev = r.x[3];
    out.mode = mode;
    return out;
}

} // namespace estsim::fit
