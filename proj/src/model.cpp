#include "estsim/model.hpp"

#include "estsim/units.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace estsim::model {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

} // namespace

std::size_t ReadoutConfig::samples_per_window() const {
    return static_cast<std::size_t>(std::llround(meas_window_us * sample_rate_mhz));
}

void ReadoutConfig::validate() const {
    require(tau_out_us > 0, "tau_out must be positive");
    require(tau_in_us > 0, "tau_in must be positive");
    require(t1_us > 0, "t1 must be positive");
    require(meas_window_us > 0, "measurement window must be positive");
    require(sample_rate_mhz > 0, "sample rate must be positive");
    require(cds_rate_khz > 0, "cds rate must be positive");
    require(cds_gate_width_us > 0, "cds gate width must be positive");
    require(meas_window_us >= cds_gate_width_us,
            "measurement window shorter than the cds gate");
    require(meas_window_us * sample_rate_mhz >= 2.0,
            "window must span at least two samples");
}

void ThermalParams::validate() const {
    for (double p : {alpha1, alpha2, beta})
        require(p >= 0.0 && p <= 1.0, "thermal probabilities must be in [0,1]");
}

void FieldParams::validate() const {
    require(delta_b_mhz >= 0.0, "delta_b must be nonnegative");
    require(sigma_mhz >= 0.0, "sigma must be nonnegative");
}

double survival_fraction(const ReadoutConfig& cfg) {
    cfg.validate();
    if (cfg.meas_window_us == 0.0) return 0.0;
    const double inv_eff = 1.0 / cfg.t1_us + 1.0 / cfg.tau_out_us;
    const double tau_eff = 1.0 / inv_eff;
    return (tau_eff / cfg.tau_out_us) * (-std::expm1(-cfg.meas_window_us * inv_eff));
}

double ideal_t0_probability(double t_ns, double delta_b_mhz) {
    const double s = std::sin(units::kPi * delta_b_mhz * t_ns * 1e-3);
    return s * s;
}

RecursionBranches recursion_branches(double f, double r, const ThermalParams& th) {
    // b(g): evolved occupation g of the excited state tunnels with
    // d = r + (1-r) a1; the ground remainder false-tunnels with a1.
    const double d = r + (1.0 - r) * th.alpha1;
    const auto b = [&](double g) { return g * d + (1.0 - g) * th.alpha1; };
    RecursionBranches br;
    br.after_no_event = b(f);
    br.after_event = (1.0 - th.beta) * b(f) + (th.beta / 3.0) * b(1.0 - f) +
                     (2.0 * th.beta / 3.0) * d;
    return br;
}

namespace {

std::vector<double> run_recursion(std::span<const double> times_ns,
                                  const ReadoutConfig& cfg, const ThermalParams& th,
                                  double delta_b_mhz, bool steady) {
    th.validate();
    if (!std::is_sorted(times_ns.begin(), times_ns.end()))
        throw std::invalid_argument("evolution times must be sorted ascending");
    const double r = survival_fraction(cfg);
    std::vector<double> out(times_ns.size());
    double p = 1.0; // the sweep begins right after an explicit initialization
    const int passes = steady ? 2 : 1;
    for (int pass = 0; pass < passes; ++pass) {
        for (std::size_t j = 0; j < times_ns.size(); ++j) {
            const double f = ideal_t0_probability(times_ns[j], delta_b_mhz);
            const auto br = recursion_branches(f, r, th);
            p = p * br.after_event + (1.0 - p) * br.after_no_event;
            out[j] = p;
        }
    }
    return out;
}

} // namespace

std::vector<double> detection_prob_recursion(std::span<const double> times_ns,
                                             const ReadoutConfig& cfg,
                                             const ThermalParams& th,
                                             double delta_b_mhz) {
    return run_recursion(times_ns, cfg, th, delta_b_mhz, false);
}

std::vector<double> detection_prob_steady(std::span<const double> times_ns,
                                          const ReadoutConfig& cfg,
                                          const ThermalParams& th,
                                          double delta_b_mhz) {
    return run_recursion(times_ns, cfg, th, delta_b_mhz, true);
}

double expected_counts(double p, const ThermalParams& th, const DetectionFidelity& det) {
    const double t_t = 1.0 - det.e_t;
    return p * (1.0 + th.p2()) * t_t + (1.0 - p) * det.e_n;
}

namespace {

struct GaussGrid {
    std::vector<double> field;
    std::vector<double> weight; // normalized
};

GaussGrid make_grid(double delta_b, double sigma) {
    GaussGrid g;
    g.field.resize(kGaussGridPoints);
    g.weight.resize(kGaussGridPoints);
    const double lo = delta_b - 5.0 * sigma;
    const double hi = delta_b + 5.0 * sigma;
    const double step = (hi - lo) / static_cast<double>(kGaussGridPoints - 1);
    double norm = 0.0;
    for (std::size_t i = 0; i < kGaussGridPoints; ++i) {
        const double b = lo + step * static_cast<double>(i);
        const double z = (b - delta_b) / sigma;
        g.field[i] = b;
        g.weight[i] = std::exp(-0.5 * z * z);
        norm += g.weight[i];
    }
    for (auto& w : g.weight) w /= norm;
    return g;
}

} // namespace

std::vector<double> gaussian_average(const std::function<double(double, double)>& curve,
                                     double delta_b_mhz, double sigma_mhz,
                                     std::span<const double> times_ns) {
    std::vector<double> out(times_ns.size(), 0.0);
    if (sigma_mhz <= 0.0) {
        for (std::size_t j = 0; j < times_ns.size(); ++j)
            out[j] = curve(times_ns[j], delta_b_mhz);
        return out;
    }
    const GaussGrid g = make_grid(delta_b_mhz, sigma_mhz);
    for (std::size_t i = 0; i < g.field.size(); ++i)
        for (std::size_t j = 0; j < times_ns.size(); ++j)
            out[j] += g.weight[i] * curve(times_ns[j], g.field[i]);
    return out;
}

std::vector<double> gaussian_average_family(
    const std::function<void(double, std::span<double>)>& family, double delta_b_mhz,
    double sigma_mhz, std::size_t n_times) {
    std::vector<double> out(n_times, 0.0);
    std::vector<double> buf(n_times);
    if (sigma_mhz <= 0.0) {
        family(delta_b_mhz, std::span<double>(out));
        return out;
    }
    const GaussGrid g = make_grid(delta_b_mhz, sigma_mhz);
    for (std::size_t i = 0; i < g.field.size(); ++i) {
        family(g.field[i], std::span<double>(buf));
        for (std::size_t j = 0; j < n_times; ++j) out[j] += g.weight[i] * buf[j];
    }
    return out;
}

std::vector<double> larmor_model_curve(std::span<const double> times_ns,
                                       const ReadoutConfig& cfg, const ThermalParams& th,
                                       const DetectionFidelity& det,
                                       const FieldParams& field, bool steady) {
    return gaussian_average_family(
        [&](double b, std::span<double> out) {
            const auto p = steady ? detection_prob_steady(times_ns, cfg, th, b)
                                  : detection_prob_recursion(times_ns, cfg, th, b);
            for (std::size_t j = 0; j < p.size(); ++j)
                out[j] = expected_counts(p[j], th, det);
        },
        field.delta_b_mhz, field.sigma_mhz, times_ns.size());
}

} // namespace estsim::model
