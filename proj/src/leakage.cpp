#include "estsim/leakage.hpp"

#include "estsim/units.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace estsim::leakage {

void LzConfig::validate() const {
    if (rise_time_ns <= 0) throw std::invalid_argument("rise time must be positive");
    if (dt_ns <= 0 || dt_ns > rise_time_ns / 50.0)
        throw std::invalid_argument("dt must be positive and at most rise_time/50");
    if (tunnel_coupling_ghz < 0) throw std::invalid_argument("tunnel coupling must be >= 0");
    if (max_evolve_ns < 0) throw std::invalid_argument("max evolve time must be >= 0");
}

Eigen::Matrix3d hamiltonian_at(double eps_ghz, const LzConfig& cfg) {
    Eigen::Matrix3d h;
    const double tc = cfg.tunnel_coupling_ghz;
    const double half_d = 0.5 * cfg.delta_b_ghz;
    h << -eps_ghz, tc, 0.0,
         tc, 0.0, half_d,
         0.0, half_d, 0.0;
    return h;
}

StateVector ground_state(double eps_ghz, const LzConfig& cfg) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(hamiltonian_at(eps_ghz, cfg));
    Eigen::Vector3d v = es.eigenvectors().col(0); // ascending eigenvalues
    if (v(0) < 0.0) v = -v;
    return v.cast<std::complex<double>>();
}

StateVector propagate(const Eigen::Matrix3d& h_ghz, double dt_ns, const StateVector& psi) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h_ghz);
    const Eigen::Vector3d& lam = es.eigenvalues();
    const Eigen::Matrix3d& v = es.eigenvectors();
    Eigen::Vector3cd coeff = v.transpose().cast<std::complex<double>>() * psi;
    for (int i = 0; i < 3; ++i) {
        const double phase = -units::kTwoPi * lam(i) * dt_ns;
        coeff(i) *= std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return v.cast<std::complex<double>>() * coeff;
}

namespace {

void ramp(StateVector& psi, const LzConfig& cfg, double eps_from, double eps_to) {
    const auto n_steps =
        static_cast<std::size_t>(std::ceil(cfg.rise_time_ns / cfg.dt_ns - 1e-12));
    const double dt = cfg.rise_time_ns / static_cast<double>(n_steps);
    for (std::size_t k = 0; k < n_steps; ++k) {
        // midpoint detuning over the sub-interval
        const double frac = (static_cast<double>(k) + 0.5) / static_cast<double>(n_steps);
        const double eps = eps_from + (eps_to - eps_from) * frac;
        psi = propagate(hamiltonian_at(eps, cfg), dt, psi);
    }
}

} // namespace

OccupationTrace evolve_pulse(const LzConfig& cfg, double evolve_time_ns,
                             double sample_dt_ns) {
    cfg.validate();
    if (evolve_time_ns < 0) throw std::invalid_argument("evolve time must be >= 0");

    StateVector psi = ground_state(cfg.detuning_start_ghz, cfg);
    ramp(psi, cfg, cfg.detuning_start_ghz, cfg.detuning_end_ghz);

    OccupationTrace trace;
    const Eigen::Matrix3d h_hold = hamiltonian_at(cfg.detuning_end_ghz, cfg);
    trace.t_ns.push_back(0.0);
    trace.occupation.push_back(std::norm(psi(0)));
    double t = 0.0;
    while (t + sample_dt_ns <= evolve_time_ns + 1e-12) {
        psi = propagate(h_hold, sample_dt_ns, psi);
        t += sample_dt_ns;
        trace.t_ns.push_back(t);
        trace.occupation.push_back(std::norm(psi(0)));
    }
    if (t < evolve_time_ns) {
        psi = propagate(h_hold, evolve_time_ns - t, psi);
        trace.t_ns.push_back(evolve_time_ns);
        trace.occupation.push_back(std::norm(psi(0)));
    }

    ramp(psi, cfg, cfg.detuning_end_ghz, cfg.detuning_start_ghz);
    trace.norm_drift = std::abs(psi.squaredNorm() - 1.0);
    return trace;
}

double average_leakage(const LzConfig& cfg, std::size_t grid_points) {
    if (grid_points < 2) throw std::invalid_argument("need >= 2 evolve-time points");
    double acc = 0.0;
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double t = cfg.max_evolve_ns * static_cast<double>(i) /
                         static_cast<double>(grid_points - 1);
        const auto tr = evolve_pulse(cfg, t);
        double m = 0.0;
        for (double o : tr.occupation) m += o;
        acc += m / static_cast<double>(tr.occupation.size());
    }
    return acc / static_cast<double>(grid_points);
}

} // namespace estsim::leakage
