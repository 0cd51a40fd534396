#pragma once

#include <Eigen/Dense>

#include <vector>

// Three-level {(2,0)S, (1,1)S, (1,1)T0} dynamics through the fast detuning
// ramp: linear ramp to the free-evolution point, hold, ramp back. The
// stepping is exact per step (eigendecomposition of the piecewise-constant
// Hamiltonian), so the norm is preserved to rounding.

namespace estsim::leakage {

struct LzConfig {
    double tunnel_coupling_ghz = 11.3137085; // singlet-singlet matrix element, t_c/h
    double delta_b_ghz = 0.5;                // longitudinal field difference
    double rise_time_ns = 0.2;
    double detuning_start_ghz = 80.0;  // deep (2,0) side (positive detuning)
    double detuning_end_ghz = -105.0;  // free-evolution point in (1,1)
    double max_evolve_ns = 10.0;
    double dt_ns = 0.002; // ramp integration step

    void validate() const;
};

using StateVector = Eigen::Vector3cd;

// H / h in GHz over the {(2,0)S, (1,1)S, (1,1)T0} basis:
// [[-eps, t_c, 0], [t_c, 0, d/2], [0, d/2, 0]], d = field difference.
// The (2,0)S level is the ground state at positive detuning.
Eigen::Matrix3d hamiltonian_at(double eps_ghz, const LzConfig& cfg);

// Ground eigenstate at the given detuning.
StateVector ground_state(double eps_ghz, const LzConfig& cfg);

// exp(-i 2 pi H dt) psi for a constant Hamiltonian.
StateVector propagate(const Eigen::Matrix3d& h_ghz, double dt_ns, const StateVector& psi);

struct OccupationTrace {
    std::vector<double> t_ns;       // hold-relative sample times
    std::vector<double> occupation; // |<(2,0)S | psi>|^2
    double norm_drift = 0.0;        // | ||psi||^2 - 1 | at pulse end
};

// Starts in the ground state at detuning_start, ramps linearly over
// rise_time to detuning_end, holds for evolve_time (sampling the (2,0)S
// occupation), ramps back.
OccupationTrace evolve_pulse(const LzConfig& cfg, double evolve_time_ns,
                             double sample_dt_ns = 0.02);

// Mean (2,0)S occupation during the hold, averaged over a grid of
// evolution times covering [0, max_evolve].
double average_leakage(const LzConfig& cfg, std::size_t grid_points = 41);

} // namespace estsim::leakage
