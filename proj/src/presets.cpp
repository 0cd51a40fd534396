#include "estsim/config.hpp"

namespace estsim::config::presets {

// Calibrated defaults for the two measured qubits. Readout timing, thermal
// parameters, field values and nominal detection errors follow the
// published analysis table; noise_sigma and the right qubit's CDS
// separation are frozen instrument calibrations (see configs/*.cfg).

ExperimentConfig q_left() {
    ExperimentConfig c;
    c.qubit = "q_left";
    c.readout = {16.0, 117.0, 337.0, 150.0, 14.0, 200.0, 0.1};
    c.thermal = {0.081, 0.08, 0.12};
    c.field = {500.0, 15.71};
    c.signal.level_occupied = 1.0;
    c.signal.level_empty = 0.0;
    c.signal.noise_sigma = 0.33;
    c.signal.lowpass_cutoff_mhz = 1.0;
    c.cds.rate_khz = 200.0;
    c.cds.gate_width_us = 0.1;
    c.cds.gate_baseline_separation_us = 5.0;
    c.scheme = dsp::Scheme::cds;
    c.seed = 1;
    c.shots_per_point = 2000;
    c.chains = 50;
    c.evolve_times_ns.clear();
    for (int i = 0; i <= 20; ++i) c.evolve_times_ns.push_back(0.5 * i);
    c.nominal_det = {0.05, 0.055, 0.0};
    c.lz = {11.3137085, 0.5, 0.2, 80.0, -105.0, 10.0, 0.002};
    c.lever_arm = 0.035;
    return c;
}

ExperimentConfig q_right() {
    ExperimentConfig c = q_left();
    c.qubit = "q_right";
    c.readout = {25.5, 130.5, 192.0, 200.0, 14.0, 50.0, 4.0};
    c.thermal = {0.092, 0.089, 0.069};
    c.field = {400.0, 15.73};
    c.signal.noise_sigma = 0.65;
    c.cds.rate_khz = 50.0;
    c.cds.gate_width_us = 4.0;
    c.cds.gate_baseline_separation_us = 14.3;
    c.nominal_det = {0.19, 0.092, 0.0};
    return c;
}

ExperimentConfig by_name(const std::string& name) {
    if (name == "q_left") return q_left();
    if (name == "q_right") return q_right();
    throw ConfigError("config: unknown qubit preset '" + name + "'");
}

} // namespace estsim::config::presets
