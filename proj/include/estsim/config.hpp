#pragma once

#include "estsim/dsp.hpp"
#include "estsim/leakage.hpp"
#include "estsim/model.hpp"
#include "estsim/tracegen.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace estsim::config {

// One qubit's full experiment description: readout timing, planted thermal
// parameters for simulation, field distribution, signal model, CDS settings,
// detection scheme, seeds and the evolve-time grid. Stored as flat
// `key = value` text so a config diffs directly against published tables.
struct ExperimentConfig {
    std::string qubit = "q_left";
    model::ReadoutConfig readout;
    model::ThermalParams thermal;
    model::FieldParams field;
    tracegen::SignalModel signal;
    dsp::CdsConfig cds;
    dsp::Scheme scheme = dsp::Scheme::cds;
    std::uint64_t seed = 1;
    std::size_t shots_per_point = 2000;
    std::size_t chains = 1;
    std::vector<double> evolve_times_ns;
    model::DetectionFidelity nominal_det; // published detection errors
    leakage::LzConfig lz;
    double lever_arm = 0.035;

    void validate() const;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ExperimentConfig parse_config_text(std::string_view text, const std::string& origin);
ExperimentConfig load_config_file(const std::string& path);
std::string to_config_text(const ExperimentConfig& cfg);

namespace presets {
ExperimentConfig q_left();
ExperimentConfig q_right();
// Lookup by name ("q_left" / "q_right"); throws ConfigError otherwise.
ExperimentConfig by_name(const std::string& name);
} // namespace presets

} // namespace estsim::config
