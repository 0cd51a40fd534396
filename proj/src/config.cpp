#include "estsim/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace estsim::config {

void ExperimentConfig::validate() const {
    readout.validate();
    thermal.validate();
    field.validate();
    signal.validate(readout);
    cds.validate();
    lz.validate();
    if (evolve_times_ns.empty())
        throw ConfigError("config: evolve_times_ns must not be empty");
    if (lever_arm <= 0) throw ConfigError("config: lever_arm must be positive");
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& v, const std::string& where) {
    if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: " + where + ": not a number: '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& v, const std::string& where) {
    std::uint64_t out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ConfigError("config: " + where + ": not an unsigned integer: '" + v + "'");
    return out;
}

// Either "start:step:stop" or a comma-separated list.
std::vector<double> parse_times(const std::string& v, const std::string& where) {
    std::vector<double> out;
    if (v.find(':') != std::string::npos) {
        std::istringstream ss(v);
        std::string a, b, c;
        if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
            throw ConfigError("config: " + where + ": expected start:step:stop");
        const double start = parse_double(trim(a), where);
        const double step = parse_double(trim(b), where);
        const double stop = parse_double(trim(c), where);
        if (step <= 0) throw ConfigError("config: " + where + ": step must be positive");
        for (double t = start; t <= stop + 1e-9 * step; t += step) out.push_back(t);
    } else {
        std::istringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), where));
    }
    if (out.empty()) throw ConfigError("config: " + where + ": empty time list");
    return out;
}

} // namespace

ExperimentConfig parse_config_text(std::string_view text, const std::string& origin) {
    ExperimentConfig cfg;
    cfg.evolve_times_ns.clear();

    using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;
    static const std::map<std::string, Setter> setters = {
        {"qubit", [](auto& c, const std::string& v, const std::string&) { c.qubit = v; }},
        {"tau_out_us", [](auto& c, const std::string& v, const std::string& w) { c.readout.tau_out_us = parse_double(v, w); }},
        {"tau_in_us", [](auto& c, const std::string& v, const std::string& w) { c.readout.tau_in_us = parse_double(v, w); }},
        {"t1_us", [](auto& c, const std::string& v, const std::string& w) { c.readout.t1_us = parse_double(v, w); }},
        {"meas_window_us", [](auto& c, const std::string& v, const std::string& w) { c.readout.meas_window_us = parse_double(v, w); }},
        {"sample_rate_mhz", [](auto& c, const std::string& v, const std::string& w) { c.readout.sample_rate_mhz = parse_double(v, w); }},
        {"cds_rate_khz", [](auto& c, const std::string& v, const std::string& w) {
             c.readout.cds_rate_khz = parse_double(v, w);
             c.cds.rate_khz = c.readout.cds_rate_khz;
         }},
        {"cds_gate_width_us", [](auto& c, const std::string& v, const std::string& w) {
             c.readout.cds_gate_width_us = parse_double(v, w);
             c.cds.gate_width_us = c.readout.cds_gate_width_us;
         }},
        {"cds_separation_us", [](auto& c, const std::string& v, const std::string& w) { c.cds.gate_baseline_separation_us = parse_double(v, w); }},
        {"alpha1", [](auto& c, const std::string& v, const std::string& w) { c.thermal.alpha1 = parse_double(v, w); }},
        {"alpha2", [](auto& c, const std::string& v, const std::string& w) { c.thermal.alpha2 = parse_double(v, w); }},
        {"beta", [](auto& c, const std::string& v, const std::string& w) { c.thermal.beta = parse_double(v, w); }},
        {"delta_b_mhz", [](auto& c, const std::string& v, const std::string& w) { c.field.delta_b_mhz = parse_double(v, w); }},
        {"sigma_mhz", [](auto& c, const std::string& v, const std::string& w) { c.field.sigma_mhz = parse_double(v, w); }},
        {"noise_sigma", [](auto& c, const std::string& v, const std::string& w) { c.signal.noise_sigma = parse_double(v, w); }},
        {"lowpass_cutoff_mhz", [](auto& c, const std::string& v, const std::string& w) { c.signal.lowpass_cutoff_mhz = parse_double(v, w); }},
        {"level_occupied", [](auto& c, const std::string& v, const std::string& w) { c.signal.level_occupied = parse_double(v, w); }},
        {"level_empty", [](auto& c, const std::string& v, const std::string& w) { c.signal.level_empty = parse_double(v, w); }},
        {"scheme", [](auto& c, const std::string& v, const std::string& w) {
             if (v == "cds") c.scheme = dsp::Scheme::cds;
             else if (v == "direct_peak") c.scheme = dsp::Scheme::direct_peak;
             else throw ConfigError("config: " + w + ": scheme must be cds or direct_peak");
         }},
        {"seed", [](auto& c, const std::string& v, const std::string& w) { c.seed = parse_u64(v, w); }},
        {"shots_per_point", [](auto& c, const std::string& v, const std::string& w) { c.shots_per_point = parse_u64(v, w); }},
        {"chains", [](auto& c, const std::string& v, const std::string& w) { c.chains = parse_u64(v, w); }},
        {"evolve_times_ns", [](auto& c, const std::string& v, const std::string& w) { c.evolve_times_ns = parse_times(v, w); }},
        {"e_t", [](auto& c, const std::string& v, const std::string& w) { c.nominal_det.e_t = parse_double(v, w); }},
        {"e_n", [](auto& c, const std::string& v, const std::string& w) { c.nominal_det.e_n = parse_double(v, w); }},
        {"lever_arm", [](auto& c, const std::string& v, const std::string& w) { c.lever_arm = parse_double(v, w); }},
        {"lz_tunnel_coupling_ghz", [](auto& c, const std::string& v, const std::string& w) { c.lz.tunnel_coupling_ghz = parse_double(v, w); }},
        {"lz_delta_b_ghz", [](auto& c, const std::string& v, const std::string& w) { c.lz.delta_b_ghz = parse_double(v, w); }},
        {"lz_rise_time_ns", [](auto& c, const std::string& v, const std::string& w) { c.lz.rise_time_ns = parse_double(v, w); }},
        {"lz_detuning_start_ghz", [](auto& c, const std::string& v, const std::string& w) { c.lz.detuning_start_ghz = parse_double(v, w); }},
        {"lz_detuning_end_ghz", [](auto& c, const std::string& v, const std::string& w) { c.lz.detuning_end_ghz = parse_double(v, w); }},
        {"lz_max_evolve_ns", [](auto& c, const std::string& v, const std::string& w) { c.lz.max_evolve_ns = parse_double(v, w); }},
        {"lz_dt_ns", [](auto& c, const std::string& v, const std::string& w) { c.lz.dt_ns = parse_double(v, w); }},
    };

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view raw =
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        std::string line = trim(raw);
        if (const auto h = line.find('#'); h != std::string::npos)
            line = trim(std::string_view(line).substr(0, h));
        if (line.empty()) continue;

        const auto eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(line_no);
        if (eq == std::string::npos)
            throw ConfigError("config: " + where + ": expected 'key = value'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end())
            throw ConfigError("config: " + where + ": unknown key '" + key + "'");
        it->second(cfg, value, where + " (" + key + ")");
    }

    if (cfg.evolve_times_ns.empty()) cfg.evolve_times_ns = {1.0};
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

namespace {

std::string fmt(double v) {
    if (std::isinf(v)) return "inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string to_config_text(const ExperimentConfig& c) {
    std::ostringstream o;
    o << "qubit = " << c.qubit << "\n";
    o << "tau_out_us = " << fmt(c.readout.tau_out_us) << "\n";
    o << "tau_in_us = " << fmt(c.readout.tau_in_us) << "\n";
    o << "t1_us = " << fmt(c.readout.t1_us) << "\n";
    o << "meas_window_us = " << fmt(c.readout.meas_window_us) << "\n";
    o << "sample_rate_mhz = " << fmt(c.readout.sample_rate_mhz) << "\n";
    o << "cds_rate_khz = " << fmt(c.readout.cds_rate_khz) << "\n";
    o << "cds_gate_width_us = " << fmt(c.readout.cds_gate_width_us) << "\n";
    o << "cds_separation_us = " << fmt(c.cds.gate_baseline_separation_us) << "\n";
    o << "alpha1 = " << fmt(c.thermal.alpha1) << "\n";
    o << "alpha2 = " << fmt(c.thermal.alpha2) << "\n";
    o << "beta = " << fmt(c.thermal.beta) << "\n";
    o << "delta_b_mhz = " << fmt(c.field.delta_b_mhz) << "\n";
    o << "sigma_mhz = " << fmt(c.field.sigma_mhz) << "\n";
    o << "noise_sigma = " << fmt(c.signal.noise_sigma) << "\n";
    o << "lowpass_cutoff_mhz = " << fmt(c.signal.lowpass_cutoff_mhz) << "\n";
    o << "level_occupied = " << fmt(c.signal.level_occupied) << "\n";
    o << "level_empty = " << fmt(c.signal.level_empty) << "\n";
    o << "scheme = " << (c.scheme == dsp::Scheme::cds ? "cds" : "direct_peak") << "\n";
    o << "seed = " << c.seed << "\n";
    o << "shots_per_point = " << c.shots_per_point << "\n";
    o << "chains = " << c.chains << "\n";
    o << "evolve_times_ns = ";
    for (std::size_t i = 0; i < c.evolve_times_ns.size(); ++i)
        o << (i ? "," : "") << fmt(c.evolve_times_ns[i]);
    o << "\n";
    o << "e_t = " << fmt(c.nominal_det.e_t) << "\n";
    o << "e_n = " << fmt(c.nominal_det.e_n) << "\n";
    o << "lever_arm = " << fmt(c.lever_arm) << "\n";
    o << "lz_tunnel_coupling_ghz = " << fmt(c.lz.tunnel_coupling_ghz) << "\n";
    o << "lz_delta_b_ghz = " << fmt(c.lz.delta_b_ghz) << "\n";
    o << "lz_rise_time_ns = " << fmt(c.lz.rise_time_ns) << "\n";
    o << "lz_detuning_start_ghz = " << fmt(c.lz.detuning_start_ghz) << "\n";
    o << "lz_detuning_end_ghz = " << fmt(c.lz.detuning_end_ghz) << "\n";
    o << "lz_max_evolve_ns = " << fmt(c.lz.max_evolve_ns) << "\n";
    o << "lz_dt_ns = " << fmt(c.lz.dt_ns) << "\n";
    return o.str();
}

} // namespace estsim::config
