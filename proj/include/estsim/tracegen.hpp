#pragma once

#include "estsim/model.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

// Monte-Carlo synthesis of ground-truth shot events and of realistic noisy,
// low-pass-filtered single-shot traces.

namespace estsim::tracegen {

enum class SpinState { S, T0, Tplus, Tminus };
enum class EventDir { out, in };
enum class Label { ground, excited };

struct ShotEvent {
    double time_us;
    EventDir dir;
};

struct ShotRecord {
    SpinState initial_state = SpinState::S; // state entering the window
    SpinState end_state = SpinState::S;     // state at window end (chaining)
    Label label = Label::ground;            // intended prepared state
    std::vector<ShotEvent> events;          // time-ordered, alternating, first is out
    double evolve_time_ns = 0.0;
    double delta_b_mhz = 0.0;

    bool has_out_event() const {
        return !events.empty(); // first event is always an out event
    }
    void validate(double meas_window_us) const;
};

struct SignalModel {
    double level_occupied = 1.0;
    double level_empty = 0.0;
    double noise_sigma = 0.0;      // additive white Gaussian, pre-filter
    double lowpass_cutoff_mhz = 1.0;

    void validate(const model::ReadoutConfig& cfg) const;
};

struct Trace {
    std::vector<float> samples;
    double dt_us = 0.0;
    std::optional<ShotRecord> meta; // absent for imported real data
};

// How the shot is prepared. `fresh` draws the false-initialization branch
// (probability beta, split evenly over the triplets) and then evolves;
// `carried` continues with the previous window's end state (no new
// initialization) and evolves it; the forced modes produce the ideal
// ground/excited states used for detection calibration.
struct Prep {
    enum class Kind { fresh, forced_s, forced_t0, carried };
    Kind kind = Kind::fresh;
    SpinState carried_state = SpinState::S;

    static Prep fresh() { return {Kind::fresh, SpinState::S}; }
    static Prep forced_s() { return {Kind::forced_s, SpinState::S}; }
    static Prep forced_t0() { return {Kind::forced_t0, SpinState::T0}; }
    static Prep carried(SpinState s) { return {Kind::carried, s}; }
};

// One measurement window of the per-shot state machine. The excited state
// tunnels out after an Exp(tau_out) dwell unless relaxation (Exp(T1)) wins;
// a ground state false-tunnels with per-window probability alpha1 at a
// uniform time; after a tunneling event the dot refills (Exp(tau_in)) and a
// second tunneling follows with total probability beta + (1-beta) alpha2,
// realized with in-window timing. Events are truncated at the window end.
ShotRecord sample_shot_events(Prep prep, std::uint64_t seed,
                              const model::ReadoutConfig& cfg,
                              const model::ThermalParams& th, double delta_b_mhz,
                              double evolve_time_ns);

// Piecewise-constant ideal waveform + white noise, through a single-pole
// low-pass. Deterministic for a fixed seed.
Trace synthesize_trace(const ShotRecord& rec, const SignalModel& sig,
                       const model::ReadoutConfig& cfg, std::uint64_t seed);

// Same, writing into a caller-provided buffer of cfg.samples_per_window()
// floats (hot ensemble paths reuse buffers).
void synthesize_trace_into(const ShotRecord& rec, const SignalModel& sig,
                           const model::ReadoutConfig& cfg, std::uint64_t seed,
                           std::span<float> out);

// Independent ensemble: for every evolution time, n freshly-initialized
// shots with per-shot field draws from N(delta_b, sigma). Per-shot seeds
// derive from the master seed, so the result is independent of execution
// order. Returns times.size() * n traces, grouped by time point.
std::vector<Trace> synthesize_ensemble(std::size_t n, std::span<const double> evolve_times_ns,
                                       const model::ReadoutConfig& cfg,
                                       const model::ThermalParams& th,
                                       const model::FieldParams& field,
                                       const SignalModel& sig, std::uint64_t seed);

// Per-shot field draw used by ensembles (exposed for the chained pipeline).
double draw_field_mhz(const model::FieldParams& field, std::uint64_t seed);

} // namespace estsim::tracegen
