#include "estsim/tracegen.hpp"

#include "estsim/kernels.hpp"
#include "estsim/rng.hpp"
#include "estsim/units.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace estsim::tracegen {

void ShotRecord::validate(double meas_window_us) const {
    EventDir expect = EventDir::out;
    double prev = 0.0;
    for (const auto& ev : events) {
        if (ev.dir != expect) throw std::logic_error("event directions must alternate");
        if (ev.time_us < prev || ev.time_us > meas_window_us)
            throw std::logic_error("event time outside the window");
        prev = ev.time_us;
        expect = expect == EventDir::out ? EventDir::in : EventDir::out;
    }
}

void SignalModel::validate(const model::ReadoutConfig& cfg) const {
    if (level_occupied == level_empty)
        throw std::invalid_argument("signal levels must differ");
    if (noise_sigma < 0) throw std::invalid_argument("noise sigma must be nonnegative");
    if (lowpass_cutoff_mhz <= 0 || lowpass_cutoff_mhz > cfg.sample_rate_mhz / 2.0)
        throw std::invalid_argument("low-pass cutoff outside (0, sample_rate/2]");
}

namespace {

// Exponential draw conditioned to land inside [0, span).
double exp_within(rng::Xoshiro256pp& r, double tau, double span) {
    if (span <= 0.0) return 0.0;
    const double cap = -std::expm1(-span / tau); // P(X < span)
    double u;
    do { u = r.uniform(); } while (u >= 1.0);
    return -tau * std::log1p(-u * cap);
}

} // namespace

ShotRecord sample_shot_events(Prep prep, std::uint64_t seed,
                              const model::ReadoutConfig& cfg,
                              const model::ThermalParams& th, double delta_b_mhz,
                              double evolve_time_ns) {
    cfg.validate();
    th.validate();
    rng::Xoshiro256pp r(seed);
    const double m = cfg.meas_window_us;

    ShotRecord rec;
    rec.evolve_time_ns = evolve_time_ns;
    rec.delta_b_mhz = delta_b_mhz;

    // Initialization and coherent evolution.
    SpinState st = SpinState::S;
    switch (prep.kind) {
        case Prep::Kind::forced_s:
            st = SpinState::S;
            rec.label = Label::ground;
            break;
        case Prep::Kind::forced_t0:
            st = SpinState::T0;
            rec.label = Label::excited;
            break;
        case Prep::Kind::fresh:
        case Prep::Kind::carried: {
            if (prep.kind == Prep::Kind::fresh && r.bernoulli(th.beta)) {
                const double pick = r.uniform();
                st = pick < 1.0 / 3.0   ? SpinState::T0
                     : pick < 2.0 / 3.0 ? SpinState::Tplus
                                        : SpinState::Tminus;
            } else if (prep.kind == Prep::Kind::carried) {
                st = prep.carried_state;
            }
            const double f = model::ideal_t0_probability(evolve_time_ns, delta_b_mhz);
            if (st == SpinState::S)
                st = r.bernoulli(f) ? SpinState::T0 : SpinState::S;
            else if (st == SpinState::T0)
                st = r.bernoulli(f) ? SpinState::S : SpinState::T0;
            rec.label = st == SpinState::S ? Label::ground : Label::excited;
            break;
        }
    }
    rec.initial_state = st;
    rec.end_state = st;

    // First tunneling event of the window, if any.
    double t_first = -1.0;
    if (st == SpinState::S) {
        if (r.bernoulli(th.alpha1)) t_first = r.uniform(0.0, m);
    } else {
        const double t_out = r.exponential(cfg.tau_out_us);
        const double t_rel =
            std::isfinite(cfg.t1_us) ? r.exponential(cfg.t1_us) : std::numeric_limits<double>::infinity();
        if (t_out <= t_rel && t_out <= m) {
            t_first = t_out;
        } else if (t_rel < t_out && t_rel <= m) {
            // Relaxed to the ground state, which may still false-tunnel.
            rec.end_state = SpinState::S;
            if (r.bernoulli(th.alpha2)) t_first = r.uniform(t_rel, m);
        }
        // else: survived the whole window untouched (end_state keeps st)
    }
    if (t_first < 0.0) return rec;

    rec.events.push_back({t_first, EventDir::out});
    rec.end_state = SpinState::S;

    // Double-tunneling pattern: a second event occurs with total probability
    // beta + (1-beta) alpha2. The refill is drawn conditioned in-window when
    // a second event is scheduled, unconditioned (and possibly absent)
    // otherwise. The chain stops at the double event.
    const double u = r.uniform();
    const double span = m - t_first;
    if (u < th.beta) {
        const double t_in = t_first + exp_within(r, cfg.tau_in_us, span);
        const double t2 = t_in + exp_within(r, cfg.tau_out_us, m - t_in);
        rec.events.push_back({t_in, EventDir::in});
        rec.events.push_back({t2, EventDir::out});
    } else if (u < th.beta + (1.0 - th.beta) * th.alpha2) {
        const double t_in = t_first + exp_within(r, cfg.tau_in_us, span);
        const double t2 = r.uniform(t_in, m);
        rec.events.push_back({t_in, EventDir::in});
        rec.events.push_back({t2, EventDir::out});
    } else {
        const double t_in = t_first + r.exponential(cfg.tau_in_us);
        if (t_in <= m) rec.events.push_back({t_in, EventDir::in});
        return rec;
    }
    // Trailing refill after the second tunneling, if it fits.
    const double t_last = rec.events.back().time_us;
    const double t_in2 = t_last + r.exponential(cfg.tau_in_us);
    if (t_in2 <= m) rec.events.push_back({t_in2, EventDir::in});
    return rec;
}

void synthesize_trace_into(const ShotRecord& rec, const SignalModel& sig,
                           const model::ReadoutConfig& cfg, std::uint64_t seed,
                           std::span<float> out) {
    sig.validate(cfg);
    const std::size_t n = cfg.samples_per_window();
    if (out.size() != n) throw std::invalid_argument("trace buffer size mismatch");
    const double dt = 1.0 / cfg.sample_rate_mhz;

    // Ideal piecewise-constant waveform; sample k holds the level at k*dt.
    const float occ = static_cast<float>(sig.level_occupied);
    const float emp = static_cast<float>(sig.level_empty);
    std::fill(out.begin(), out.end(), occ);
    for (const auto& ev : rec.events) {
        const auto k0 = static_cast<std::size_t>(std::ceil(ev.time_us / dt - 1e-12));
        const float level = ev.dir == EventDir::out ? emp : occ;
        for (std::size_t k = k0; k < n; ++k) out[k] = level;
    }

    if (sig.noise_sigma > 0.0) {
        static thread_local std::vector<float> noise;
        noise.resize(n);
        kernels::gaussian_fill(noise.data(), n, seed);
        const float s = static_cast<float>(sig.noise_sigma);
        for (std::size_t k = 0; k < n; ++k) out[k] += s * noise[k];
    }

    const float alpha = static_cast<float>(
        -std::expm1(-units::kTwoPi * sig.lowpass_cutoff_mhz / cfg.sample_rate_mhz));
    kernels::iir_lowpass(out.data(), n, alpha, occ);
}

Trace synthesize_trace(const ShotRecord& rec, const SignalModel& sig,
                       const model::ReadoutConfig& cfg, std::uint64_t seed) {
    Trace tr;
    tr.samples.resize(cfg.samples_per_window());
    tr.dt_us = 1.0 / cfg.sample_rate_mhz;
    synthesize_trace_into(rec, sig, cfg, seed, tr.samples);
    tr.meta = rec;
    return tr;
}

double draw_field_mhz(const model::FieldParams& field, std::uint64_t seed) {
    if (field.sigma_mhz <= 0.0) return field.delta_b_mhz;
    rng::Xoshiro256pp r(seed);
    return r.normal(field.delta_b_mhz, field.sigma_mhz);
}

std::vector<Trace> synthesize_ensemble(std::size_t n, std::span<const double> evolve_times_ns,
                                       const model::ReadoutConfig& cfg,
                                       const model::ThermalParams& th,
                                       const model::FieldParams& field,
                                       const SignalModel& sig, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("ensemble needs at least one shot");
    field.validate();
    std::vector<Trace> traces;
    traces.reserve(n * evolve_times_ns.size());
    std::size_t shot_index = 0;
    for (double t_ns : evolve_times_ns) {
        for (std::size_t s = 0; s < n; ++s, ++shot_index) {
            const double b = draw_field_mhz(
                field, rng::derive_seed(seed, rng::Stream::field_draw, shot_index));
            const auto rec = sample_shot_events(
                Prep::fresh(), rng::derive_seed(seed, rng::Stream::shot_events, shot_index),
                cfg, th, b, t_ns);
            traces.push_back(synthesize_trace(
                rec, sig, cfg, rng::derive_seed(seed, rng::Stream::trace_noise, shot_index)));
        }
    }
    return traces;
}

} // namespace estsim::tracegen
