#include "estsim/fidelity.hpp"

#include "estsim/pipeline.hpp"
#include "estsim/rng.hpp"

namespace estsim::fidelity {

double singlet_infidelity(const model::ThermalParams& th,
                          const model::DetectionFidelity& det) {
    const double a1 = th.alpha1, p2 = th.p2();
    const double e_t = det.e_t, e_n = det.e_n;
    return (1.0 - a1) * e_n + a1 * (1.0 - e_t) + a1 * e_t * e_n +
           a1 * p2 * e_t * (1.0 - e_t) + a1 * p2 * e_t * e_t * e_n;
}

double triplet_infidelity(double r, double r_s, const model::ThermalParams& th,
                          const model::DetectionFidelity& det) {
    const double p2 = th.p2();
    const double e_t = det.e_t, e_n = det.e_n;
    return (1.0 - r) * (1.0 - r_s) + r * e_t * (1.0 - p2) * (1.0 - e_n) +
           r * e_t * e_t * p2;
}

FidelityReport total_fidelity(double r_s, double r_t0, dsp::Scheme scheme) {
    FidelityReport rep;
    rep.r_s = r_s;
    rep.r_t0 = r_t0;
    rep.f_meas = 1.0 - 0.5 * (r_s + r_t0);
    rep.visibility = 1.0 - r_s - r_t0;
    rep.scheme = scheme;
    return rep;
}

std::pair<FidelityReport, FidelityReport> compare_detection_schemes(
    const model::ReadoutConfig& cfg, const model::ThermalParams& th,
    const tracegen::SignalModel& sig, const dsp::CdsConfig& cds,
    std::size_t traces_per_class, std::uint64_t seed) {
    const double r = model::survival_fraction(cfg);
    const auto report_for = [&](dsp::Scheme scheme, std::uint64_t s) {
        const auto cal =
            pipeline::calibrate_detection(cfg, sig, cds, scheme, traces_per_class, s);
        const double r_s = singlet_infidelity(th, cal.det);
        const double r_t0 = triplet_infidelity(r, r_s, th, cal.det);
        return total_fidelity(r_s, r_t0, scheme);
    };
    return {report_for(dsp::Scheme::cds, rng::derive_seed(seed, rng::Stream::aux, 0)),
            report_for(dsp::Scheme::direct_peak, rng::derive_seed(seed, rng::Stream::aux, 1))};
}

} // namespace estsim::fidelity
