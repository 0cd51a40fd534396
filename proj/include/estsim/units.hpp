#pragma once

#include <cmath>

// Unit conventions used throughout: dwell/window times in microseconds,
// evolution times in nanoseconds, frequencies in MHz unless a name says
// otherwise (the three-level pulse solver works in GHz/ns). Field
// differences are stored as frequencies; the mT conversion below exists
// for configs quoted in field units.

namespace estsim::units {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 6.28318530717958647692;

// Electron g-factor (GaAs) and Bohr magneton over Planck's constant.
inline constexpr double kGFactor = -0.44;
inline constexpr double kBohrMagnetonMhzPerMt = 13.996244936; // mu_B/h

inline double field_mt_to_mhz(double mt) {
    return std::abs(kGFactor) * kBohrMagnetonMhzPerMt * mt;
}

inline constexpr double kBoltzmannEvPerK = 8.617333262e-5;
inline constexpr double kPlanckEvS = 4.135667696e-15;

// Ensemble dephasing time (ns) for Gaussian frequency noise of std dev
// sigma (MHz): T2* = 1/(sqrt(2) pi sigma).
inline double t2_star_ns(double sigma_mhz) {
    return 1e3 / (std::sqrt(2.0) * kPi * sigma_mhz);
}

} // namespace estsim::units
