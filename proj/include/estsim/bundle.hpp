#pragma once

#include "estsim/dsp.hpp"
#include "estsim/tracegen.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace estsim::bundle {

// Trace bundle on disk: a fixed binary header, contiguous 32-bit float
// samples (shot-major), and a human-auditable text sidecar
// (<path>.events.txt) holding each shot's ground truth. Round-trips are
// bit-exact.
struct TraceBundle {
    double sample_rate_mhz = 0.0;
    std::uint64_t seed = 0;
    dsp::Scheme scheme = dsp::Scheme::cds;
    std::vector<tracegen::Trace> traces;
};

struct BundleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_bundle(const std::string& path, const TraceBundle& bundle);
TraceBundle read_bundle(const std::string& path);

} // namespace estsim::bundle
