#pragma once

#include <cmath>
#include <cstdint>

namespace estsim::rng {

// SplitMix64 step; used for seeding and for deriving independent sub-streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic stream derivation: one master seed fans out to per-shot /
// per-purpose seeds so results never depend on execution order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index = 0) {
    std::uint64_t s = master;
    (void)splitmix64(s);
    s ^= 0xd1b54a32d192ed03ULL * (stream + 1);
    (void)splitmix64(s);
    s ^= 0x8cb92ba72f3d8dd7ULL * (index + 1);
    std::uint64_t t = s;
    return splitmix64(t);
}

// xoshiro256++ (Blackman & Vigna). Small, fast, and owned by the project so
// byte-identical replay is a guarantee, not a stdlib accident.
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed = 1) { reseed(seed); }

    void reseed(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : state_) w = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Exponential with mean `tau`.
    double exponential(double tau) {
        double u;
        do { u = uniform(); } while (u <= 0.0);
        return -tau * std::log1p(-u);
    }

    // Standard normal via Box-Muller; one spare value is cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1;
        do { u1 = uniform(); } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

    bool bernoulli(double p) { return uniform() < p; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4]{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Stream tags used when deriving per-shot sub-streams.
enum class Stream : std::uint64_t {
    shot_events = 1,
    trace_noise = 2,
    field_draw = 3,
    chain = 4,
    aux = 5,
};

inline std::uint64_t derive_seed(std::uint64_t master, Stream stream,
                                 std::uint64_t index = 0) {
    return derive_seed(master, static_cast<std::uint64_t>(stream), index);
}

} // namespace estsim::rng
