// SPDX-License-Identifier: Apache-2.0
//
// Deterministic, platform-stable PRNG plumbing. All randomness in the
// simulator flows through xoshiro256++ streams derived from (seed, stream id)
// with splitmix64, so a (config, seed) pair reproduces every artifact.
#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "adisar/types.hpp"

namespace adisar {

/// splitmix64 step (Steele/Lea/Vigna). Also usable as a stateless mixer.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Stateless mix of a single value (used for sweep seed derivation).
inline uint64_t splitmix64_mix(uint64_t x) {
    uint64_t s = x;
    return splitmix64(s);
}

/// xoshiro256++ (Blackman/Vigna), seeded via splitmix64.
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    /// Substream for one frame (or other indexed unit) of a run.
    static Xoshiro256pp for_stream(uint64_t seed, uint64_t stream) {
        return Xoshiro256pp(seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
    }

    uint64_t next() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller. Consumes two uniforms per pair.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return mag * std::cos(2.0 * M_PI * u2);
    }

    /// Circular complex Gaussian with total variance `var`.
    cplx cgaussian(double var) {
        const double s = std::sqrt(var / 2.0);
        const double re = gaussian();
        const double im = gaussian();
        return {s * re, s * im};
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4]{};
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Stream ids reserved by the pipeline. Frame m uses stream m.
enum : uint64_t { kSceneStream = 0x100000000ULL };

}  // namespace adisar
