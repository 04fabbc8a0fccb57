#pragma once

#include <cstdint>

namespace agnodol {

// splitmix64: used only to expand seeds into xoshiro state.
struct SplitMix64 {
    std::uint64_t s;
    std::uint64_t next() {
        std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256**. Per-trial streams are derived as for_stream(seed, trial):
// each trial gets an independent generator from (seed, index) alone, so a
// simulation is reproducible regardless of how trials are partitioned
// across threads.
struct Xoshiro256ss {
    std::uint64_t s[4];

    static Xoshiro256ss for_stream(std::uint64_t seed, std::uint64_t stream) {
        SplitMix64 sm{seed ^ (stream * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL)};
        Xoshiro256ss g;
        for (auto& w : g.s) w = sm.next();
        return g;
    }

    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s[1] * 5, 7) * 9;
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    // uniform double in [0, 1) with 53 random bits
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace agnodol
