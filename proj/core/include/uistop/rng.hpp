#pragma once

/**
 * @file rng.hpp
 * @brief Seedable counter-streamed RNG and a ziggurat normal sampler.
 *
 * Each Monte-Carlo path draws from its own stream derived from
 * (seed, stream_index), so results are bit-identical no matter how paths
 * are distributed over threads.
 */

#include <cstdint>

namespace uistop {

// SplitMix64 finalizer; also usable as a 64-bit hash.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ with per-stream seeding.
class Rng {
public:
    Rng() : Rng(0, 0) {}
    Rng(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t sm = mix64(seed ^ mix64(stream ^ 0x6a09e667f3bcc909ULL));
        for (auto& w : s_) {
            sm += 0x9e3779b97f4a7c15ULL;
            w = mix64(sm);
        }
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1; // all-zero state is invalid
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Standard normal via 256-layer ziggurat (exact rejection sampler).
    double normal();

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

namespace detail {
struct ZigguratTables {
    double x[257]; // layer right edges, x[0] > x[1] > ... > x[256] = 0
    double y[257]; // pdf values exp(-x^2/2) at the edges
    ZigguratTables();
};
extern const ZigguratTables zig;
} // namespace detail

} // namespace uistop
