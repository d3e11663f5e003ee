#pragma once

#include <cstdint>

namespace pstchain {

// SplitMix64 (Steele/Lea/Vigna). Small, fast, and good enough statistically
// for disorder sampling; the point here is a fixed, documented algorithm so
// every realization is reproducible bit-exactly from (master_seed, index).
struct SplitMix64 {
    std::uint64_t state = 0;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform on [0,1) with 53 random bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Independent per-realization stream. Seeding through the avalanche mix
// scatters stream states across the full 2^64 state space, so streams do
// not overlap in practice. Identifier: "splitmix64-streams-v1".
inline SplitMix64 realization_stream(std::uint64_t master_seed, std::uint64_t stream) {
    return SplitMix64{mix64(master_seed + 0x9E3779B97F4A7C15ull * (stream + 1))};
}

inline constexpr const char* kRngAlgorithm = "splitmix64-streams-v1";

} // namespace pstchain
