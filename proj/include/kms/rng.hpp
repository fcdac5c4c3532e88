#pragma once

#include <cmath>
#include <cstdint>

namespace kms::rng {

/// Counter-based random streams: every draw is a pure function of
/// (seed, stream, counter), so results are reproducible for any thread count
/// or evaluation order.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ (stream * 0xD6E8FEB86659FD93ULL + 0x2545F4914F6CDD1DULL));
    h = splitmix64(h ^ (counter * 0x9E3779B97F4A7C15ULL + 1ULL));
    return h;
}

/// 53 high bits mapped to (0, 1]; never returns 0, safe under log.
inline double to_unit(std::uint64_t x) {
    return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}

inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return to_unit(mix(seed, stream, counter));
}

struct NormalPair {
    double z0, z1;
};

/// Independent standard normal pair (Box-Muller).
inline NormalPair normal_pair(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t counter) {
    const std::uint64_t h1 = mix(seed, stream, counter);
    const std::uint64_t h2 = splitmix64(h1);
    const double u1 = to_unit(h1);
    const double u2 = to_unit(h2);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phase = 6.283185307179586476925286766559 * u2;
    return {r * std::cos(phase), r * std::sin(phase)};
}

}  // namespace kms::rng
