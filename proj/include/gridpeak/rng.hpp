#pragma once

#include <cstdint>

namespace gridpeak {

/// SplitMix64 finalizer. Full-avalanche 64-bit mix, stable across platforms.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based uniform draw in [0, 1). The value depends only on the key
/// words, never on call order, so concurrent evaluation cannot perturb a run.
[[nodiscard]] constexpr double uniform01(std::uint64_t seed,
                                         std::uint64_t a,
                                         std::uint64_t b = 0,
                                         std::uint64_t c = 0,
                                         std::uint64_t d = 0) noexcept {
    std::uint64_t h = mix64(seed ^ 0x2545f4914f6cdd1dULL);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    h = mix64(h ^ c);
    h = mix64(h ^ d);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

} // namespace gridpeak
