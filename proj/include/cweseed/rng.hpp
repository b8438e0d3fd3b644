// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace cweseed::rng {

/// Uniform draw in [0, n) using rejection sampling over raw mt19937_64
/// output. mt19937_64 is pinned by the language standard, and the rejection
/// loop avoids std::uniform_int_distribution, whose output differs between
/// standard library implementations. Together this makes seeded draws
/// reproducible across platforms.
inline std::uint64_t bounded(std::mt19937_64& gen, std::uint64_t n) {
    if (n == 0) {
        return 0;
    }
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t value;
    do {
        value = gen();
    } while (value >= limit);
    return value % n;
}

} // namespace cweseed::rng
