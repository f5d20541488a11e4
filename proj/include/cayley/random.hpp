#pragma once

// Seeded randomness. Everything here is bit-reproducible across platforms: the engine
// is std::mt19937_64 (fully specified by the standard) and no std::*_distribution is used.

#include <cstdint>
#include <random>
#include <vector>

namespace cayley {

using Engine = std::mt19937_64;

/// SplitMix64 finaliser.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Per-trial seed: splitmix64(master ^ (trial * 0x9E3779B97F4A7C15)).
constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
    return splitmix64(master ^ (trial * 0x9E3779B97F4A7C15ull));
}

/// Uniform integer in [0, n) by rejection; n > 0.
inline std::uint64_t uniform_below(Engine& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

/// First k entries of a seeded partial Fisher-Yates shuffle of `pool` (order as drawn).
template <typename T>
std::vector<T> sample_without_replacement(Engine& rng, std::vector<T> pool, std::size_t k) {
    if (k > pool.size()) k = pool.size();
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(uniform_below(rng, pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

} // namespace cayley
