#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace crl {

/// All randomness flows through mt19937_64 engines. Draw helpers below avoid
/// std::uniform_real_distribution / std::normal_distribution so that the
/// produced stream is fully specified by the engine state alone (the std
/// distributions keep hidden state and differ across library vendors).
using Rng = std::mt19937_64;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace detail

/// Derive an independent named stream from one master seed. Streams are
/// decoupled: consuming more draws from one stream never shifts another.
/// Derivation: seed = splitmix64 chain keyed by master_seed ^ fnv1a64(name).
inline Rng derive_stream(std::uint64_t master_seed, std::string_view name) {
    std::uint64_t key = master_seed ^ detail::fnv1a64(name);
    std::seed_seq seq{detail::splitmix64(key), detail::splitmix64(key),
                      detail::splitmix64(key), detail::splitmix64(key)};
    return Rng(seq);
}

/// Uniform draw on [0, 1) with 53-bit resolution.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform draw on [lo, hi]. Degenerate intervals (lo == hi) return the bound
/// without consuming entropy differently: one draw is always consumed.
inline double uniform(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Uniform integer on {0, ..., n-1}.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    std::size_t i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
    return i < n ? i : n - 1;
}

/// Standard normal via Box-Muller. Consumes exactly two engine draws and
/// keeps no cached second value, so checkpointing the engine state alone
/// restores the stream exactly.
inline double normal01(Rng& rng) {
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace crl
