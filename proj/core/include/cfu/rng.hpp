#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace cfu {

/// FNV-1a over an identifier string. Used to derive per-trial seeds from a
/// master seed so paired runs share randomness where intended and re-runs
/// are bit-reproducible.
inline uint64_t fnv1a(std::string_view s, uint64_t h = 1469598103934665603ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline uint64_t hash_combine(uint64_t seed, uint64_t v) {
    // splitmix64 finalizer
    v += 0x9e3779b97f4a7c15ull + seed;
    v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ull;
    v = (v ^ (v >> 27)) * 0x94d049bb133111ebull;
    return v ^ (v >> 31);
}

/// Seed for substream `index` of a parent stream. Rollout k of a batch uses
/// substream(seed, k), which makes batches nested: the first K rollouts of a
/// 2K-budget batch are identical to the K-budget batch.
inline uint64_t substream(uint64_t seed, uint64_t index) {
    return hash_combine(seed, index + 1);
}

inline uint64_t derive_seed(uint64_t master, std::string_view key) {
    return hash_combine(master, fnv1a(key));
}

using Rng = std::mt19937_64;

}  // namespace cfu
