#pragma once

#include "sqfv/common.hpp"

namespace sqfv {

// Fixed default so every run is reproducible unless the user passes --seed.
inline constexpr u64 kDefaultSeed = 0x5eedbea75eedbea7ULL;

// splitmix64: small, fast, and statistically fine for factoring/base picking.
struct SplitMix64 {
    u64 state;
    explicit SplitMix64(u64 seed) : state(seed) {}
    u64 next() {
        u64 z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform-ish value in [0, n); the modulo bias is irrelevant here (any
    // sample works, we only care about reproducibility)
    u64 below(u64 n) { return next() % n; }
};

// Derive an independent deterministic stream for a subtask (a prime, an
// argument d, ...) so results never depend on thread scheduling.
inline u64 mix_seed(u64 seed, u64 salt) {
    SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ULL * (salt + 0x100001b3ULL)));
    g.next();
    return g.next();
}

}  // namespace sqfv
