#pragma once

#include <cstdint>
#include <random>

namespace monstor {

// Derives independent, replayable generator streams from one master seed.
// Stream k is a function of (master, k) only, so results do not depend on
// which thread ends up running stream k.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::mt19937_64 make_stream(uint64_t master_seed, uint64_t stream_index) {
    uint64_t s = splitmix64(master_seed ^ splitmix64(stream_index + 0x51a9b2c3d4e5f607ULL));
    return std::mt19937_64(s);
}

// Uniform double in [0,1). Hand-rolled so output bytes do not depend on the
// standard library's distribution implementation.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Uniform integer in [lo, hi], inclusive, unbiased (rejection sampling).
inline int64_t uniform_int(std::mt19937_64& gen, int64_t lo, int64_t hi) {
    uint64_t range = static_cast<uint64_t>(hi - lo) + 1;
    if (range == 0) return static_cast<int64_t>(gen());  // full 64-bit range
    uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    uint64_t x;
    do {
        x = gen();
    } while (x >= limit);
    return lo + static_cast<int64_t>(x % range);
}

}  // namespace monstor
