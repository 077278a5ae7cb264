#pragma once

#include <cstdint>
#include <random>

namespace bellplan {

/// splitmix64 step; the usual finalizer constants.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based seed derivation: the stream for (master, k1, k2) is a pure
/// function of its arguments, so per-point and per-run generators are
/// independent of evaluation order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k1,
                                 std::uint64_t k2 = 0) {
    std::uint64_t s = master;
    std::uint64_t h = splitmix64_next(s);
    s ^= k1 + 0x9E3779B97F4A7C15ULL;
    h ^= splitmix64_next(s);
    s ^= k2 + 0xD1B54A32D192ED03ULL;
    h ^= splitmix64_next(s);
    return h;
}

inline std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t k1,
                                   std::uint64_t k2 = 0) {
    return std::mt19937_64(derive_seed(master, k1, k2));
}

}  // namespace bellplan
