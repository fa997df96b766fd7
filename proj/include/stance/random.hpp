#pragma once

#include <cstdint>
#include <initializer_list>

#include "stance/common.hpp"

namespace stance {

/// Counter-based stream: output i is splitmix64(key + i * golden), so a stream
/// is fully determined by its key and never shares state with other streams.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) noexcept : state_(key) {}

    /// Key derived from a sequence of identifiers (seed, tree index, node id, ...).
    static CounterRng keyed(std::initializer_list<std::uint64_t> ids) noexcept {
        std::uint64_t key = 0x5851f42d4c957f2dULL;
        for (auto id : ids) key = hash_combine(key, id);
        return CounterRng(key);
    }

    std::uint64_t next() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, bound), bound > 0 (Lemire's multiply-shift with rejection).
    std::uint64_t below(std::uint64_t bound) noexcept {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform double in [0, 1).
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace stance
