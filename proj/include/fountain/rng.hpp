#pragma once

#include <cstdint>

namespace fountain {

/// splitmix64 with the published constants. Every random choice a codec
/// makes goes through this generator so streams replay bit-identically.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform01() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [0, bound) via the multiply-high mapping. bound must be > 0.
    std::uint64_t below(std::uint64_t bound) noexcept {
        __extension__ using u128 = unsigned __int128;
        return static_cast<std::uint64_t>((static_cast<u128>(next()) * bound) >> 64);
    }

    bool bernoulli(double p) noexcept { return uniform01() < p; }

    std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

/// Derives an independent child seed (trial i of a sweep, packet j of a stream).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
    SplitMix64 rng(base ^ (index * 0xD1B54A32D192ED03ULL));
    rng.next();
    return rng.next();
}

}  // namespace fountain
