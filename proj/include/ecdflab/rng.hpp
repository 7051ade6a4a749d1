#pragma once

#include <cstdint>

namespace ecdflab {

// Seed for one reproducible uniform stream. master_seed selects the
// experiment, stream_index selects an independent substream (Monte Carlo
// code uses one substream per trial).
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;
};

namespace detail {

// splitmix64 finalizer (Steele/Lea/Flood; constants from Vigna's
// reference implementation). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

}  // namespace detail

// State derived from (master_seed, stream_index). Bijective in
// stream_index for a fixed master seed, so distinct stream indices can
// never collide.
constexpr std::uint64_t derive_stream_seed(const SeedSpec& seed) noexcept {
    const std::uint64_t master = detail::mix64(seed.master_seed + detail::golden_gamma);
    return detail::mix64(master ^ (detail::mix64(seed.stream_index) + detail::golden_gamma));
}

// splitmix64: a 64-bit counter advanced by the golden gamma and pushed
// through the mixing finalizer. Fixed project-wide; every randomized
// result is a pure function of its SeedSpec.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t state) noexcept : state_(state) {}
    explicit constexpr SplitMix64(const SeedSpec& seed) noexcept
        : state_(derive_stream_seed(seed)) {}

    constexpr std::uint64_t next_u64() noexcept {
        state_ += detail::golden_gamma;
        return detail::mix64(state_);
    }

    // Uniform double in the open interval (0,1): the top 52 bits pick a
    // cell and the value sits at the cell center (k + 0.5) / 2^52, so
    // neither endpoint is ever produced and every value is exact.
    constexpr double next_unit() noexcept {
        return static_cast<double>(next_u64() >> 12) * 0x1.0p-52 + 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

}  // namespace ecdflab
