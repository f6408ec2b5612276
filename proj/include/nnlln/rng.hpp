#pragma once

#include <array>
#include <cstdint>

namespace nnlln {

/// Seed for every stochastic operation in the library. The same seed with the
/// same configuration yields bit-identical results.
struct Seed {
    std::uint64_t value = 0;
};

namespace detail {

// SplitMix64 step (public-domain construction by Sebastiano Vigna).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace detail

/// Derives the seed of an independent substream (e.g. one Monte Carlo trial).
/// Stream s of base seed v is SplitMix64 applied to v + GOLDEN * (s + 1), so
/// distinct stream ids give distinct, well-mixed sub-seeds.
inline Seed substream(Seed base, std::uint64_t stream) {
    std::uint64_t state = base.value + 0x9e3779b97f4a7c15ULL * (stream + 1);
    return Seed{detail::splitmix64(state)};
}

/// xoshiro256++ generator, state filled from the seed via SplitMix64.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(Seed seed) {
        std::uint64_t state = seed.value;
        for (auto& word : state_) word = detail::splitmix64(state);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl64(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl64(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // UniformRandomBitGenerator interface, so standard algorithms work too.
    std::uint64_t operator()() { return next_u64(); }
    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

private:
    std::array<std::uint64_t, 4> state_{};
};

}  // namespace nnlln
