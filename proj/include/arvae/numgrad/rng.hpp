#pragma once

#include <array>
#include <cstdint>

namespace arvae::numgrad {

/// Deterministic random source: xoshiro256** seeded through splitmix64.
///
/// The stream depends only on the seed, never on the platform or standard
/// library. Normal deviates use the cosine branch of Box-Muller, one pair of
/// uniforms per deviate, so no hidden cached state exists beyond `state_`.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed = 0);

    /// Independent stream for a (seed, index) pair; used for order-free
    /// per-example generation and for separating init/shuffle/sampling.
    static SeededRng substream(std::uint64_t seed, std::uint64_t index);

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64();
    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform();
    double uniform(double low, double high);
    /// Uniform integer in [0, bound); unbiased (rejection on the top range).
    std::uint64_t uniform_index(std::uint64_t bound);
    double normal();
    bool bernoulli(double p);

    bool operator==(const SeededRng&) const = default;

private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> state_{};
};

std::uint64_t splitmix64(std::uint64_t& state);

} // namespace arvae::numgrad
