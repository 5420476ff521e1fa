#include "arvae/numgrad/rng.hpp"

#include <cmath>
#include <numbers>

namespace arvae::numgrad {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

} // namespace

std::uint64_t splitmix64(std::uint64_t& state)
{
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

SeededRng::SeededRng(std::uint64_t seed) : seed_(seed)
{
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
}

SeededRng SeededRng::substream(std::uint64_t seed, std::uint64_t index)
{
    std::uint64_t mix = seed ^ 0x6a09e667f3bcc909ULL;
    const std::uint64_t a = splitmix64(mix);
    mix ^= index * 0xd1b54a32d192ed03ULL;
    const std::uint64_t b = splitmix64(mix);
    return SeededRng(a ^ rotl(b, 17));
}

std::uint64_t SeededRng::next_u64()
{
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double SeededRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double SeededRng::uniform(double low, double high) { return low + (high - low) * uniform(); }

std::uint64_t SeededRng::uniform_index(std::uint64_t bound)
{
    if (bound <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % bound;
}

double SeededRng::normal()
{
    const double u1 = 1.0 - uniform(); // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

bool SeededRng::bernoulli(double p) { return uniform() < p; }

} // namespace arvae::numgrad
