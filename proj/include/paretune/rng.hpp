#pragma once
#include <cmath>
#include <cstdint>
#include <numbers>

namespace paretune {

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/**
 * Counter-based generator: every draw is a pure function of (seed, stream, counter).
 *
 * Draws do not depend on call order, so candidates scored in any order see the
 * same numbers, and output is identical across standard library implementations
 * (std::*_distribution is implementation-defined).
 */
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_(mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL)))
    {}

    constexpr std::uint64_t bits(std::uint64_t counter) const noexcept
    {
        return mix64(key_ ^ mix64(counter));
    }

    /// Uniform on [0, 1).
    constexpr double uniform(std::uint64_t counter) const noexcept
    {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    /// Uniform integer on [0, n).
    constexpr std::uint64_t below(std::uint64_t counter, std::uint64_t n) const noexcept
    {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(bits(counter)) * n) >> 64);
    }

    /// Standard normal via Box-Muller; consumes counters 2c and 2c+1.
    double normal(std::uint64_t counter) const noexcept
    {
        const double u1 = 1.0 - uniform(2 * counter);  // (0, 1]
        const double u2 = uniform(2 * counter + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    constexpr CounterRng derive(std::uint64_t stream) const noexcept
    {
        CounterRng child(0);
        child.key_ = mix64(key_ ^ mix64(stream ^ 0xd1b54a32d192ed03ULL));
        return child;
    }

private:
    std::uint64_t key_;
};

/// Sequential view over a CounterRng for code that just wants "the next draw".
class RngStream {
public:
    explicit constexpr RngStream(CounterRng rng) noexcept : rng_(rng) {}

    double uniform() noexcept { return rng_.uniform(next_++); }
    double normal() noexcept { return rng_.normal(next_++); }
    std::uint64_t below(std::uint64_t n) noexcept { return rng_.below(next_++, n); }

private:
    CounterRng rng_;
    std::uint64_t next_ = 0;
};

} // namespace paretune
