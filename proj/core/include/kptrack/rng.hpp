// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file rng.hpp
/// \brief Portable seeded RNG: xoshiro256** seeded through SplitMix64.
///
/// Every draw has a fixed cost in raw 64-bit words, so a stream of calls
/// produces identical values on every platform and standard library
/// (unlike the std:: distributions, whose algorithms are unspecified):
///   uniform01 / uniform / bernoulli   1 word
///   uniform_int                        1 word per rejection round
///   normal                             2 words (Box-Muller, no caching)
///   poisson                            1 word per Knuth product step

#include <cmath>
#include <cstdint>
#include <numbers>

namespace kptrack {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept
    {
        SplitMix64 sm(seed);
        for (auto& s : s_)
            s = sm.next();
    }

    /// Independent stream derived from (seed, stream id).
    static Rng stream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    {
        SplitMix64 mix(seed ^ (0xd1b54a32d192ed03ULL * (stream_id + 1)));
        return Rng(mix.next());
    }

    std::uint64_t next_u64() noexcept
    {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [lo, hi] (inclusive), unbiased by rejection.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept
    {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0)
            return static_cast<std::int64_t>(next_u64());
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % span);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return lo + static_cast<std::int64_t>(x % span);
    }

    bool bernoulli(double p) noexcept { return uniform01() < p; }

    double normal(double mean = 0.0, double sigma = 1.0) noexcept
    {
        const double u1 = 1.0 - uniform01(); // (0, 1]
        const double u2 = uniform01();
        return mean + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::int64_t poisson(double lambda) noexcept
    {
        if (!(lambda > 0.0))
            return 0;
        const double limit = std::exp(-lambda);
        std::int64_t k = 0;
        double p = uniform01();
        while (p > limit) {
            ++k;
            p *= uniform01();
        }
        return k;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4]{};
};

} // namespace kptrack
