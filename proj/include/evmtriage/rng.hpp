// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace evmtriage
{
/// SplitMix64 generator (Steele, Lea & Flood 2014). The standard library's
/// distributions are implementation-defined, so every stochastic step in this
/// library draws from this generator to keep seeded runs bit-identical across
/// platforms and thread schedules.
class SplitMix64
{
public:
    explicit SplitMix64(uint64_t seed) noexcept : state_{seed} {}

    uint64_t next() noexcept
    {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, n), rejection-sampled to avoid modulo bias.
    uint64_t next_below(uint64_t n) noexcept
    {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t r = next();
        while (r >= limit)
            r = next();
        return r % n;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Standard normal via Marsaglia's polar method (no libm distribution
    /// involved, so the stream stays portable).
    double next_gaussian() noexcept
    {
        if (have_spare_)
        {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do
        {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

private:
    uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Derives an independent stream for a (seed, purpose) pair so that e.g.
/// undersampling and splitting with the same iteration seed do not share a
/// sequence.
inline SplitMix64 derive_rng(uint64_t seed, uint64_t stream) noexcept
{
    return SplitMix64{seed ^ (0xd1342543de82ef95ULL * (stream + 1))};
}

/// Stream tags for derive_rng.
namespace rng_stream
{
inline constexpr uint64_t undersample = 1;
inline constexpr uint64_t split = 2;
inline constexpr uint64_t bootstrap = 3;
inline constexpr uint64_t feature_sample = 4;
}  // namespace rng_stream

/// Fisher-Yates shuffle driven by SplitMix64.
template <typename T>
void shuffle(std::vector<T>& v, SplitMix64& rng) noexcept
{
    for (size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[rng.next_below(i)]);
}

/// k distinct indices from [0, n), in selection order (partial Fisher-Yates).
inline std::vector<size_t> sample_without_replacement(size_t n, size_t k, SplitMix64& rng)
{
    std::vector<size_t> pool(n);
    std::iota(pool.begin(), pool.end(), size_t{0});
    if (k > n)
        k = n;
    std::vector<size_t> out;
    out.reserve(k);
    for (size_t i = 0; i < k; ++i)
    {
        const size_t j = i + rng.next_below(n - i);
        std::swap(pool[i], pool[j]);
        out.push_back(pool[i]);
    }
    return out;
}

}  // namespace evmtriage
