#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace respgraph {

// Draw helpers built directly on the mt19937_64 bit stream. The standard
// <random> distributions are implementation-defined, so anything whose output
// ends up in a frozen test value or a reproducible artifact goes through
// these instead.

/// Unbiased integer in [0, n). n must be > 0.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1]; safe as input to log().
inline double uniform01_open(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

/// Exponential draw with the given mean.
inline double exponential(std::mt19937_64& rng, double mean) {
    return -mean * std::log(uniform01_open(rng));
}

/// Weibull draw (shape beta, scale lambda) by CDF inversion.
inline double weibull(std::mt19937_64& rng, double shape, double scale) {
    return scale * std::pow(-std::log(uniform01_open(rng)), 1.0 / shape);
}

/// Standard normal via Box-Muller.
inline double standard_normal(std::mt19937_64& rng) {
    const double u = uniform01_open(rng);
    const double v = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
}

/// In-place Fisher-Yates shuffle.
template <typename T>
void shuffle(std::mt19937_64& rng, std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[uniform_below(rng, i)]);
    }
}

/// k distinct indices drawn uniformly from [0, n), in random order.
inline std::vector<std::size_t> sample_indices(std::mt19937_64& rng, std::size_t n,
                                               std::size_t k) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    if (k > n) k = n;
    for (std::size_t i = 0; i < k; ++i) {
        std::swap(pool[i], pool[i + uniform_below(rng, n - i)]);
    }
    pool.resize(k);
    return pool;
}

} // namespace respgraph
