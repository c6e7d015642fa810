#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace srp {

/// SplitMix64 finalizer. Used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Stream seed for (base seed, counter...). Each counter is folded in
/// through one splitmix64 round, so distinct counter tuples give
/// unrelated streams.
constexpr std::uint64_t derive_seed(std::uint64_t base) noexcept { return splitmix64(base); }

template <typename... Rest>
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t counter, Rest... rest) noexcept {
    return derive_seed(splitmix64(base) ^ counter, static_cast<std::uint64_t>(rest)...);
}

/// Seeded random stream. Owns its engine; never shared between threads.
///
/// Uniforms and exponentials are produced from raw 64-bit draws so that
/// output does not depend on the standard library's distribution
/// implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on (0, 1).
    double uniform() {
        double u;
        do {
            u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        } while (u == 0.0);
        return u;
    }

    /// Exponential with unit mean.
    double exponential() { return -std::log(uniform()); }

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Lemire's multiply-shift with rejection.
        std::uint64_t x = engine_();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                x = engine_();
                m = static_cast<__uint128_t>(x) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace srp
