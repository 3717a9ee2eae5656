#ifndef IDEMX_SAMPLING_HPP
#define IDEMX_SAMPLING_HPP

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "idemx/mask.hpp"

namespace idemx {

/// SplitMix64 finalizer; derives independent sub-seeds from (seed, index).
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index = 0) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// FNV-1a, used to derive per-suite seeds from names.
constexpr std::uint64_t hash_name(std::string_view name) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

/**
 * Deterministic sampler built on mt19937_64 raw output only (the standard
 * distributions are implementation-defined). Real samples are dyadic
 * rationals k/32 in [-4, 4], so sums with small dyadic constants are exact.
 */
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : engine_() % bound; }
    bool coin(std::uint64_t numerator = 1, std::uint64_t denominator = 2) {
        return below(denominator) < numerator;
    }
    double dyadic() { return (static_cast<double>(below(257)) - 128.0) / 32.0; }
    /// Dyadic value in [lo, hi] on the 1/32 grid; lo, hi multiples of 1/32.
    double dyadic_in(double lo, double hi) {
        const auto steps = static_cast<std::uint64_t>((hi - lo) * 32.0);
        return lo + static_cast<double>(below(steps + 1)) / 32.0;
    }
    std::vector<double> dyadic_vector(std::size_t n) {
        std::vector<double> v(n);
        for (auto& x : v) {
            x = dyadic();
        }
        return v;
    }
    /// Uniform nonempty subset of n points.
    Mask nonempty_subset(std::size_t n) {
        Mask m = 0;
        while (m == 0) {
            m = next() & full_mask(n);
        }
        return m;
    }
    /// Unit-interval double with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

} // namespace idemx

#endif // IDEMX_SAMPLING_HPP
