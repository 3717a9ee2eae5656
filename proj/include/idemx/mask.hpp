#ifndef IDEMX_MASK_HPP
#define IDEMX_MASK_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace idemx {

/// A subset of a finite point set, one bit per positional index.
using Mask = std::uint64_t;

/// Largest point count a Mask can address.
inline constexpr std::size_t kMaxPoints = 63;

constexpr Mask bit(std::size_t i) noexcept { return Mask{1} << i; }

constexpr Mask full_mask(std::size_t n) noexcept {
    return n == 0 ? Mask{0} : (~Mask{0} >> (64 - n));
}

constexpr bool contains(Mask set, std::size_t i) noexcept { return (set >> i) & 1u; }

constexpr bool is_subset(Mask a, Mask b) noexcept { return (a & ~b) == 0; }

inline std::size_t cardinality(Mask m) noexcept {
    return static_cast<std::size_t>(std::popcount(m));
}

/// Positional indices of the set bits, ascending.
inline std::vector<std::size_t> indices_of(Mask m) {
    std::vector<std::size_t> out;
    out.reserve(cardinality(m));
    while (m != 0) {
        out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
        m &= m - 1;
    }
    return out;
}

/// Calls fn(i) for every set bit i of m, ascending.
template <class Fn>
void for_each_bit(Mask m, Fn&& fn) {
    while (m != 0) {
        fn(static_cast<std::size_t>(std::countr_zero(m)));
        m &= m - 1;
    }
}

} // namespace idemx

#endif // IDEMX_MASK_HPP
