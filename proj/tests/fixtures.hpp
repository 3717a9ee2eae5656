#ifndef IDEMX_TESTS_FIXTURES_HPP
#define IDEMX_TESTS_FIXTURES_HPP

#include <random>
#include <vector>

#include "idemx/error.hpp"
#include "idemx/spaces.hpp"

namespace fixture {

using idemx::FiniteTopSpace;
using idemx::Mask;

/// Points "0" (closed) and "1" (open).
inline FiniteTopSpace sierpinski() {
    return FiniteTopSpace::from_minimal_basis({"0", "1"}, {{"0", {"0", "1"}}, {"1", {"1"}}});
}

/// p and q share the open point w in every neighbourhood.
inline FiniteTopSpace pqw() {
    return FiniteTopSpace::from_minimal_basis({"p", "q", "w"},
                                              {{"p", {"p", "w"}}, {"q", {"q", "w"}}, {"w", {"w"}}});
}

/// Random preorder via transitive closure of a random relation.
inline std::vector<Mask> random_preorder(std::mt19937_64& rng, std::size_t n) {
    std::vector<Mask> nb(n);
    for (std::size_t i = 0; i < n; ++i) {
        nb[i] = idemx::bit(i);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i && rng() % 3 == 0) {
                nb[i] |= idemx::bit(j);
            }
        }
    }
    for (std::size_t round = 0; round < n; ++round) {
        for (auto& m : nb) {
            Mask grown = m;
            idemx::for_each_bit(m, [&](std::size_t j) { grown |= nb[j]; });
            m = grown;
        }
    }
    return nb;
}

inline std::vector<std::string> names(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back("y" + std::to_string(i));
    }
    return out;
}

} // namespace fixture

/// Asserts that `expr` throws idemx::Error with the given code.
#define CHECK_ERRC(expr, errc)                                                                 \
    do {                                                                                       \
        bool caught_ = false;                                                                  \
        try {                                                                                  \
            (void)(expr);                                                                      \
        } catch (const idemx::Error& e_) {                                                     \
            caught_ = true;                                                                    \
            CHECK(e_.code() == (errc));                                                        \
        }                                                                                      \
        CHECK_MESSAGE(caught_, "expected idemx::Error");                                       \
    } while (false)

#endif // IDEMX_TESTS_FIXTURES_HPP
