#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "idemx/hyperspace.hpp"
#include "oracles.hpp"

using namespace idemx;

TEST_CASE("hausdorff distance examples") {
    const double xs[] = {0.0, 0.5, 1.0};
    const auto m = MetricSpace::on_line(xs);
    CHECK(oracle::hausdorff(m.matrix(), 0b001, 0b110) == 1.0);
    CHECK(hausdorff_distance(HyperPoint(3, 0b001), HyperPoint(3, 0b110), m) == 1.0);
    CHECK(hausdorff_distance(HyperPoint(3, 0b110), HyperPoint(3, 0b110), m) == 0.0);
    CHECK(hausdorff_distance(HyperPoint(3, 0b001), HyperPoint(3, 0b001), m) == 0.0);
}

TEST_CASE("hausdorff distance matches the oracle on random grids") {
    std::mt19937_64 rng(19);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 2 + rng() % 6;
        std::vector<double> xs;
        for (std::size_t i = 0; i < n; ++i) {
            xs.push_back(static_cast<double>(i) + static_cast<double>(rng() % 8) / 16.0);
        }
        const auto m = MetricSpace::on_line(xs);
        const Mask f = 1 + rng() % full_mask(n);
        const Mask g = 1 + rng() % full_mask(n);
        CHECK(hausdorff_distance(HyperPoint(n, f), HyperPoint(n, g), m) ==
              oracle::hausdorff(m.matrix(), f, g));
    }
}

TEST_CASE("hyperpoints are nonempty") {
    CHECK_ERRC(HyperPoint(3, 0), Errc::empty_set);
    CHECK_ERRC(HyperPoint(2, 0b100), Errc::invariant_violation);
}

TEST_CASE("vietoris neighbourhoods") {
    const auto x = FiniteTopSpace::discrete(std::vector<std::string>{"a", "b", "c"});
    const VietorisNbhd both(x, {0b001, 0b010}, VietorisMode::full);
    CHECK(vietoris_contains(both, HyperPoint(3, 0b011)));
    CHECK_FALSE(vietoris_contains(both, HyperPoint(3, 0b001)));
    const VietorisNbhd up(x, {0b011}, VietorisMode::upper);
    CHECK(vietoris_contains(up, HyperPoint(3, 0b001)));
    CHECK_FALSE(vietoris_contains(up, HyperPoint(3, 0b101)));
    const VietorisNbhd low(x, {0b001, 0b100}, VietorisMode::lower);
    CHECK(vietoris_contains(low, HyperPoint(3, 0b111)));
    CHECK_FALSE(vietoris_contains(low, HyperPoint(3, 0b011)));

    CHECK_ERRC(VietorisNbhd(x, {0b001, 0b010}, VietorisMode::upper), Errc::mode_arity);
    CHECK_ERRC(VietorisNbhd(x, {}, VietorisMode::full), Errc::mode_arity);
    CHECK_ERRC(VietorisNbhd(fixture::sierpinski(), {0b01}, VietorisMode::lower),
               Errc::invariant_violation);
}

TEST_CASE("upper neighbourhoods are down-closed and lower ones up-closed") {
    const auto x = FiniteTopSpace::discrete(4);
    for (Mask u = 1; u <= 0b1111; ++u) {
        const VietorisNbhd up(x, {u}, VietorisMode::upper);
        const VietorisNbhd low(x, {u}, VietorisMode::lower);
        for (Mask f = 1; f <= 0b1111; ++f) {
            for (Mask g = 1; g <= 0b1111; ++g) {
                if (!is_subset(g, f)) {
                    continue;
                }
                if (up.contains(HyperPoint(4, f))) {
                    CHECK(up.contains(HyperPoint(4, g)));
                }
                if (low.contains(HyperPoint(4, g))) {
                    CHECK(low.contains(HyperPoint(4, f)));
                }
            }
        }
    }
}

TEST_CASE("enumerate_hyperspace") {
    CHECK(enumerate_hyperspace(FiniteTopSpace::discrete(2)).size() == 3);
    CHECK(enumerate_hyperspace(FiniteTopSpace::discrete(4)).size() == 15);
    const auto one = enumerate_hyperspace(FiniteTopSpace::discrete(1));
    REQUIRE(one.size() == 1);
    CHECK(one[0].member() == 1);
    const auto three = enumerate_hyperspace(FiniteTopSpace::discrete(3));
    for (std::size_t i = 0; i < three.size(); ++i) {
        CHECK(three[i].member() == i + 1);
    }
    CHECK_ERRC(enumerate_hyperspace(FiniteTopSpace::discrete(17)), Errc::too_large);
}

TEST_CASE("phi round trip") {
    const auto r4 = phi_roundtrip(FiniteTopSpace::discrete(4), Extremum::min);
    CHECK(r4.total == 15);
    CHECK(r4.held == 15);
    const auto r1 = phi_roundtrip(FiniteTopSpace::discrete(1), Extremum::min);
    CHECK(r1.total == 1);
    CHECK(r1.ok());
    const auto r3 = phi_roundtrip(FiniteTopSpace::discrete(3), Extremum::max);
    CHECK(r3.held == 7);
    CHECK_ERRC(phi_roundtrip(FiniteTopSpace::discrete(7), Extremum::min), Errc::too_large);
}

TEST_CASE("functional topologies match vietoris topologies") {
    for (std::size_t n = 1; n <= 4; ++n) {
        CHECK(vietoris_correspondence(n, Extremum::min, FunctionalTopology::pointwise,
                                      VietorisMode::full)
                  .homeomorphic);
        CHECK(vietoris_correspondence(n, Extremum::min, FunctionalTopology::lower_sets,
                                      VietorisMode::upper)
                  .homeomorphic);
        CHECK(vietoris_correspondence(n, Extremum::max, FunctionalTopology::upper_sets,
                                      VietorisMode::upper)
                  .homeomorphic);
        CHECK(vietoris_correspondence(n, Extremum::min, FunctionalTopology::upper_sets,
                                      VietorisMode::lower)
                  .homeomorphic);
        CHECK(vietoris_correspondence(n, Extremum::max, FunctionalTopology::lower_sets,
                                      VietorisMode::lower)
                  .homeomorphic);
    }
}

TEST_CASE("mismatched topologies are told apart") {
    // The upper half alone is strictly coarser than the full Vietoris
    // topology once there are two points.
    CHECK_FALSE(vietoris_correspondence(2, Extremum::min, FunctionalTopology::lower_sets,
                                        VietorisMode::full)
                    .homeomorphic);
    CHECK_FALSE(vietoris_correspondence(2, Extremum::min, FunctionalTopology::lower_sets,
                                        VietorisMode::lower)
                    .homeomorphic);
}
