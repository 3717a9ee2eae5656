#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "idemx/setmaps.hpp"
#include "oracles.hpp"

using namespace idemx;

namespace {

FiniteTopSpace pq() { return FiniteTopSpace::discrete(std::vector<std::string>{"p", "q"}); }

std::vector<Mask> nbhds(const FiniteTopSpace& s) { return {s.min_nbhds().begin(), s.min_nbhds().end()}; }

} // namespace

TEST_CASE("sierpinski-domain map: usc but not lsc") {
    const auto y = fixture::sierpinski();
    // r(1) = {p}, r(0) = {p,q}
    const SetValuedMap r(y, pq(), {0b11, 0b01});
    CHECK_FALSE(is_lsc(r));
    CHECK(oracle::lsc(nbhds(y), nbhds(pq()), r.images()) == false);
    CHECK(r.lower_preimage(0b10) == 0b01);
    CHECK(is_usc(r));
    CHECK(oracle::usc(nbhds(y), nbhds(pq()), r.images()));
}

TEST_CASE("constant and identity maps are continuous") {
    const auto y = fixture::pqw();
    const SetValuedMap constant(y, pq(), {0b11, 0b11, 0b11});
    CHECK(is_lsc(constant));
    CHECK(is_usc(constant));
    const SetValuedMap id(pq(), pq(), {0b01, 0b10});
    CHECK(is_continuous(id));
}

TEST_CASE("pqw map sending w to p is not usc") {
    const SetValuedMap r(fixture::pqw(), pq(), {0b01, 0b10, 0b01});
    CHECK_FALSE(is_usc(r));
}

TEST_CASE("images are validated") {
    CHECK_ERRC(SetValuedMap(fixture::pqw(), pq(), {0b01, 0b10, 0}), Errc::invariant_violation);
    CHECK_ERRC(SetValuedMap(fixture::pqw(), pq(), {0b01, 0b10}), Errc::invariant_violation);
    CHECK_ERRC(SetValuedMap(fixture::pqw(), pq(), {0b01, 0b10, 0b100}), Errc::invariant_violation);
}

TEST_CASE("retraction predicate") {
    const SubspaceEmbedding e(fixture::pqw(), 0b011);
    CHECK(is_retraction(SetValuedMap(e.ambient(), e.subspace(), {0b01, 0b10, 0b11}), e));
    CHECK_FALSE(is_retraction(SetValuedMap(e.ambient(), e.subspace(), {0b11, 0b10, 0b11}), e));
    const SubspaceEmbedding whole(pq(), 0b11);
    CHECK(is_retraction(SetValuedMap(pq(), whole.subspace(), {0b01, 0b10}), whole));
    CHECK_ERRC(is_retraction(SetValuedMap(pq(), pq(), {0b01, 0b10}), e), Errc::space_mismatch);
}

TEST_CASE("connected values") {
    const SetValuedMap singles(fixture::pqw(), pq(), {0b01, 0b10, 0b01});
    CHECK(is_connected_valued(singles));
    const SetValuedMap spread(fixture::pqw(), pq(), {0b01, 0b10, 0b11});
    CHECK_FALSE(is_connected_valued(spread));
    const auto s = fixture::sierpinski();
    const SetValuedMap onto_s(FiniteTopSpace::discrete(1), s, {0b11});
    CHECK(oracle::connected(nbhds(s), 0b11));
    CHECK(is_connected_valued(onto_s));
}

TEST_CASE("retraction search examples") {
    const auto isolated = FiniteTopSpace::discrete(std::vector<std::string>{"p", "q", "w"});
    const auto found = search_retraction(SubspaceEmbedding(isolated, 0b011), Semicontinuity::usc);
    REQUIRE(found.has_value());
    CHECK(found->image(2) == 0b01);

    CHECK_FALSE(search_retraction(SubspaceEmbedding(fixture::pqw(), 0b011), Semicontinuity::usc));

    const auto same = search_retraction(SubspaceEmbedding(fixture::pqw(), 0b111),
                                        Semicontinuity::continuous);
    REQUIRE(same.has_value());
    CHECK(same->images() == std::vector<Mask>{0b001, 0b010, 0b100});
}

TEST_CASE("no usc retraction exists on pqw: all three candidates fail") {
    const SubspaceEmbedding e(fixture::pqw(), 0b011);
    for (Mask w : {Mask{0b01}, Mask{0b10}, Mask{0b11}}) {
        const std::vector<Mask> images{0b01, 0b10, w};
        CHECK_FALSE(oracle::usc(nbhds(e.ambient()), nbhds(e.subspace()), images));
        CHECK_FALSE(is_usc(retraction_with(e, {w})));
    }
}

TEST_CASE("search is too large beyond a million candidates") {
    const auto y = FiniteTopSpace::discrete(12);
    CHECK_ERRC(search_retraction(SubspaceEmbedding(y, 0b11111), Semicontinuity::usc),
               Errc::too_large);
}

TEST_CASE("semicontinuity agrees with the oracle on random maps") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 300; ++t) {
        const std::size_t ny = 1 + rng() % 5;
        const std::size_t nx = 1 + rng() % 4;
        const auto dy = fixture::random_preorder(rng, ny);
        const auto dx = fixture::random_preorder(rng, nx);
        std::vector<Mask> images(ny);
        for (auto& m : images) {
            m = 1 + rng() % full_mask(nx);
        }
        const SetValuedMap r(FiniteTopSpace(fixture::names(ny), dy),
                             FiniteTopSpace(fixture::names(nx), dx), images);
        CHECK(is_usc(r) == oracle::usc(dy, dx, images));
        CHECK(is_lsc(r) == oracle::lsc(dy, dx, images));
    }
}

TEST_CASE("search results are minimal and satisfy their predicate") {
    std::mt19937_64 rng(29);
    for (int t = 0; t < 120; ++t) {
        const std::size_t ny = 2 + rng() % 5;
        const auto nb = fixture::random_preorder(rng, ny);
        const FiniteTopSpace y(fixture::names(ny), nb);
        const std::size_t k = 1 + rng() % (ny - 1);
        const SubspaceEmbedding e(y, full_mask(k));
        std::vector<std::size_t> xs;
        for (std::size_t i = 0; i < k; ++i) {
            xs.push_back(i);
        }
        const auto sub = nbhds(e.subspace());
        for (Semicontinuity sc :
             {Semicontinuity::usc, Semicontinuity::lsc, Semicontinuity::continuous}) {
            std::optional<std::size_t> best;
            for (const auto& images : oracle::all_retractions(ny, xs)) {
                const bool u = oracle::usc(nb, sub, images);
                const bool l = oracle::lsc(nb, sub, images);
                const bool ok = sc == Semicontinuity::usc ? u : sc == Semicontinuity::lsc ? l : u && l;
                if (ok) {
                    std::size_t total = 0;
                    for (Mask m : images) {
                        total += cardinality(m);
                    }
                    best = best ? std::min(*best, total) : total;
                }
            }
            const auto r = search_retraction(e, sc);
            REQUIRE(r.has_value() == best.has_value());
            if (r) {
                CHECK(satisfies(*r, sc));
                CHECK(is_retraction(*r, e));
                std::size_t total = 0;
                for (Mask m : r->images()) {
                    total += cardinality(m);
                }
                CHECK(total == *best);
            }
        }
    }
}

TEST_CASE("refining the domain never breaks semicontinuity") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 100; ++t) {
        const std::size_t ny = 2 + rng() % 4;
        const auto nb = fixture::random_preorder(rng, ny);
        const std::vector<Mask> images = [&] {
            std::vector<Mask> out(ny);
            for (auto& m : out) {
                m = 1 + rng() % 3;
            }
            return out;
        }();
        const SetValuedMap coarse(FiniteTopSpace(fixture::names(ny), nb), pq(), images);
        const SetValuedMap fine(FiniteTopSpace::discrete(fixture::names(ny)), pq(), images);
        if (is_usc(coarse)) {
            CHECK(is_usc(fine));
        }
        if (is_lsc(coarse)) {
            CHECK(is_lsc(fine));
        }
    }
}
