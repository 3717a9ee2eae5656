#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "idemx/extenders.hpp"
#include "oracles.hpp"

using namespace idemx;

namespace {

/// p, q isolated; s1 open; s0 with neighbourhood {s0, s1}. X = {p, q}.
SubspaceEmbedding pq_over_sierpinski() {
    const auto y = FiniteTopSpace::from_minimal_basis(
        {"p", "q", "s0", "s1"}, {{"s0", {"s0", "s1"}}, {"s1", {"s1"}}});
    return SubspaceEmbedding(y, 0b0011);
}

SubspaceEmbedding pq_plus_w() {
    return SubspaceEmbedding(FiniteTopSpace::discrete(std::vector<std::string>{"p", "q", "w"}),
                             0b011);
}

std::vector<Mask> nbhds(const FiniteTopSpace& s) { return {s.min_nbhds().begin(), s.min_nbhds().end()}; }

} // namespace

TEST_CASE("build_extender examples") {
    const auto e = pq_plus_w();
    const auto r = retraction_with(e, {0b11});
    const RealFunction f{0, 2};
    CHECK(build_extender(r, e, Extremum::min)(f) == RealFunction{0, 2, 0});
    CHECK(build_extender(r, e, Extremum::max)(f) == RealFunction{0, 2, 2});

    const SubspaceEmbedding whole(fixture::pqw(), 0b111);
    const auto id = retraction_with(whole, {});
    const RealFunction g{3, -1, 4};
    CHECK(build_extender(id, whole, Extremum::min)(g) == g);

    const SetValuedMap bad(e.ambient(), e.subspace(), {0b11, 0b10, 0b01});
    CHECK_ERRC(build_extender(bad, e, Extremum::min), Errc::not_a_retraction);
}

TEST_CASE("extender property and duality on random retractions") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 200; ++t) {
        const std::size_t ny = 2 + rng() % 5;
        const std::size_t k = 1 + rng() % (ny - 1);
        const SubspaceEmbedding e(FiniteTopSpace(fixture::names(ny), fixture::random_preorder(rng, ny)),
                                  full_mask(k));
        std::vector<Mask> off(ny - k);
        for (auto& m : off) {
            m = 1 + rng() % full_mask(k);
        }
        const auto r = retraction_with(e, off);
        const Extender lo = build_extender(r, e, Extremum::min);
        const Extender hi = build_extender(r, e, Extremum::max);
        RealFunction f(k);
        for (auto& v : f) {
            v = static_cast<double>(static_cast<int>(rng() % 17) - 8) / 4.0;
        }
        RealFunction neg(f);
        for (auto& v : neg) {
            v = -v;
        }
        const RealFunction a = lo(f);
        const RealFunction b = hi(f);
        const RealFunction c = lo(neg);
        for (std::size_t i = 0; i < k; ++i) {
            CHECK(a[e.ambient_index(i)] == f[i]);
            CHECK(b[e.ambient_index(i)] == f[i]);
        }
        for (std::size_t y = 0; y < ny; ++y) {
            CHECK(b[y] == -c[y]);
        }
        // Shrinking images can only raise the min-extension.
        std::vector<Mask> wider(off);
        for (auto& m : wider) {
            m |= 1 + rng() % full_mask(k);
        }
        const RealFunction w = build_extender(retraction_with(e, wider), e, Extremum::min)(f);
        for (std::size_t y = 0; y < ny; ++y) {
            CHECK(w[y] <= a[y]);
        }
    }
}

TEST_CASE("function_class examples") {
    const auto s = fixture::sierpinski();
    const auto up = function_class(RealFunction{0, 1}, s);
    CHECK(up.cls == FunctionClass::lsc);
    CHECK_FALSE(up.witnesses.empty());
    CHECK(function_class(RealFunction{2, 2}, s).cls == FunctionClass::continuous);
    CHECK(function_class(RealFunction{1, 0}, s).cls == FunctionClass::usc);
    CHECK(function_class(RealFunction{1, 0, 2}, FiniteTopSpace::from_minimal_basis(
                                                     {"a", "b", "c"}, {{"a", {"a", "b", "c"}}}))
              .cls == FunctionClass::neither);
}

TEST_CASE("function_class agrees with the monotonicity oracle") {
    std::mt19937_64 rng(43);
    for (int t = 0; t < 400; ++t) {
        const std::size_t n = 1 + rng() % 5;
        const auto nb = fixture::random_preorder(rng, n);
        const FiniteTopSpace s(fixture::names(n), nb);
        RealFunction g(n);
        for (auto& v : g) {
            v = static_cast<double>(rng() % 4);
        }
        const auto rep = function_class(g, s);
        CHECK(rep.lower_semicontinuous() == oracle::lower_semicontinuous(nb, g));
        CHECK(rep.upper_semicontinuous() == oracle::upper_semicontinuous(nb, g));
    }
}

TEST_CASE("semicontinuity implications on the sierpinski examples") {
    const auto e = pq_over_sierpinski();
    // s0 -> {p,q}, s1 -> {p}: usc, not lsc.
    const auto usc_r = retraction_with(e, {0b11, 0b01});
    const auto rep = verify_semicontinuity_theorem(usc_r, e, Extremum::min, 32, 1);
    CHECK(rep.r_usc);
    CHECK_FALSE(rep.r_lsc);
    CHECK(rep.ok());
    for (const auto& f : two_valued_functions(2)) {
        CHECK(function_class(build_extender(usc_r, e, Extremum::min)(f), e.ambient())
                  .lower_semicontinuous());
    }

    // s0 -> {p}, s1 -> {p,q}: lsc, not usc.
    const auto lsc_r = retraction_with(e, {0b01, 0b11});
    const auto rep2 = verify_semicontinuity_theorem(lsc_r, e, Extremum::min, 32, 1);
    CHECK(rep2.r_lsc);
    CHECK_FALSE(rep2.r_usc);
    CHECK(rep2.ok());
    for (const auto& f : two_valued_functions(2)) {
        CHECK(function_class(build_extender(lsc_r, e, Extremum::min)(f), e.ambient())
                  .upper_semicontinuous());
    }

    const SubspaceEmbedding whole(fixture::pqw(), 0b111);
    const auto id_rep = verify_semicontinuity_theorem(retraction_with(whole, {}), whole,
                                                      Extremum::max, 16, 1);
    CHECK(id_rep.r_usc);
    CHECK(id_rep.r_lsc);
    CHECK(id_rep.ok());
}

TEST_CASE("induced functionals carry the extender axioms") {
    const auto e = pq_over_sierpinski();
    const auto r = retraction_with(e, {0b11, 0b01});
    for (Extremum kind : {Extremum::min, Extremum::max}) {
        const Extender u = build_extender(r, e, kind);
        for (std::size_t y = 0; y < 4; ++y) {
            for (Axiom a : extender_axioms(kind)) {
                CHECK(check_axiom(u.functional_at(y), a, 200, 0.0, y).pass);
            }
        }
    }
}

TEST_CASE("supports_retraction recovers every map on a small instance") {
    const auto e = pq_over_sierpinski();
    for (Mask a = 1; a <= 3; ++a) {
        for (Mask b = 1; b <= 3; ++b) {
            const auto r = retraction_with(e, {a, b});
            CHECK(supports_retraction(build_extender(r, e, Extremum::min)) == r);
            CHECK(supports_retraction(build_extender(r, e, Extremum::max)) == r);
        }
    }
    const SubspaceEmbedding whole(fixture::pqw(), 0b111);
    const auto id = retraction_with(whole, {});
    CHECK(supports_retraction(build_extender(id, whole, Extremum::min)) == id);
}

TEST_CASE("mean at an outside point cannot be classified") {
    const auto e = pq_plus_w();
    const Extender u = extender_from_functionals(e, {arithmetic_mean(2)});
    try {
        supports_retraction(u);
        FAIL("expected ClassificationFailed");
    } catch (const Error& err) {
        CHECK(err.code() == Errc::classification_failed);
        CHECK(err.field() == "w");
    }
}

TEST_CASE("e operator examples") {
    const auto e = pq_plus_w();
    const auto r = retraction_with(e, {0b01});
    const Extender u = build_extender(r, e, Extremum::max);
    const auto res = e_operator(u, 0b01, EVariant::max_usc);
    CHECK(res.set == 0b101);
    CHECK(res.attained_by[2] == 1);
    CHECK_FALSE(res.schedule_limited);
    CHECK(e_operator(u, 0b11, EVariant::max_usc).set == 0b111);
    CHECK(e_operator(u, 0, EVariant::max_usc).set == 0);

    const Extender flat = extender_from_functionals(
        e, {Functional(2, [](std::span<const double>) { return 0.0; }, "0")});
    CHECK_ERRC(e_operator(flat, 0b01, EVariant::max_usc), Errc::not_normalized);

    const auto s = pq_over_sierpinski();
    const Extender v = build_extender(retraction_with(s, {0b11, 0b01}), s, Extremum::max);
    CHECK(e_operator(v, 0b01, EVariant::max_usc).set == 0b1001);
}

TEST_CASE("e operator matches the upper preimage for usc retractions") {
    std::mt19937_64 rng(47);
    for (int t = 0; t < 60; ++t) {
        const std::size_t ny = 2 + rng() % 4;
        const std::size_t k = 1 + rng() % (ny - 1);
        const SubspaceEmbedding e(FiniteTopSpace::discrete(fixture::names(ny)), full_mask(k));
        std::vector<Mask> off(ny - k);
        for (auto& m : off) {
            m = 1 + rng() % full_mask(k);
        }
        const auto r = retraction_with(e, off);
        const Extender u = build_extender(r, e, Extremum::max);
        for (Mask open = 0; open <= full_mask(k); ++open) {
            CHECK(e_operator(u, open, EVariant::max_usc).set ==
                  oracle::upper_preimage(r.images(), open));
        }
    }
}

TEST_CASE("recovery through e") {
    const auto e = pq_plus_w();
    for (Mask w = 1; w <= 3; ++w) {
        const auto r = retraction_with(e, {w});
        CHECK(recover_retraction_via_e(build_extender(r, e, Extremum::max), EVariant::max_usc) == r);
        CHECK(recover_retraction_via_e(build_extender(r, e, Extremum::min), EVariant::min_lsc) == r);
    }
    // The outside point never drops below 1: default branch gives all of X.
    const Extender blind = extender_from_functionals(
        e, {Functional(2, [](std::span<const double>) { return 1.0; }, "1")});
    const auto rec = recover_retraction_via_e(blind, EVariant::max_usc);
    CHECK(rec.image(0) == 0b01);
    CHECK(rec.image(1) == 0b10);
    CHECK(rec.image(2) == 0b11);
}

TEST_CASE("e is multiplicative and monotone for retraction extenders") {
    const auto e = pq_over_sierpinski();
    const auto r = retraction_with(e, {0b11, 0b01});
    const auto rep = check_e_multiplicative(build_extender(r, e, Extremum::max), EVariant::max_usc);
    CHECK(rep.ok());
    CHECK(rep.pairs_checked == 16);

    const Extender mean = extender_from_functionals(pq_plus_w(), {arithmetic_mean(2)});
    CHECK_ERRC(check_e_multiplicative(mean, EVariant::max_usc), Errc::axiom_precheck_failed);
}

TEST_CASE("connectivity analysis") {
    // X = Y: identity.
    const SubspaceEmbedding whole(FiniteTopSpace::discrete(3), 0b111);
    const auto rep = connectivity_analysis(build_extender(retraction_with(whole, {}), whole,
                                                          Extremum::max));
    CHECK(rep.g == 0b111);
    CHECK(rep.singleton_valued);
    CHECK(rep.connected_valued);

    // Discrete X: a Dirac functional at w gives a singleton value there.
    const auto e = pq_plus_w();
    const auto d = connectivity_analysis(extender_from_functionals(e, {dirac(1, 2)}));
    CHECK(d.g == 0b111);
    CHECK(d.singleton_valued);
    REQUIRE(d.recovered.has_value());
    CHECK(d.recovered->image(2) == 0b10);

    // Retraction onto a Sierpinski X with r(w) = {0, 1}: min over {0,1} does
    // not preserve max, so the precheck refuses; the recovered values are
    // still connected.
    const auto y = FiniteTopSpace::from_minimal_basis({"0", "1", "w"}, {{"0", {"0", "1"}}});
    const SubspaceEmbedding se(y, 0b011);
    const auto r = retraction_with(se, {0b11});
    const Extender u = build_extender(r, se, Extremum::max);
    CHECK_ERRC(connectivity_analysis(u), Errc::axiom_precheck_failed);
    const auto rec = recover_retraction_via_e(u, EVariant::max_usc);
    CHECK(rec.image(2) == 0b11);
    CHECK(oracle::connected(nbhds(se.subspace()), rec.image(2)));
    CHECK(is_connected_valued(rec));
}

TEST_CASE("max-and-min preserving extenders on discrete X have singleton values") {
    // Every mu_y is evaluation of a monotone one-variable map at one point,
    // or a constant; exhaustive over one extra point for |X| <= 3.
    for (std::size_t k = 1; k <= 3; ++k) {
        const SubspaceEmbedding e(FiniteTopSpace::discrete(k + 1), full_mask(k));
        for (std::size_t x = 0; x < k; ++x) {
            for (int variant = 0; variant < 3; ++variant) {
                Functional mu = variant == 0 ? dirac(x, k)
                                : variant == 1
                                    ? Functional(k, [x](std::span<const double> f) { return std::min(f[x], 1.0); }, "m")
                                    : Functional(k, [x](std::span<const double> f) { return 2 * f[x] - 1; }, "a");
                const auto rep = connectivity_analysis(extender_from_functionals(e, {mu}));
                CHECK(rep.singleton_valued);
                CHECK(contains(rep.g, k));
                REQUIRE(rep.recovered.has_value());
                CHECK(rep.recovered->image(rep.recovered->domain().size() - 1) == bit(x));
            }
        }
    }
}
