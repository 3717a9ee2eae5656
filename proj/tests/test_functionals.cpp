#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fixtures.hpp"
#include "idemx/functionals.hpp"
#include "oracles.hpp"

using namespace idemx;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Functional min_over(Mask f, std::size_t n) { return SupportFunctional(Extremum::min, f, n).functional(); }
Functional max_over(Mask f, std::size_t n) { return SupportFunctional(Extremum::max, f, n).functional(); }

RealFunction pointwise(const RealFunction& a, const RealFunction& b, bool take_max) {
    RealFunction out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = take_max ? std::max(a[i], b[i]) : std::min(a[i], b[i]);
    }
    return out;
}

RealFunction shifted(RealFunction f, double c) {
    for (auto& v : f) {
        v += c;
    }
    return f;
}

} // namespace

TEST_CASE("check_axiom examples") {
    CHECK(check_axiom(min_over(0b011, 3), Axiom::weakly_additive, 100, 0.0).pass);

    const Functional mean = arithmetic_mean(2);
    const AxiomReport r = check_axiom(mean, Axiom::preserves_min, 100, 1e-9);
    REQUIRE_FALSE(r.pass);
    REQUIRE(r.witness.has_value());
    const auto& w = *r.witness;
    REQUIRE(w.g.has_value());
    CHECK(w.lhs == doctest::Approx(mean(pointwise(w.f, *w.g, false))));
    CHECK(w.rhs == doctest::Approx(std::min(mean(w.f), mean(*w.g))));
    CHECK(std::abs(w.lhs - w.rhs) > 1e-9);
    // The hand-derived witness from the two-valued sweep.
    const RealFunction f{0, 1};
    const RealFunction g{1, 0};
    CHECK(mean(pointwise(f, g, false)) == 0.0);
    CHECK(std::min(mean(f), mean(g)) == 0.5);

    CHECK(check_axiom(mean, Axiom::normed, 10, 0.0).pass);
    CHECK_ERRC(parse_axiom("associative"), Errc::unknown_axiom);
    CHECK(parse_axiom("weakly_preserves_max") == Axiom::weakly_preserves_max);
}

TEST_CASE("dual") {
    std::mt19937_64 rng(3);
    const Functional d = dual(max_over(0b101, 3));
    const Functional m = min_over(0b101, 3);
    const Functional mean = arithmetic_mean(3);
    for (int t = 0; t < 200; ++t) {
        RealFunction f(3);
        for (auto& v : f) {
            v = static_cast<double>(static_cast<int>(rng() % 257) - 128) / 32.0;
        }
        CHECK(d(f) == m(f));
        CHECK(dual(dual(mean))(f) == mean(f));
        CHECK(dual(mean)(f) == doctest::Approx(mean(f)));
    }
}

TEST_CASE("dual exchanges axiom verdicts") {
    const std::vector<Functional> mus{min_over(0b011, 3), max_over(0b110, 3), dirac(1, 3),
                                      arithmetic_mean(3),
                                      IdempotentDensity::from_reals(RealFunction{0, -1, kNegInf})
                                          .functional()};
    for (const auto& mu : mus) {
        for (Axiom a : kAllAxioms) {
            CHECK_MESSAGE(check_axiom(mu, a, 200, 1e-9, 5).pass ==
                              check_axiom(dual(mu), dual_axiom(a), 200, 1e-9, 5).pass,
                          mu.label(), " ", to_string(a));
        }
    }
}

TEST_CASE("support examples against the exhaustive pair search") {
    const double grid[] = {0.0, 1.0};
    const Functional m = min_over(0b011, 3);
    CHECK(oracle::support([&](auto f) { return m(f); }, 3, grid) == 0b011);
    CHECK(support(m) == 0b011);

    const Functional d = dirac(2, 3);
    CHECK(support(d) == 0b100);

    const Functional mean = arithmetic_mean(3);
    CHECK(oracle::support([&](auto f) { return mean(f); }, 3, grid) == 0b111);
    CHECK(support(mean) == 0b111);
}

TEST_CASE("support of every support functional is its set") {
    const double grid[] = {-1.0, 0.0, 1.0};
    for (std::size_t n = 1; n <= 6; ++n) {
        for (Mask f = 1; f <= full_mask(n); ++f) {
            for (Extremum kind : {Extremum::min, Extremum::max}) {
                const Functional mu = SupportFunctional(kind, f, n).functional();
                CHECK(support(mu) == f);
                if (n <= 4) {
                    CHECK(oracle::support([&](auto g) { return mu(g); }, n, grid) == f);
                }
            }
        }
    }
}

TEST_CASE("support on a non-discrete space is closed") {
    const auto s = fixture::sierpinski();
    // mu = evaluation at the open point 1; its neighbourhood closure adds 0.
    CHECK(support(dirac(1, 2), s) == 0b11);
    CHECK(support(dirac(0, 2), s) == 0b01);
}

TEST_CASE("empty support set is rejected") {
    try {
        SupportFunctional(Extremum::min, 0, 3);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::invariant_violation);
        CHECK(e.field() == "F.nonempty");
    }
}

TEST_CASE("lambda_member examples") {
    const auto x = FiniteTopSpace::discrete(std::vector<std::string>{"a", "b", "c"});
    const Functional m = min_over(0b011, 3);
    CHECK(lambda_member(m, x, 0b001));
    CHECK_FALSE(lambda_member(m, x, 0b100));
    CHECK(lambda_member(m, x, 0b111));
    CHECK_ERRC(lambda_member(arithmetic_mean(3), x, 0b001), Errc::axiom_precheck_failed);
}

TEST_CASE("lambda family of min over {a,b} is every set meeting {a,b}") {
    const auto x = FiniteTopSpace::discrete(3);
    const SubsetFamily fam = lambda_family(min_over(0b011, 3), x);
    std::vector<Mask> want;
    for (Mask a = 1; a <= 0b111; ++a) {
        if ((a & 0b011) != 0) {
            want.push_back(a);
        }
    }
    CHECK(fam.members == want);
}

TEST_CASE("radul_reconstruct examples") {
    const auto x = FiniteTopSpace::discrete(3);
    const RealFunction f{1, 2, 5};
    CHECK(radul_reconstruct(min_over(0b011, 3), x, f) == 1.0);
    CHECK(radul_reconstruct(dirac(0, 3), x, f) == 1.0);
    CHECK(radul_reconstruct(max_over(0b011, 3), x, f) == 2.0);
    CHECK_ERRC(lambda_family(min_over(1, 13), FiniteTopSpace::discrete(13)), Errc::too_large);
}

TEST_CASE("reconstruction and singleton membership on all small support functionals") {
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto x = FiniteTopSpace::discrete(n);
        for (Mask f = 1; f <= full_mask(n); ++f) {
            for (Extremum kind : {Extremum::min, Extremum::max}) {
                const Functional mu = SupportFunctional(kind, f, n).functional();
                const SubsetFamily fam = lambda_family(mu, x);
                for (const auto& g : two_valued_functions(n)) {
                    CHECK(reconstruct(fam, g) == mu(g));
                }
                if (kind == Extremum::min) {
                    Mask singles = 0;
                    for (std::size_t i = 0; i < n; ++i) {
                        singles |= lambda_member(mu, x, bit(i)) ? bit(i) : 0;
                    }
                    CHECK(singles == f);
                }
            }
        }
    }
}

TEST_CASE("classify examples") {
    const Classification c = classify(min_over(0b0110, 4));
    CHECK(c.cls == FunctionalClass::r_min);
    CHECK(c.support == Mask{0b0110});

    const auto dens = IdempotentDensity::from_reals(RealFunction{0, -1});
    const Classification d = classify(dens.functional());
    CHECK(d.cls == FunctionalClass::idempotent_measure);
    CHECK_FALSE(d.is(Extremum::max));
    REQUIRE(d.density.has_value());
    CHECK(d.density->lambda() == dens.lambda());
    // Not R_max: f=(0,5), c=4.
    const RealFunction f{0, 5};
    CHECK(dens(RealFunction{0, 4}) == 3.0);
    CHECK(std::min(dens(f), 4.0) == 4.0);

    const Classification m = classify(arithmetic_mean(3));
    CHECK(m.cls == FunctionalClass::none);
    CHECK_FALSE(m.evidence.empty());
    for (const auto& r : m.evidence) {
        CHECK_FALSE(r.pass);
        CHECK(r.witness.has_value());
    }

    const Classification delta = classify(dirac(1, 3));
    CHECK(delta.is(Extremum::min));
    CHECK(delta.is(Extremum::max));
    CHECK(delta.support == Mask{0b010});
}

TEST_CASE("density_eval examples") {
    CHECK(density_eval(IdempotentDensity::from_reals(RealFunction{0, -1}), RealFunction{2, 5}) ==
          4.0);
    CHECK(density_eval(IdempotentDensity::from_reals(RealFunction{0, kNegInf}),
                       RealFunction{-3, 100}) == -3.0);
    CHECK(density_eval(IdempotentDensity::from_reals(RealFunction{0, 0}), RealFunction{-3, 7}) ==
          7.0);
}

TEST_CASE("density validation") {
    auto field_of = [](const RealFunction& lam) {
        try {
            IdempotentDensity::from_reals(lam);
        } catch (const Error& e) {
            return e.field();
        }
        return std::string("none");
    };
    CHECK(field_of({0, 0.5}) == "lambda.range");
    CHECK(field_of({-1, -2}) == "lambda.normalized");
    CHECK(field_of({0, -2}) == "none");
    CHECK_THROWS_AS(MaxPlusWeight::bottom().value(), Error);
}

TEST_CASE("densities weakly preserve min exactly when zero/bottom valued") {
    const double levels[] = {0.0, -0.5, -1.0, kNegInf};
    for (std::size_t n = 1; n <= 4; ++n) {
        std::size_t combos = 1;
        for (std::size_t i = 0; i < n; ++i) {
            combos *= 4;
        }
        for (std::size_t code = 0; code < combos; ++code) {
            RealFunction lam(n);
            std::size_t c = code;
            for (auto& v : lam) {
                v = levels[c % 4];
                c /= 4;
            }
            if (*std::max_element(lam.begin(), lam.end()) != 0.0) {
                continue;
            }
            const auto dens = IdempotentDensity::from_reals(lam);
            const Functional mu = dens.functional();
            CHECK(check_axiom(mu, Axiom::normed, 50, 0.0).pass);
            CHECK(check_axiom(mu, Axiom::weakly_additive, 50, 0.0).pass);
            CHECK(check_axiom(mu, Axiom::preserves_max, 50, 0.0).pass);
            CHECK_MESSAGE(check_axiom(mu, Axiom::weakly_preserves_min, 300, 0.0).pass ==
                              dens.zero_bottom_valued(),
                          mu.label());
        }
    }
}

TEST_CASE("support functionals satisfy their axioms on all two-valued inputs") {
    // Direct evaluation of each identity, without check_axiom.
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto fs = two_valued_functions(n, -1.0, 1.0);
        for (Mask s = 1; s <= full_mask(n); ++s) {
            const SupportFunctional mu(Extremum::min, s, n);
            CHECK(mu(RealFunction(n, 1.0)) == 1.0);
            for (const auto& f : fs) {
                for (double c : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
                    CHECK(mu(shifted(f, c)) == mu(f) + c);
                    CHECK(mu(pointwise(f, RealFunction(n, c), true)) == std::max(mu(f), c));
                }
                for (const auto& g : fs) {
                    CHECK(mu(pointwise(f, g, false)) == std::min(mu(f), mu(g)));
                }
            }
        }
    }
}

TEST_CASE("table functionals") {
    // min(f(x0), f(x1)) as a table over two points.
    const TableFunctional t(2, {false, false, false, true});
    CHECK(t(RealFunction{3, 5}) == 3.0);
    // max via the table {x0} or {x1} true.
    const TableFunctional u(2, {false, true, true, true});
    CHECK(u(RealFunction{3, 5}) == 5.0);
    CHECK_ERRC(TableFunctional(2, {false, true, false}), Errc::invariant_violation);
    CHECK_ERRC(TableFunctional(2, {true, true, true, true}), Errc::invariant_violation);
    CHECK_ERRC(TableFunctional(2, {false, true, false, false}), Errc::invariant_violation);
    CHECK(classify(t.functional()).cls == FunctionalClass::r_min);
    CHECK(classify(u.functional()).cls == FunctionalClass::r_max);
}

TEST_CASE("structured function families") {
    CHECK(two_valued_functions(3).size() == 8);
    CHECK(two_valued_functions(2, -1, 1)[0b10] == RealFunction{-1, 1});
    CHECK(structured_functions(2).size() >= 8);
}
