#include "idemx/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "idemx/error.hpp"
#include "idemx/extenders.hpp"
#include "idemx/hyperspace.hpp"
#include "idemx/sampling.hpp"

namespace idemx {

namespace {

struct Case {
    json instance;
    std::uint64_t seed = 0;
};

using Generator = std::function<std::vector<Case>(const CampaignConfig&, std::uint64_t)>;
using Checker = std::function<CaseVerdict(const json&, std::uint64_t, double)>;

struct Suite {
    std::string name;
    Generator generate;
    Checker check;
};

CaseVerdict fail(std::string detail) { return CaseVerdict{false, std::move(detail)}; }

SearchOptions options(std::uint64_t seed, double tol) {
    SearchOptions o;
    o.seed = seed;
    o.tol = tol;
    return o;
}

std::string set_text(const FiniteTopSpace& space, Mask m) {
    std::string out = "{";
    bool first = true;
    for (const auto& name : space.names_of(m)) {
        out += (first ? "" : ",") + name;
        first = false;
    }
    return out + "}";
}

std::string map_text(const SetValuedMap& r) { return map_to_json(r).dump(); }

std::vector<std::string> labels(std::string_view prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(std::string(prefix) + std::to_string(i));
    }
    return out;
}

std::int64_t cap_of(const CampaignConfig& cfg, std::string_view suite, std::string_view key,
                    std::int64_t fallback) {
    for (const auto& [k, v] : cfg.size_caps) {
        if (k == std::string(suite) + "." + std::string(key)) {
            return v;
        }
    }
    const auto it = cfg.size_caps.find(std::string(key));
    return it == cfg.size_caps.end() ? fallback : it->second;
}

std::vector<Mask> closed_preorder(std::vector<Mask> nb) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& m : nb) {
            Mask grown = m;
            for_each_bit(m, [&](std::size_t j) { grown |= nb[j]; });
            if (grown != m) {
                m = grown;
                changed = true;
            }
        }
    }
    return nb;
}

FiniteTopSpace random_space(Sampler& s, std::size_t n) {
    std::vector<Mask> nb(n);
    for (std::size_t i = 0; i < n; ++i) {
        nb[i] = bit(i);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i && s.coin(1, 3)) {
                nb[i] |= bit(j);
            }
        }
    }
    return FiniteTopSpace(labels("y", n), closed_preorder(std::move(nb)));
}

Mask random_subset_of_size(Sampler& s, std::size_t n, std::size_t k) {
    Mask m = 0;
    while (cardinality(m) < k) {
        m |= bit(s.below(n));
    }
    return m;
}

/// Random embedding; X is made discrete when asked, falling back to a
/// discrete ambient space after a few attempts.
SubspaceEmbedding random_embedding(Sampler& s, std::size_t n, std::size_t k, bool discrete_x) {
    for (int attempt = 0; attempt < 32; ++attempt) {
        SubspaceEmbedding e(random_space(s, n), random_subset_of_size(s, n, k));
        if (!discrete_x || e.subset_discrete()) {
            return e;
        }
    }
    return SubspaceEmbedding(FiniteTopSpace::discrete(labels("y", n)), full_mask(k));
}

/// Calls fn(r) for every map with r|X the identity, in index order.
template <class Fn>
void for_each_retraction(const SubspaceEmbedding& e, Fn&& fn) {
    const std::size_t nx = e.subspace().size();
    const std::size_t free = e.ambient().size() - nx;
    std::vector<Mask> off(free, 1);
    while (true) {
        fn(retraction_with(e, off));
        std::size_t k = 0;
        while (k < free && off[k] == full_mask(nx)) {
            off[k++] = 1;
        }
        if (k == free) {
            return;
        }
        ++off[k];
    }
}

std::size_t retraction_count(const SubspaceEmbedding& e) {
    const std::size_t per = full_mask(e.subspace().size());
    std::size_t total = 1;
    for (std::size_t k = e.subspace().size(); k < e.ambient().size(); ++k) {
        total *= per;
        if (total > kMaxRetractionCandidates) {
            return kMaxRetractionCandidates + 1;
        }
    }
    return total;
}

std::size_t total_size(const SetValuedMap& r) {
    std::size_t t = 0;
    for (Mask m : r.images()) {
        t += cardinality(m);
    }
    return t;
}

/// Pointwise max(f) = -min(-f) for every two-valued f.
std::optional<std::string> extender_duality(const SetValuedMap& r, const SubspaceEmbedding& e) {
    const Extender lo = build_extender(r, e, Extremum::min);
    const Extender hi = build_extender(r, e, Extremum::max);
    for (const auto& f : two_valued_functions(e.subspace().size(), -1.0, 2.0)) {
        RealFunction neg(f.size());
        std::transform(f.begin(), f.end(), neg.begin(), [](double v) { return -v; });
        const RealFunction a = hi(f);
        const RealFunction b = lo(neg);
        for (std::size_t y = 0; y < a.size(); ++y) {
            if (a[y] != -b[y]) {
                return "extender duality fails at " + e.ambient().name(y) + " for r=" + map_text(r);
            }
        }
    }
    return std::nullopt;
}

std::vector<Case> seeded(std::vector<json> instances, std::uint64_t suite_seed) {
    std::vector<Case> out;
    out.reserve(instances.size());
    for (std::size_t i = 0; i < instances.size(); ++i) {
        out.push_back(Case{std::move(instances[i]), mix_seed(suite_seed, i)});
    }
    return out;
}

json support_instance(std::size_t n, Mask f, std::optional<Extremum> kind) {
    const FiniteTopSpace x = FiniteTopSpace::discrete(n);
    json j{{"points", x.points()}, {"F", x.names_of(f)}};
    if (kind) {
        j["kind"] = "support";
        j["min"] = *kind == Extremum::min;
    }
    return j;
}

std::vector<std::size_t> sizes_up_to(const CampaignConfig& cfg, std::string_view suite,
                                     std::int64_t fallback) {
    std::vector<std::size_t> out;
    for (std::int64_t n = 1; n <= cap_of(cfg, suite, "X", fallback); ++n) {
        out.push_back(static_cast<std::size_t>(n));
    }
    return out;
}

// ---------------------------------------------------------------- suites

std::vector<Case> gen_thm29(const CampaignConfig& cfg, std::uint64_t seed) {
    // A cap pins |X|; without one every size 1..6 runs.
    std::vector<std::size_t> sizes;
    const std::int64_t cap = cap_of(cfg, "thm29_roundtrip", "X", 0);
    if (cap > 0) {
        sizes.push_back(static_cast<std::size_t>(cap));
    } else {
        sizes = {1, 2, 3, 4, 5, 6};
    }
    std::vector<json> inst;
    for (std::size_t n : sizes) {
        for (Mask f = 1; f <= full_mask(n); ++f) {
            inst.push_back(support_instance(n, f, std::nullopt));
        }
    }
    return seeded(std::move(inst), seed);
}

CaseVerdict check_thm29(const json& j, std::uint64_t seed, double tol) {
    const FiniteTopSpace x = space_from_json(j);
    const Mask f = x.mask_of(j.at("F").get<std::vector<std::string>>(), "F");
    const SearchOptions opts = options(seed, tol);
    for (Extremum kind : {Extremum::min, Extremum::max}) {
        const Functional mu = SupportFunctional(kind, f, x.size()).functional();
        const Classification c = classify(mu, opts);
        const Mask s = support(mu, x, opts);
        if (!c.is(kind) || c.support != f || s != f) {
            return fail(std::string(to_string(kind)) + " kind: classified " +
                        std::string(to_string(c.cls)) + " with support " +
                        (c.support ? set_text(x, *c.support) : "none") + ", support() " +
                        set_text(x, s));
        }
    }
    return {};
}

std::vector<Case> gen_support_functionals(const CampaignConfig& cfg, std::string_view suite,
                                          std::uint64_t seed, bool both_kinds) {
    std::vector<json> inst;
    for (std::size_t n : sizes_up_to(cfg, suite, 5)) {
        for (Mask f = 1; f <= full_mask(n); ++f) {
            inst.push_back(support_instance(n, f, Extremum::min));
            if (both_kinds) {
                inst.push_back(support_instance(n, f, Extremum::max));
            }
        }
    }
    return seeded(std::move(inst), seed);
}

CaseVerdict check_reconstruct(const json& j, std::uint64_t seed, double tol) {
    const FiniteTopSpace x = space_from_json(j);
    const Functional mu = functional_from_json(j, x);
    const SearchOptions opts = options(seed, tol);
    const SubsetFamily family = lambda_family(mu, x, opts);
    for (auto [lo, hi] : {std::pair{0.0, 1.0}, std::pair{-1.0, 1.0}}) {
        for (const auto& f : two_valued_functions(x.size(), lo, hi)) {
            const double want = mu(f);
            const double got = reconstruct(family, f);
            if (got != want) {
                return fail(mu.label() + ": reconstruction " + std::to_string(got) + " != " +
                            std::to_string(want) + " at f=" + json(f).dump());
            }
        }
    }
    Sampler s(seed);
    const RealFunction f = s.dyadic_vector(x.size());
    if (radul_reconstruct(mu, x, f, opts) != mu(f)) {
        return fail(mu.label() + ": radul_reconstruct differs at f=" + json(f).dump());
    }
    return {};
}

CaseVerdict check_cor27(const json& j, std::uint64_t seed, double tol) {
    const FiniteTopSpace x = space_from_json(j);
    const Functional mu = functional_from_json(j, x);
    const SearchOptions opts = options(seed, tol);
    Mask singletons = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (lambda_member(mu, x, bit(i), opts)) {
            singletons |= bit(i);
        }
    }
    const Mask s = support(mu, x, opts);
    if (singletons != s) {
        return fail(mu.label() + ": singleton members " + set_text(x, singletons) +
                    " vs support " + set_text(x, s));
    }
    return {};
}

std::vector<Case> gen_thm31(const CampaignConfig& cfg, std::uint64_t seed) {
    std::vector<json> inst;
    for (std::size_t n : sizes_up_to(cfg, "thm31_bijection", 6)) {
        inst.push_back(json{{"n", n}, {"kind", "min"}});
        inst.push_back(json{{"n", n}, {"kind", "max"}});
    }
    return seeded(std::move(inst), seed);
}

CaseVerdict check_thm31(const json& j, std::uint64_t seed, double tol) {
    const auto n = j.at("n").get<std::size_t>();
    const Extremum kind = extremum_from_json(j.at("kind"));
    const PhiReport phi = phi_roundtrip(FiniteTopSpace::discrete(n), kind, options(seed, tol));
    if (!phi.ok()) {
        return fail(std::to_string(phi.mismatches.size()) + " subsets fail the round trip");
    }
    if (!vietoris_correspondence(n, kind, FunctionalTopology::pointwise, VietorisMode::full)
             .homeomorphic) {
        return fail("pointwise topology differs from the Vietoris topology");
    }
    return {};
}

struct Shadow {
    Extremum kind;
    FunctionalTopology topology;
    VietorisMode mode;
    const char* topology_name;
};

constexpr Shadow kShadows[] = {
    {Extremum::min, FunctionalTopology::lower_sets, VietorisMode::upper, "lower_sets"},
    {Extremum::min, FunctionalTopology::upper_sets, VietorisMode::lower, "upper_sets"},
    {Extremum::max, FunctionalTopology::lower_sets, VietorisMode::lower, "lower_sets"},
    {Extremum::max, FunctionalTopology::upper_sets, VietorisMode::upper, "upper_sets"},
};

std::vector<Case> gen_prop32(const CampaignConfig& cfg, std::uint64_t seed) {
    std::vector<json> inst;
    for (std::size_t n : sizes_up_to(cfg, "prop32_monotone_shadow", 4)) {
        for (std::size_t k = 0; k < std::size(kShadows); ++k) {
            inst.push_back(json{{"n", n}, {"shadow", k}});
        }
    }
    Sampler s(seed);
    const auto count = cap_of(cfg, "prop32_monotone_shadow", "cases", 500);
    for (std::int64_t c = 0; c < count; ++c) {
        const std::size_t n = 1 + s.below(6);
        const Mask g = s.nonempty_subset(n);
        Mask f = 0;
        while (f == 0) {
            f = s.next() & g;
        }
        json j = support_instance(n, f, std::nullopt);
        j["G"] = FiniteTopSpace::discrete(n).names_of(g);
        j["f"] = s.dyadic_vector(n);
        inst.push_back(std::move(j));
    }
    return seeded(std::move(inst), seed);
}

CaseVerdict check_prop32(const json& j, std::uint64_t, double) {
    if (j.contains("shadow")) {
        const Shadow& sh = kShadows[j.at("shadow").get<std::size_t>() % std::size(kShadows)];
        const auto n = j.at("n").get<std::size_t>();
        if (!vietoris_correspondence(n, sh.kind, sh.topology, sh.mode).homeomorphic) {
            return fail(std::string(to_string(sh.kind)) + "/" + sh.topology_name + " does not match " +
                        std::string(to_string(sh.mode)) + " Vietoris");
        }
        return {};
    }
    const FiniteTopSpace x = space_from_json(j);
    const Mask f_set = x.mask_of(j.at("F").get<std::vector<std::string>>(), "F");
    const Mask g_set = x.mask_of(j.at("G").get<std::vector<std::string>>(), "G");
    const RealFunction f = function_from_json(j.at("f"), x);
    const SupportFunctional min_f(Extremum::min, f_set, x.size());
    const SupportFunctional min_g(Extremum::min, g_set, x.size());
    const SupportFunctional max_f(Extremum::max, f_set, x.size());
    const SupportFunctional max_g(Extremum::max, g_set, x.size());
    if (min_g(f) > min_f(f) || max_f(f) > max_g(f)) {
        return fail("monotonicity fails for F c G");
    }
    return {};
}

std::vector<json> random_embeddings(std::uint64_t seed, std::size_t count, std::size_t max_y,
                                    std::size_t max_x, bool discrete_x) {
    Sampler s(seed);
    std::vector<json> out;
    for (std::size_t c = 0; c < count; ++c) {
        const std::size_t n = 2 + s.below(std::max<std::size_t>(max_y, 2) - 1);
        const std::size_t k = 1 + s.below(std::min(max_x, n - 1));
        out.push_back(to_json(random_embedding(s, n, k, discrete_x)));
    }
    return out;
}

std::vector<Case> gen_thm33(const CampaignConfig& cfg, std::uint64_t seed) {
    const auto y = cap_of(cfg, "thm33_roundtrip", "Y", 5);
    const auto count = cap_of(cfg, "thm33_roundtrip", "cases", 40);
    return seeded(random_embeddings(seed, static_cast<std::size_t>(count),
                                    static_cast<std::size_t>(y), 3, true),
                  seed);
}

CaseVerdict check_thm33(const json& j, std::uint64_t seed, double tol) {
    const SubspaceEmbedding e = embedding_from_json(j);
    if (retraction_count(e) > 4096) {
        return fail("instance too large for exhaustive maps");
    }
    const SearchOptions opts = options(seed, tol);
    std::optional<std::string> problem;
    for_each_retraction(e, [&](const SetValuedMap& r) {
        if (problem) {
            return;
        }
        for (Extremum kind : {Extremum::min, Extremum::max}) {
            const SetValuedMap back = supports_retraction(build_extender(r, e, kind), opts);
            if (!(back == r)) {
                problem = std::string(to_string(kind)) + " round trip of " + map_text(r) +
                          " gave " + map_text(back);
                return;
            }
            if (is_continuous(r) && !verify_semicontinuity_theorem(r, e, kind, 4, seed).ok()) {
                problem = "continuous r=" + map_text(r) + " has a non-continuous extension";
                return;
            }
        }
    });
    return problem ? fail(*problem) : CaseVerdict{};
}

/// Minimal-neighbourhood vectors of every preorder on n points.
std::vector<std::vector<Mask>> all_preorders(std::size_t n) {
    std::vector<std::vector<Mask>> out;
    std::vector<Mask> nb(n);
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == n) {
            for (std::size_t p = 0; p < n; ++p) {
                bool ok = true;
                for_each_bit(nb[p], [&](std::size_t q) { ok = ok && is_subset(nb[q], nb[p]); });
                if (!ok) {
                    return;
                }
            }
            out.push_back(nb);
            return;
        }
        const Mask others = full_mask(n) & ~bit(i);
        for (Mask sub = others;; sub = (sub - 1) & others) {
            nb[i] = sub | bit(i);
            self(self, i + 1);
            if (sub == 0) {
                break;
            }
        }
    };
    rec(rec, 0);
    return out;
}

std::vector<Case> gen_forward(const CampaignConfig& cfg, std::string_view suite,
                              std::uint64_t seed) {
    const auto max_y = static_cast<std::size_t>(cap_of(cfg, suite, "Y", 5));
    const auto max_x = static_cast<std::size_t>(cap_of(cfg, suite, "X", 3));
    std::vector<json> inst;
    for (std::size_t n = 2; n <= max_y; ++n) {
        for (const auto& nb : all_preorders(n)) {
            const FiniteTopSpace y(labels("y", n), nb);
            for (std::size_t k = 1; k <= std::min(max_x, n - 1); ++k) {
                bool discrete = true;
                for (std::size_t i = 0; i < k; ++i) {
                    discrete = discrete && (nb[i] & full_mask(k)) == bit(i);
                }
                if (discrete) {
                    inst.push_back(to_json(SubspaceEmbedding(y, full_mask(k))));
                }
            }
        }
    }
    return seeded(std::move(inst), seed);
}

CaseVerdict check_forward(const json& j, std::uint64_t seed, bool usc_side) {
    const SubspaceEmbedding e = embedding_from_json(j);
    const std::string prefix = usc_side ? "usc" : "lsc";
    std::optional<std::string> problem;
    for_each_retraction(e, [&](const SetValuedMap& r) {
        if (problem || !(usc_side ? is_usc(r) : is_lsc(r))) {
            return;
        }
        for (Extremum kind : {Extremum::min, Extremum::max}) {
            const auto rep = verify_semicontinuity_theorem(r, e, kind, 0, seed);
            for (const auto& imp : rep.implications) {
                const bool relevant = imp.name.rfind(prefix, 0) == 0 ||
                                      imp.name.rfind("continuous", 0) == 0;
                if (relevant && imp.applicable && !imp.held) {
                    problem = imp.name + " fails for r=" + map_text(r) +
                              (imp.witness ? " at f=" + json(*imp.witness).dump() : "");
                    return;
                }
            }
            if (!rep.axioms_ok) {
                problem = "axioms fail for r=" + map_text(r) + ": " + rep.axiom_failures.front();
                return;
            }
        }
        problem = extender_duality(r, e);
    });
    return problem ? fail(*problem) : CaseVerdict{};
}

json no_retraction_instance() {
    const FiniteTopSpace y = FiniteTopSpace::from_minimal_basis(
        {"p", "q", "w"}, {{"p", {"p", "w"}}, {"q", {"q", "w"}}, {"w", {"w"}}});
    json j = to_json(SubspaceEmbedding(y, 0b011));
    j["expect_none"] = true;
    return j;
}

std::vector<Case> gen_thm43(const CampaignConfig& cfg, std::uint64_t seed) {
    const auto count = cap_of(cfg, "thm43_recovery", "cases", 60);
    const auto y = cap_of(cfg, "thm43_recovery", "Y", 6);
    return seeded(recovery_corpus(seed, static_cast<std::size_t>(count),
                                  static_cast<std::size_t>(y)),
                  seed);
}

CaseVerdict check_thm43(const json& j, std::uint64_t seed, double tol) {
    const SubspaceEmbedding e = embedding_from_json(j);
    const auto found = search_retraction(e, Semicontinuity::usc);
    if (j.value("expect_none", false)) {
        return found ? fail("expected no usc retraction, found " + map_text(*found)) : CaseVerdict{};
    }
    if (!found) {
        return fail("no usc retraction found");
    }
    const SearchOptions opts = options(seed, tol);
    std::vector<SetValuedMap> maps{*found};
    if (retraction_count(e) <= 512) {
        for_each_retraction(e, [&](const SetValuedMap& r) {
            if (is_usc(r) && !(r == *found)) {
                maps.push_back(r);
            }
        });
    }
    for (const auto& r : maps) {
        const Extender hi = build_extender(r, e, Extremum::max);
        const Extender lo = build_extender(r, e, Extremum::min);
        const SetValuedMap via_e = recover_retraction_via_e(hi, EVariant::max_usc, opts);
        if (!(via_e == r)) {
            return fail("e-recovery of " + map_text(r) + " gave " + map_text(via_e));
        }
        const SetValuedMap via_e_min = recover_retraction_via_e(lo, EVariant::min_lsc, opts);
        if (!(via_e_min == r)) {
            return fail("min-variant e-recovery of " + map_text(r) + " gave " + map_text(via_e_min));
        }
        for (const Extender* u : {&lo, &hi}) {
            const SetValuedMap back = supports_retraction(*u, opts);
            if (!(back == r)) {
                return fail("support recovery of " + u->label() + " gave " + map_text(back));
            }
        }
        const auto m_hi = check_e_multiplicative(hi, EVariant::max_usc, opts);
        const auto m_lo = check_e_multiplicative(lo, EVariant::min_lsc, opts);
        if (!m_hi.ok() || !m_lo.ok()) {
            return fail("e is not multiplicative and monotone for r=" + map_text(r));
        }
        if (auto d = extender_duality(r, e)) {
            return fail(*d);
        }
    }
    return {};
}

// Catalogue of mu_y for the connectivity suite: ops "dirac", "min1",
// "max1", "affine" (2f(x)-1), "const", "min_F", "max_F".
std::vector<json> connectivity_catalogue(std::size_t k) {
    std::vector<json> out;
    for (std::size_t x = 0; x < k; ++x) {
        for (const char* op : {"dirac", "min1", "max1", "affine"}) {
            out.push_back(json{{"op", op}, {"x", x}});
        }
    }
    out.push_back(json{{"op", "const"}});
    for (Mask f = 1; f <= full_mask(k); ++f) {
        if (cardinality(f) >= 2) {
            out.push_back(json{{"op", "min_F"}, {"F", f}});
            out.push_back(json{{"op", "max_F"}, {"F", f}});
        }
    }
    return out;
}

Functional catalogue_functional(const json& entry, std::size_t k) {
    const auto op = entry.at("op").get<std::string>();
    const std::size_t x = entry.value("x", std::size_t{0});
    if (x >= k) {
        throw Error(Errc::invariant_violation, "catalogue point out of range", "mu.x");
    }
    if (op == "dirac") {
        return dirac(x, k);
    }
    if (op == "min1") {
        return Functional(k, [x](std::span<const double> f) { return std::min(f[x], 1.0); },
                          "min(f(x" + std::to_string(x) + "),1)");
    }
    if (op == "max1") {
        return Functional(k, [x](std::span<const double> f) { return std::max(f[x], 1.0); },
                          "max(f(x" + std::to_string(x) + "),1)");
    }
    if (op == "affine") {
        return Functional(k, [x](std::span<const double> f) { return 2.0 * f[x] - 1.0; },
                          "2f(x" + std::to_string(x) + ")-1");
    }
    if (op == "const") {
        return Functional(k, [](std::span<const double>) { return 1.0; }, "1");
    }
    const Mask f = entry.at("F").get<Mask>();
    if (f == 0 || !is_subset(f, full_mask(k))) {
        throw Error(Errc::invariant_violation, "bad catalogue subset", "mu.F");
    }
    if (op == "min_F") {
        return SupportFunctional(Extremum::min, f, k).functional();
    }
    if (op == "max_F") {
        return SupportFunctional(Extremum::max, f, k).functional();
    }
    throw Error(Errc::parse_error, "unknown catalogue op '" + op + "'", "mu.op");
}

std::vector<Case> gen_prop51(const CampaignConfig& cfg, std::uint64_t seed) {
    std::vector<json> inst;
    for (std::size_t k : sizes_up_to(cfg, "prop51_connectivity", 4)) {
        const auto cat = connectivity_catalogue(k);
        for (const auto& a : cat) {
            inst.push_back(json{{"X", k}, {"mu", json::array({a})}});
        }
        for (const auto& a : cat) {
            for (const auto& b : cat) {
                inst.push_back(json{{"X", k}, {"mu", json::array({a, b})}});
            }
        }
    }
    return seeded(std::move(inst), seed);
}

CaseVerdict check_prop51(const json& j, std::uint64_t seed, double tol) {
    const auto k = j.at("X").get<std::size_t>();
    const auto& mus = j.at("mu");
    const SubspaceEmbedding e(FiniteTopSpace::discrete(labels("x", k + mus.size())), full_mask(k));
    std::vector<Functional> off;
    bool expect_valid = true;
    for (const auto& entry : mus) {
        off.push_back(catalogue_functional(entry, k));
        const auto op = entry.at("op").get<std::string>();
        expect_valid = expect_valid && op != "min_F" && op != "max_F";
    }
    const Extender u = extender_from_functionals(e, std::move(off), "catalogue");
    try {
        const ConnectivityReport rep =
            connectivity_analysis(u, EVariant::max_usc, options(seed, tol));
        if (!expect_valid) {
            return fail("precheck accepted a functional that does not preserve max and min");
        }
        if (!rep.singleton_valued || !rep.connected_valued) {
            return fail("recovered values on G are not singletons");
        }
    } catch (const Error& err) {
        if (err.code() != Errc::axiom_precheck_failed || expect_valid) {
            throw;
        }
    }
    return {};
}

json random_table_instance(Sampler& s, const FiniteTopSpace& x) {
    const std::size_t n = x.size();
    const std::size_t size = std::size_t{1} << n;
    // Up-closure of a few random nonempty generators; always contains 1_X.
    std::vector<bool> truth(size, false);
    std::vector<Mask> gens{full_mask(n)};
    for (std::uint64_t g = s.below(3); g > 0; --g) {
        gens.push_back(s.nonempty_subset(n));
    }
    for (Mask m = 0; m < size; ++m) {
        for (Mask g : gens) {
            truth[m] = truth[m] || is_subset(g, m);
        }
    }
    json entries = json::array();
    for (Mask m = 0; m < size; ++m) {
        entries.push_back(json{{"f", x.names_of(m)}, {"value", truth[m] ? 1 : 0}});
    }
    return json{{"points", x.points()}, {"kind", "table"}, {"entries", entries}};
}

std::vector<Case> gen_axioms_fuzz(const CampaignConfig& cfg, std::uint64_t seed) {
    Sampler s(seed);
    std::vector<json> inst;
    const auto count = cap_of(cfg, "axioms_fuzz", "cases", 1000);
    for (std::int64_t c = 0; c < count; ++c) {
        const std::size_t n = 1 + s.below(5);
        const FiniteTopSpace x = FiniteTopSpace::discrete(n);
        switch (s.below(4)) {
        case 0:
            inst.push_back(support_instance(n, s.nonempty_subset(n),
                                            s.coin() ? Extremum::min : Extremum::max));
            break;
        case 1: {
            json lam = json::object();
            const std::size_t top = s.below(n);
            for (std::size_t i = 0; i < n; ++i) {
                if (i == top) {
                    lam[x.name(i)] = 0.0;
                } else if (s.coin()) {
                    lam[x.name(i)] = s.dyadic_in(-1.5, 0.0);
                }
            }
            inst.push_back(json{{"points", x.points()}, {"kind", "density"}, {"lambda", lam}});
            break;
        }
        case 2:
            inst.push_back(json{{"points", x.points()}, {"kind", "mean"}});
            break;
        default:
            inst.push_back(random_table_instance(s, FiniteTopSpace::discrete(std::min<std::size_t>(n, 3))));
            break;
        }
    }
    return seeded(std::move(inst), seed);
}

/// Verdicts that follow from the functional's construction alone.
std::map<Axiom, bool> expected_verdicts(const json& j, std::size_t n) {
    const auto kind = j.at("kind").get<std::string>();
    std::map<Axiom, bool> out;
    if (kind == "support") {
        const bool is_min = j.value("min", true);
        const bool single = j.at("F").size() == 1;
        out = {{Axiom::normed, true},
               {Axiom::weakly_additive, true},
               {Axiom::monotone, true},
               {Axiom::weakly_preserves_max, true},
               {Axiom::weakly_preserves_min, true},
               {Axiom::preserves_min, is_min || single},
               {Axiom::preserves_max, !is_min || single}};
    } else if (kind == "density") {
        std::size_t finite = 0;
        for (const auto& [key, value] : j.at("lambda").items()) {
            finite += value.is_number() ? 1 : 0;
        }
        out = {{Axiom::normed, true},        {Axiom::weakly_additive, true},
               {Axiom::monotone, true},      {Axiom::preserves_max, true},
               {Axiom::weakly_preserves_max, true}, {Axiom::preserves_min, finite == 1}};
    } else if (kind == "mean") {
        const bool single = n == 1;
        out = {{Axiom::normed, true},
               {Axiom::weakly_additive, true},
               {Axiom::monotone, true},
               {Axiom::preserves_max, single},
               {Axiom::preserves_min, single},
               {Axiom::weakly_preserves_max, single},
               {Axiom::weakly_preserves_min, single}};
    } else {
        out = {{Axiom::normed, true},
               {Axiom::weakly_additive, true},
               {Axiom::monotone, true},
               {Axiom::weakly_preserves_max, true},
               {Axiom::weakly_preserves_min, true}};
    }
    return out;
}

CaseVerdict check_axioms_fuzz(const json& j, std::uint64_t seed, double tol) {
    const FiniteTopSpace x = space_from_json(j);
    const Functional mu = functional_from_json(j, x);
    const Functional nu = dual(mu);
    for (const auto& [axiom, want] : expected_verdicts(j, x.size())) {
        const AxiomReport a = check_axiom(mu, axiom, 64, tol, seed);
        if (a.pass != want) {
            return fail(mu.label() + ": " + std::string(to_string(axiom)) +
                        (want ? " rejected" : " accepted"));
        }
        const AxiomReport b = check_axiom(nu, dual_axiom(axiom), 64, tol, seed);
        if (b.pass != want) {
            return fail(nu.label() + ": dual verdict for " + std::string(to_string(axiom)) +
                        " not exchanged");
        }
    }
    const Functional back = dual(nu);
    Sampler s(seed);
    for (int t = 0; t < 32; ++t) {
        const RealFunction f = s.dyadic_vector(x.size());
        if (back(f) != mu(f)) {
            return fail(mu.label() + ": dual is not an involution at f=" + json(f).dump());
        }
    }
    return {};
}

double piecewise_linear(const json& knots, double t) {
    const std::size_t m = knots.size();
    const auto at = [&](std::size_t i, std::size_t c) { return knots[i][c].get<double>(); };
    if (t <= at(0, 0)) {
        return at(0, 1);
    }
    for (std::size_t i = 0; i + 1 < m; ++i) {
        if (t <= at(i + 1, 0)) {
            const double t0 = at(i, 0);
            const double t1 = at(i + 1, 0);
            return at(i, 1) + (at(i + 1, 1) - at(i, 1)) * (t - t0) / (t1 - t0);
        }
    }
    return at(m - 1, 1);
}

std::vector<Case> gen_hausdorff(const CampaignConfig& cfg, std::uint64_t seed) {
    Sampler s(seed);
    std::vector<json> inst;
    const auto count = cap_of(cfg, "hausdorff_lipschitz", "cases", 10000);
    for (std::int64_t c = 0; c < count; ++c) {
        const std::size_t n = 2 + s.below(7);
        Mask used = 0;
        while (cardinality(used) < n) {
            used |= bit(s.below(64));
        }
        std::vector<double> coords;
        for_each_bit(used, [&](std::size_t i) { coords.push_back(static_cast<double>(i) / 8.0); });
        const std::size_t m = 2 + s.below(4);
        Mask knot_pos = 0;
        while (cardinality(knot_pos) < m) {
            knot_pos |= bit(s.below(64));
        }
        json knots = json::array();
        for_each_bit(knot_pos, [&](std::size_t i) {
            knots.push_back(json::array({static_cast<double>(i) / 8.0 - 0.5, s.dyadic()}));
        });
        inst.push_back(json{{"coords", coords},
                            {"F", s.nonempty_subset(n)},
                            {"G", s.nonempty_subset(n)},
                            {"knots", knots}});
    }
    return seeded(std::move(inst), seed);
}

CaseVerdict check_hausdorff(const json& j, std::uint64_t, double tol) {
    const auto coords = j.at("coords").get<std::vector<double>>();
    const MetricSpace metric = MetricSpace::on_line(coords);
    const std::size_t n = coords.size();
    const HyperPoint f_set(n, j.at("F").get<Mask>());
    const HyperPoint g_set(n, j.at("G").get<Mask>());
    const json& knots = j.at("knots");
    double lip = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double dt = knots[i + 1][0].get<double>() - knots[i][0].get<double>();
        const double dv = knots[i + 1][1].get<double>() - knots[i][1].get<double>();
        lip = std::max(lip, std::abs(dv / dt));
    }
    RealFunction f(n);
    for (std::size_t i = 0; i < n; ++i) {
        f[i] = piecewise_linear(knots, coords[i]);
    }
    const double dh = hausdorff_distance(f_set, g_set, metric);
    const double bound = lip * dh + std::min(tol, 1e-12);
    for (Extremum kind : {Extremum::min, Extremum::max}) {
        const double a = SupportFunctional(kind, f_set.member(), n)(f);
        const double b = SupportFunctional(kind, g_set.member(), n)(f);
        if (std::abs(a - b) > bound) {
            return fail(std::string(to_string(kind)) + " gap " + std::to_string(std::abs(a - b)) +
                        " exceeds L*d_H=" + std::to_string(lip * dh));
        }
    }
    return {};
}

std::vector<Case> gen_retraction_search(const CampaignConfig& cfg, std::uint64_t seed) {
    std::vector<json> inst;
    inst.push_back(no_retraction_instance());
    {
        const FiniteTopSpace y = FiniteTopSpace::discrete(std::vector<std::string>{"p", "q", "w"});
        inst.push_back(to_json(SubspaceEmbedding(y, 0b011)));
        inst.push_back(to_json(SubspaceEmbedding(y, 0b111)));
    }
    const auto count = cap_of(cfg, "retraction_search_instances", "cases", 60);
    const auto y = cap_of(cfg, "retraction_search_instances", "Y", 6);
    for (auto& e : random_embeddings(seed, static_cast<std::size_t>(count),
                                     static_cast<std::size_t>(y), 4, false)) {
        inst.push_back(std::move(e));
    }
    return seeded(std::move(inst), seed);
}

CaseVerdict check_retraction_search(const json& j, std::uint64_t, double) {
    const SubspaceEmbedding e = embedding_from_json(j);
    const bool brute = retraction_count(e) <= 4096;
    for (Semicontinuity sc : {Semicontinuity::usc, Semicontinuity::lsc, Semicontinuity::continuous}) {
        const auto r = search_retraction(e, sc);
        const std::string tag(to_string(sc));
        if (j.value("expect_none", false) && sc != Semicontinuity::lsc && r) {
            return fail(tag + ": expected none, found " + map_text(*r));
        }
        if (r && (!is_retraction(*r, e) || !satisfies(*r, sc))) {
            return fail(tag + ": returned map fails its predicate");
        }
        if (!brute) {
            continue;
        }
        std::optional<std::size_t> best;
        for_each_retraction(e, [&](const SetValuedMap& cand) {
            if (satisfies(cand, sc)) {
                const std::size_t t = total_size(cand);
                best = best ? std::min(*best, t) : t;
            }
        });
        if (best.has_value() != r.has_value()) {
            return fail(tag + ": search and enumeration disagree on existence");
        }
        if (r && total_size(*r) != *best) {
            return fail(tag + ": returned map is not of minimal total size");
        }
    }
    return {};
}

const std::vector<Suite>& registry() {
    static const std::vector<Suite> suites = [] {
        std::vector<Suite> s;
        s.push_back({"thm29_roundtrip", gen_thm29, check_thm29});
        s.push_back({"lemma24_reconstruct",
                     [](const CampaignConfig& c, std::uint64_t seed) {
                         return gen_support_functionals(c, "lemma24_reconstruct", seed, true);
                     },
                     check_reconstruct});
        s.push_back({"cor27_smu_eq_Smu",
                     [](const CampaignConfig& c, std::uint64_t seed) {
                         return gen_support_functionals(c, "cor27_smu_eq_Smu", seed, false);
                     },
                     check_cor27});
        s.push_back({"thm31_bijection", gen_thm31, check_thm31});
        s.push_back({"prop32_monotone_shadow", gen_prop32, check_prop32});
        s.push_back({"thm33_roundtrip", gen_thm33, check_thm33});
        s.push_back({"thm41_forward",
                     [](const CampaignConfig& c, std::uint64_t seed) {
                         return gen_forward(c, "thm41_forward", seed);
                     },
                     [](const json& j, std::uint64_t seed, double) {
                         return check_forward(j, seed, true);
                     }});
        s.push_back({"thm43_recovery", gen_thm43, check_thm43});
        s.push_back({"thm45_forward",
                     [](const CampaignConfig& c, std::uint64_t seed) {
                         return gen_forward(c, "thm45_forward", seed);
                     },
                     [](const json& j, std::uint64_t seed, double) {
                         return check_forward(j, seed, false);
                     }});
        s.push_back({"prop51_connectivity", gen_prop51, check_prop51});
        s.push_back({"axioms_fuzz", gen_axioms_fuzz, check_axioms_fuzz});
        s.push_back({"hausdorff_lipschitz", gen_hausdorff, check_hausdorff});
        s.push_back({"retraction_search_instances", gen_retraction_search, check_retraction_search});
        return s;
    }();
    return suites;
}

const Suite& find_suite(std::string_view name) {
    for (const auto& s : registry()) {
        if (s.name == name) {
            return s;
        }
    }
    throw Error(Errc::unknown_suite, "no suite named '" + std::string(name) + "'",
                std::string(name));
}

CaseVerdict guarded(const Suite& suite, const json& instance, std::uint64_t seed, double tol) {
    try {
        return suite.check(instance, seed, tol);
    } catch (const Error& e) {
        return fail(e.what());
    } catch (const std::exception& e) {
        return fail(std::string("unexpected: ") + e.what());
    }
}

std::size_t worker_count(std::size_t cases) {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("IDEMX_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) {
            n = static_cast<std::size_t>(v);
        }
    }
    return std::max<std::size_t>(1, std::min(n, cases));
}

SuiteReport run_suite(const Suite& suite, const CampaignConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t suite_seed = mix_seed(cfg.seed, hash_name(suite.name));
    const std::vector<Case> cases = suite.generate(cfg, suite_seed);
    std::vector<CaseVerdict> verdicts(cases.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < cases.size();) {
            verdicts[i] = guarded(suite, cases[i].instance, cases[i].seed, cfg.tol);
        }
    };
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < worker_count(cases.size()); ++t) {
        pool.emplace_back(work);
    }
    work();
    pool.clear();

    SuiteReport rep;
    rep.name = suite.name;
    rep.cases_run = cases.size();
    for (std::size_t i = 0; i < cases.size(); ++i) {
        if (verdicts[i].pass) {
            ++rep.passed;
        } else {
            ++rep.failed;
            rep.witnesses.push_back(
                CaseWitness{suite.name, i, cases[i].seed, cases[i].instance, verdicts[i].detail});
        }
    }
    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

std::string canonical_key(std::string key) {
    std::erase(key, '|');
    return key;
}

} // namespace

std::size_t CampaignReport::cases_run() const noexcept {
    std::size_t t = 0;
    for (const auto& s : suites) {
        t += s.cases_run;
    }
    return t;
}

std::size_t CampaignReport::passed() const noexcept {
    std::size_t t = 0;
    for (const auto& s : suites) {
        t += s.passed;
    }
    return t;
}

std::size_t CampaignReport::failed() const noexcept {
    std::size_t t = 0;
    for (const auto& s : suites) {
        t += s.failed;
    }
    return t;
}

const SuiteReport* CampaignReport::find(std::string_view suite) const noexcept {
    for (const auto& s : suites) {
        if (s.name == suite) {
            return &s;
        }
    }
    return nullptr;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& s : registry()) {
            out.push_back(s.name);
        }
        return out;
    }();
    return names;
}

void validate_config(const CampaignConfig& cfg) {
    for (const auto& name : cfg.suites) {
        find_suite(name);
    }
    for (const auto& [raw, value] : cfg.size_caps) {
        const std::string key = canonical_key(raw);
        std::string suite;
        std::string base = key;
        if (const auto dot = key.find('.'); dot != std::string::npos) {
            suite = key.substr(0, dot);
            base = key.substr(dot + 1);
            find_suite(suite);
        }
        const bool forward = suite == "thm41_forward" || suite == "thm45_forward";
        std::int64_t hi = 0;
        if (base == "X") {
            hi = forward ? 3 : 6;
        } else if (base == "Y") {
            hi = forward ? 5 : 7;
        } else if (base == "cases") {
            hi = 1'000'000;
        }
        if (hi == 0 || value < 1 || value > hi) {
            throw Error(Errc::invariant_violation,
                        "cap " + raw + "=" + std::to_string(value) + " outside 1.." +
                            std::to_string(hi),
                        "cap." + raw);
        }
    }
}

CampaignReport run_campaign(const CampaignConfig& raw_cfg) {
    validate_config(raw_cfg);
    CampaignConfig cfg = raw_cfg;
    cfg.size_caps.clear();
    for (const auto& [k, v] : raw_cfg.size_caps) {
        cfg.size_caps[canonical_key(k)] = v;
    }
    const auto start = std::chrono::steady_clock::now();
    CampaignReport report;
    report.config = cfg;
    for (const auto& name : cfg.suites) {
        report.suites.push_back(run_suite(find_suite(name), cfg));
    }
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cfg.output) {
        write_report(report, *cfg.output, cfg.format);
    }
    return report;
}

CaseVerdict replay_case(std::string_view suite, const json& instance, std::uint64_t seed,
                        double tol) {
    return guarded(find_suite(suite), instance, seed, tol);
}

json to_json(const CampaignReport& report) {
    json suites = json::array();
    for (const auto& s : report.suites) {
        json witnesses = json::array();
        for (const auto& w : s.witnesses) {
            witnesses.push_back(json{{"suite", w.suite},
                                     {"case", w.case_index},
                                     {"seed", w.seed},
                                     {"instance", w.instance},
                                     {"detail", w.detail}});
        }
        suites.push_back(json{{"name", s.name},
                              {"cases_run", s.cases_run},
                              {"passed", s.passed},
                              {"failed", s.failed},
                              {"witnesses", witnesses},
                              {"wall_time_s", s.wall_time_s}});
    }
    return json{{"version", report.version},
                {"config",
                 {{"seed", report.config.seed},
                  {"suites", report.config.suites},
                  {"caps", report.config.size_caps},
                  {"tol", report.config.tol}}},
                {"suites", suites},
                {"totals",
                 {{"cases_run", report.cases_run()},
                  {"passed", report.passed()},
                  {"failed", report.failed()}}},
                {"wall_time_s", report.wall_time_s}};
}

std::string to_csv(const CampaignReport& report) {
    std::ostringstream out;
    out << "suite,cases_run,passed,failed,wall_time_s\n";
    for (const auto& s : report.suites) {
        out << s.name << ',' << s.cases_run << ',' << s.passed << ',' << s.failed << ','
            << s.wall_time_s << '\n';
    }
    out << "total," << report.cases_run() << ',' << report.passed() << ',' << report.failed()
        << ',' << report.wall_time_s << '\n';
    return out.str();
}

std::string summary(const CampaignReport& report) {
    std::ostringstream out;
    for (const auto& s : report.suites) {
        out << (s.failed == 0 ? "PASS " : "FAIL ") << s.name << ": " << s.passed << "/"
            << s.cases_run << " passed (" << s.wall_time_s << " s)\n";
    }
    out << "total: " << report.passed() << "/" << report.cases_run() << " passed, "
        << report.failed() << " failed\n";
    return out.str();
}

json without_timing(json report) {
    report.erase("wall_time_s");
    if (report.contains("suites")) {
        for (auto& s : report.at("suites")) {
            s.erase("wall_time_s");
        }
    }
    return report;
}

void write_report(const CampaignReport& report, const std::filesystem::path& path,
                  ReportFormat format) {
    std::ofstream out(path);
    if (!out) {
        throw Error(Errc::io_error, "cannot write " + path.string(), path.string());
    }
    if (format == ReportFormat::csv) {
        out << to_csv(report);
    } else {
        out << to_json(report).dump(2) << '\n';
    }
    if (!out) {
        throw Error(Errc::io_error, "write failed for " + path.string(), path.string());
    }
}

std::vector<json> recovery_corpus(std::uint64_t seed, std::size_t count, std::size_t max_y) {
    std::vector<json> out{no_retraction_instance()};
    Sampler s(seed);
    const std::size_t ny = std::max<std::size_t>(max_y, 3);
    while (out.size() < count) {
        const std::size_t n = 3 + s.below(ny - 2);
        const std::size_t k = 1 + s.below(std::min<std::size_t>(3, n - 1));
        const SubspaceEmbedding e = random_embedding(s, n, k, true);
        if (search_retraction(e, Semicontinuity::usc)) {
            out.push_back(to_json(e));
        }
    }
    return out;
}

} // namespace idemx
