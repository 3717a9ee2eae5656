#include "idemx/extenders.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "idemx/error.hpp"
#include "idemx/sampling.hpp"

namespace idemx {

Extender::Extender(SubspaceEmbedding embedding, Apply apply, std::string label)
    : embedding_(std::move(embedding)), apply_(std::move(apply)), label_(std::move(label)) {}

Functional Extender::functional_at(std::size_t y) const {
    if (y >= embedding_.ambient().size()) {
        throw Error(Errc::invariant_violation, "point outside Y", "y");
    }
    return Functional(
        embedding_.subspace().size(),
        [apply = apply_, y](std::span<const double> f) { return apply(f)[y]; },
        "mu_" + embedding_.ambient().name(y));
}

Extender build_extender(const SetValuedMap& r, const SubspaceEmbedding& embedding, Extremum kind) {
    if (!is_retraction(r, embedding)) {
        throw Error(Errc::not_a_retraction, "r(x) must be {x} on X");
    }
    const std::size_t ny = embedding.ambient().size();
    const std::size_t nx = embedding.subspace().size();
    std::vector<SupportFunctional> parts;
    parts.reserve(ny);
    for (std::size_t y = 0; y < ny; ++y) {
        parts.emplace_back(kind, r.image(y), nx);
    }
    Extender u(
        embedding,
        [parts = std::move(parts)](std::span<const double> f) {
            RealFunction out(parts.size());
            for (std::size_t y = 0; y < parts.size(); ++y) {
                out[y] = parts[y](f);
            }
            return out;
        },
        std::string(to_string(kind)) + "-extender");
    u.retraction_ = r;
    u.kind_ = kind;
    return u;
}

Extender extender_from_functionals(const SubspaceEmbedding& embedding,
                                   std::vector<Functional> off_points, std::string label) {
    const std::size_t ny = embedding.ambient().size();
    const std::size_t nx = embedding.subspace().size();
    if (off_points.size() != ny - nx) {
        throw Error(Errc::invariant_violation, "one functional per point of Y \\ X", "functionals");
    }
    for (const auto& mu : off_points) {
        if (mu.dim() != nx) {
            throw Error(Errc::space_mismatch, "functional " + mu.label() + " is not on X");
        }
    }
    // slot[y] >= 0: copy f at that subspace index; otherwise off-point functional.
    std::vector<std::ptrdiff_t> slot(ny);
    std::size_t k = 0;
    for (std::size_t y = 0; y < ny; ++y) {
        if (const auto i = embedding.subspace_index(y)) {
            slot[y] = static_cast<std::ptrdiff_t>(*i);
        } else {
            slot[y] = -1 - static_cast<std::ptrdiff_t>(k++);
        }
    }
    return Extender(
        embedding,
        [slot = std::move(slot), fns = std::move(off_points)](std::span<const double> f) {
            RealFunction out(slot.size());
            for (std::size_t y = 0; y < slot.size(); ++y) {
                out[y] = slot[y] >= 0 ? f[static_cast<std::size_t>(slot[y])]
                                      : fns[static_cast<std::size_t>(-1 - slot[y])](f);
            }
            return out;
        },
        std::move(label));
}

std::string_view to_string(FunctionClass cls) noexcept {
    switch (cls) {
    case FunctionClass::continuous: return "continuous";
    case FunctionClass::lsc: return "lsc";
    case FunctionClass::usc: return "usc";
    case FunctionClass::neither: return "neither";
    }
    return "neither";
}

FunctionClassReport function_class(std::span<const double> g, const FiniteTopSpace& space) {
    if (g.size() != space.size()) {
        throw Error(Errc::space_mismatch, "function and space differ in size");
    }
    std::set<double> distinct(g.begin(), g.end());
    std::vector<double> values(distinct.begin(), distinct.end());
    FunctionClassReport report;
    bool lower = true;
    bool upper = true;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double a = values[i] + (values[i + 1] - values[i]) / 2.0;
        Mask above = 0;
        Mask below = 0;
        for (std::size_t x = 0; x < g.size(); ++x) {
            if (g[x] > a) {
                above |= bit(x);
            } else {
                below |= bit(x);
            }
        }
        if (!space.is_open(above)) {
            lower = false;
            report.witnesses.push_back({a, true, above});
        }
        if (!space.is_open(below)) {
            upper = false;
            report.witnesses.push_back({a, false, below});
        }
    }
    report.cls = lower && upper ? FunctionClass::continuous
                 : lower        ? FunctionClass::lsc
                 : upper        ? FunctionClass::usc
                                : FunctionClass::neither;
    return report;
}

bool SemicontinuityTheoremReport::ok() const noexcept {
    return axioms_ok && std::all_of(implications.begin(), implications.end(),
                                    [](const ImplicationCheck& c) { return c.held; });
}

std::vector<Axiom> extender_axioms(Extremum kind) {
    if (kind == Extremum::min) {
        return {Axiom::normed, Axiom::weakly_additive, Axiom::preserves_min,
                Axiom::weakly_preserves_max, Axiom::monotone};
    }
    return {Axiom::normed, Axiom::weakly_additive, Axiom::preserves_max,
            Axiom::weakly_preserves_min, Axiom::monotone};
}

namespace {

/// Two-valued (or structured) plus random functions, keeping only those
/// continuous on X; on discrete X nothing is dropped.
std::vector<RealFunction> theorem_test_functions(const FiniteTopSpace& x_space, std::size_t sample,
                                                 std::uint64_t seed) {
    const std::size_t nx = x_space.size();
    auto candidates = nx <= 5 ? two_valued_functions(nx) : structured_functions(nx);
    Sampler rng(mix_seed(seed, 0x7E57u));
    for (std::size_t t = 0; t < sample; ++t) {
        candidates.push_back(rng.dyadic_vector(nx));
    }
    if (x_space.is_discrete()) {
        return candidates;
    }
    std::vector<RealFunction> out;
    for (auto& f : candidates) {
        if (function_class(f, x_space).cls == FunctionClass::continuous) {
            out.push_back(std::move(f));
        }
    }
    return out;
}

} // namespace

SemicontinuityTheoremReport verify_semicontinuity_theorem(const SetValuedMap& r,
                                                          const SubspaceEmbedding& embedding,
                                                          Extremum kind, std::size_t sample,
                                                          std::uint64_t seed) {
    const Extender u = build_extender(r, embedding, kind);
    SemicontinuityTheoremReport report;
    report.r_usc = is_usc(r);
    report.r_lsc = is_lsc(r);

    const bool min_kind = kind == Extremum::min;
    // usc r: min-outputs lsc, max-outputs usc; lsc r: the reverse.
    ImplicationCheck from_usc;
    from_usc.name = min_kind ? "usc r => min-extension lsc" : "usc r => max-extension usc";
    from_usc.applicable = report.r_usc;
    ImplicationCheck from_lsc;
    from_lsc.name = min_kind ? "lsc r => min-extension usc" : "lsc r => max-extension lsc";
    from_lsc.applicable = report.r_lsc;
    ImplicationCheck from_cont;
    from_cont.name = "continuous r => continuous extension";
    from_cont.applicable = report.r_usc && report.r_lsc;

    const auto& y_space = embedding.ambient();
    for (const auto& f : theorem_test_functions(embedding.subspace(), sample, seed)) {
        const RealFunction g = u(f);
        const FunctionClassReport fc = function_class(g, y_space);
        const bool want_from_usc = min_kind ? fc.lower_semicontinuous() : fc.upper_semicontinuous();
        const bool want_from_lsc = min_kind ? fc.upper_semicontinuous() : fc.lower_semicontinuous();
        auto record = [&](ImplicationCheck& check, bool good) {
            if (!check.applicable) {
                return;
            }
            ++check.functions_checked;
            if (!good && check.held) {
                check.held = false;
                check.witness = f;
            }
        };
        record(from_usc, want_from_usc);
        record(from_lsc, want_from_lsc);
        record(from_cont, fc.cls == FunctionClass::continuous);
    }
    report.implications = {from_usc, from_lsc, from_cont};

    for (std::size_t y = 0; y < y_space.size(); ++y) {
        const Functional mu = u.functional_at(y);
        for (Axiom a : extender_axioms(kind)) {
            if (!check_axiom(mu, a, std::max<std::size_t>(sample, 1), 0.0, mix_seed(seed, y)).pass) {
                report.axioms_ok = false;
                report.axiom_failures.push_back(mu.label() + ": " + std::string(to_string(a)));
            }
        }
    }
    return report;
}

SetValuedMap supports_retraction(const Extender& u, const SearchOptions& opts) {
    const auto& e = u.embedding();
    std::vector<Mask> images(e.ambient().size());
    for (std::size_t y = 0; y < images.size(); ++y) {
        const Classification c = classify(u.functional_at(y), opts);
        if (c.cls != FunctionalClass::r_min && c.cls != FunctionalClass::r_max) {
            throw Error(Errc::classification_failed,
                        "mu_" + e.ambient().name(y) + " classifies as " +
                            std::string(to_string(c.cls)),
                        e.ambient().name(y));
        }
        images[y] = *c.support;
    }
    return SetValuedMap(e.ambient(), e.subspace(), std::move(images));
}

std::string_view to_string(EVariant variant) noexcept {
    return variant == EVariant::max_usc ? "max_usc" : "min_lsc";
}

namespace {

constexpr std::array<int, 3> kSchedule = {1, 10, 100};

void require_normalized(const Extender& u, double tol) {
    const std::size_t nx = u.embedding().subspace().size();
    const RealFunction one(nx, 1.0);
    const RealFunction image = u(one);
    for (std::size_t y = 0; y < image.size(); ++y) {
        if (std::abs(image[y] - 1.0) > tol) {
            throw Error(Errc::not_normalized, "u(1_X) differs from 1 at " +
                                                  u.embedding().ambient().name(y),
                        u.embedding().ambient().name(y));
        }
    }
}

void require_axiom(const Extender& u, Axiom axiom, const SearchOptions& opts) {
    const std::size_t ny = u.embedding().ambient().size();
    for (std::size_t y = 0; y < ny; ++y) {
        const Functional mu = u.functional_at(y);
        if (!check_axiom(mu, axiom, std::max<std::size_t>(opts.budget, 1), opts.tol,
                         mix_seed(opts.seed, y))
                 .pass) {
            throw Error(Errc::axiom_precheck_failed,
                        mu.label() + " violates " + std::string(to_string(axiom)),
                        std::string(to_string(axiom)));
        }
    }
}

EOperatorResult e_operator_normalized(const Extender& u, Mask open_u, EVariant variant,
                                      const SearchOptions& opts) {
    const auto& e = u.embedding();
    const std::size_t nx = e.subspace().size();
    const std::size_t ny = e.ambient().size();
    if (!is_subset(open_u, e.subspace().all()) || !e.subspace().is_open(open_u)) {
        throw Error(Errc::invariant_violation, "U must be open in X", "U");
    }
    EOperatorResult result;
    result.attained_by.assign(ny, 0);
    result.schedule_limited = !u.from_retraction();
    const bool max_side = variant == EVariant::max_usc;
    auto absorb = [&](const RealFunction& h, int c) {
        const RealFunction image = u(h);
        for (std::size_t y = 0; y < ny; ++y) {
            const bool in = max_side ? image[y] < 1.0 - opts.tol : image[y] > 1.0 + opts.tol;
            if (in && !contains(result.set, y)) {
                result.set |= bit(y);
                result.attained_by[y] = c;
            }
        }
    };
    for (int c : kSchedule) {
        RealFunction h(nx, 1.0);
        for_each_bit(open_u, [&](std::size_t x) {
            h[x] = max_side ? 1.0 - static_cast<double>(c) : 1.0 + static_cast<double>(c);
        });
        absorb(h, c);
    }
    Sampler rng(mix_seed(opts.seed, open_u));
    for (std::size_t t = 0; t < opts.budget && open_u != 0; ++t) {
        RealFunction h(nx, 1.0);
        for_each_bit(open_u, [&](std::size_t x) {
            const double depth = rng.dyadic_in(0.0, 4.0);
            h[x] = max_side ? 1.0 - depth : 1.0 + depth;
        });
        absorb(h, 0);
    }
    return result;
}

} // namespace

EOperatorResult e_operator(const Extender& u, Mask open_u, EVariant variant,
                           const SearchOptions& opts) {
    require_normalized(u, opts.tol);
    return e_operator_normalized(u, open_u, variant, opts);
}

namespace {

SetValuedMap recover_from_e_values(const Extender& u, const std::vector<Mask>& e_values) {
    const auto& e = u.embedding();
    const auto& x_space = e.subspace();
    const auto& opens = x_space.open_sets();
    std::vector<Mask> images(e.ambient().size(), x_space.all());
    for (std::size_t k = 0; k < opens.size(); ++k) {
        const Mask closed = x_space.closure(opens[k]);
        for_each_bit(e_values[k], [&](std::size_t y) { images[y] &= closed; });
    }
    for (std::size_t y = 0; y < images.size(); ++y) {
        if (images[y] == 0) {
            throw Error(Errc::invariant_violation,
                        "recovered value empty at " + e.ambient().name(y), "r");
        }
    }
    return SetValuedMap(e.ambient(), x_space, std::move(images));
}

std::vector<Mask> all_e_values(const Extender& u, EVariant variant, const SearchOptions& opts) {
    std::vector<Mask> out;
    for (Mask open : u.embedding().subspace().open_sets()) {
        out.push_back(e_operator_normalized(u, open, variant, opts).set);
    }
    return out;
}

} // namespace

SetValuedMap recover_retraction_via_e(const Extender& u, EVariant variant, const SearchOptions& opts) {
    require_normalized(u, opts.tol);
    return recover_from_e_values(u, all_e_values(u, variant, opts));
}

EMultiplicativeReport check_e_multiplicative(const Extender& u, EVariant variant,
                                             const SearchOptions& opts) {
    if (u.embedding().subspace().size() > 6) {
        throw Error(Errc::too_large, "pairwise e-operator check limited to |X| <= 6");
    }
    require_normalized(u, opts.tol);
    require_axiom(u, variant == EVariant::max_usc ? Axiom::preserves_max : Axiom::preserves_min,
                  opts);
    const auto& opens = u.embedding().subspace().open_sets();
    const auto values = all_e_values(u, variant, opts);
    auto e_of = [&](Mask set) {
        const auto it = std::lower_bound(opens.begin(), opens.end(), set);
        return values[static_cast<std::size_t>(it - opens.begin())];
    };
    EMultiplicativeReport report;
    for (std::size_t i = 0; i < opens.size(); ++i) {
        for (std::size_t j = 0; j < opens.size(); ++j) {
            ++report.pairs_checked;
            const Mask a = opens[i];
            const Mask b = opens[j];
            const bool mult = e_of(a & b) == (values[i] & values[j]);
            const bool mono = !is_subset(a, b) || is_subset(values[i], values[j]);
            if ((!mult || !mono) && !report.witness) {
                report.witness = std::make_pair(a, b);
            }
            report.multiplicative = report.multiplicative && mult;
            report.monotone = report.monotone && mono;
        }
    }
    return report;
}

ConnectivityReport connectivity_analysis(const Extender& u, EVariant variant,
                                         const SearchOptions& opts) {
    require_normalized(u, opts.tol);
    require_axiom(u, Axiom::preserves_max, opts);
    require_axiom(u, Axiom::preserves_min, opts);

    const auto& e = u.embedding();
    const auto values = all_e_values(u, variant, opts);
    ConnectivityReport report;
    for (Mask v : values) {
        report.g |= v;
    }
    const SetValuedMap full = recover_from_e_values(u, values);
    const SubspaceEmbedding g_embedding(e.ambient(), report.g);
    std::vector<Mask> images;
    for_each_bit(report.g, [&](std::size_t y) { images.push_back(full.image(y)); });
    SetValuedMap on_g(g_embedding.subspace(), e.subspace(), std::move(images));
    report.connected_valued = is_connected_valued(on_g);
    report.usc = is_usc(on_g);
    report.singleton_valued = std::all_of(on_g.images().begin(), on_g.images().end(),
                                          [](Mask m) { return cardinality(m) == 1; });
    report.recovered = std::move(on_g);
    return report;
}

} // namespace idemx
