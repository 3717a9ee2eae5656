#include "idemx/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "idemx/error.hpp"
#include "idemx/sampling.hpp"

namespace idemx {

std::string_view to_string(Extremum kind) noexcept {
    return kind == Extremum::min ? "min" : "max";
}

std::string_view to_string(Axiom axiom) noexcept {
    switch (axiom) {
    case Axiom::normed: return "normed";
    case Axiom::weakly_additive: return "weakly_additive";
    case Axiom::preserves_max: return "preserves_max";
    case Axiom::preserves_min: return "preserves_min";
    case Axiom::weakly_preserves_max: return "weakly_preserves_max";
    case Axiom::weakly_preserves_min: return "weakly_preserves_min";
    case Axiom::monotone: return "monotone";
    }
    return "unknown";
}

Axiom parse_axiom(std::string_view name) {
    for (Axiom a : kAllAxioms) {
        if (to_string(a) == name) {
            return a;
        }
    }
    throw Error(Errc::unknown_axiom, "no axiom named '" + std::string(name) + "'", "axiom");
}

Axiom dual_axiom(Axiom axiom) noexcept {
    switch (axiom) {
    case Axiom::preserves_max: return Axiom::preserves_min;
    case Axiom::preserves_min: return Axiom::preserves_max;
    case Axiom::weakly_preserves_max: return Axiom::weakly_preserves_min;
    case Axiom::weakly_preserves_min: return Axiom::weakly_preserves_max;
    default: return axiom;
    }
}

std::string_view to_string(FunctionalClass cls) noexcept {
    switch (cls) {
    case FunctionalClass::r_min: return "R_min";
    case FunctionalClass::r_max: return "R_max";
    case FunctionalClass::idempotent_measure: return "idempotent_measure";
    case FunctionalClass::none: return "none";
    }
    return "none";
}

Functional::Functional(std::size_t dim, Evaluator evaluate, std::string label)
    : dim_(dim), evaluate_(std::move(evaluate)), label_(std::move(label)) {}

// ---------------------------------------------------------------------------
// Concrete functionals

namespace {

std::string set_label(Mask m) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for_each_bit(m, [&](std::size_t i) {
        os << (first ? "" : ",") << 'x' << i;
        first = false;
    });
    os << '}';
    return os.str();
}

} // namespace

SupportFunctional::SupportFunctional(Extremum kind, Mask support, std::size_t dim)
    : kind_(kind), support_(support), dim_(dim) {
    if (support == 0) {
        throw Error(Errc::invariant_violation, "support must be nonempty", "F.nonempty");
    }
    if (dim > kMaxPoints || !is_subset(support, full_mask(dim))) {
        throw Error(Errc::invariant_violation, "support outside the point set", "F");
    }
}

double SupportFunctional::operator()(std::span<const double> f) const noexcept {
    Mask m = support_;
    double best = f[static_cast<std::size_t>(std::countr_zero(m))];
    m &= m - 1;
    if (kind_ == Extremum::min) {
        for_each_bit(m, [&](std::size_t i) { best = std::min(best, f[i]); });
    } else {
        for_each_bit(m, [&](std::size_t i) { best = std::max(best, f[i]); });
    }
    return best;
}

Functional SupportFunctional::functional() const {
    return Functional(
        dim_, [self = *this](std::span<const double> f) { return self(f); },
        std::string(to_string(kind_)) + set_label(support_));
}

Functional dirac(std::size_t point, std::size_t dim) {
    if (point >= dim) {
        throw Error(Errc::invariant_violation, "Dirac point outside the space", "point");
    }
    return Functional(
        dim, [point](std::span<const double> f) { return f[point]; },
        "delta_x" + std::to_string(point));
}

Functional arithmetic_mean(std::size_t dim) {
    if (dim == 0) {
        throw Error(Errc::empty_set, "mean over no points");
    }
    return Functional(
        dim,
        [dim](std::span<const double> f) {
            double s = 0.0;
            for (double v : f) {
                s += v;
            }
            return s / static_cast<double>(dim);
        },
        "mean");
}

MaxPlusWeight MaxPlusWeight::finite(double value) {
    if (!std::isfinite(value)) {
        throw Error(Errc::invariant_violation, "finite weight expected", "lambda.range");
    }
    MaxPlusWeight w;
    w.bottom_ = false;
    w.value_ = value;
    return w;
}

double MaxPlusWeight::value() const {
    if (bottom_) {
        throw Error(Errc::invariant_violation, "bottom weight has no finite value", "lambda");
    }
    return value_;
}

IdempotentDensity::IdempotentDensity(std::vector<MaxPlusWeight> lambda) : lambda_(std::move(lambda)) {
    bool has_zero = false;
    for (const auto& w : lambda_) {
        if (w.is_bottom()) {
            continue;
        }
        if (w.value() > 0.0) {
            throw Error(Errc::invariant_violation, "weights must lie in [-inf, 0]", "lambda.range");
        }
        has_zero = has_zero || w.value() == 0.0;
    }
    if (!has_zero) {
        throw Error(Errc::invariant_violation, "max of the weights must be 0",
                    "lambda.normalized");
    }
}

IdempotentDensity IdempotentDensity::from_reals(std::span<const double> lambda) {
    std::vector<MaxPlusWeight> w;
    w.reserve(lambda.size());
    for (double v : lambda) {
        if (std::isinf(v) && v < 0) {
            w.push_back(MaxPlusWeight::bottom());
        } else {
            w.push_back(MaxPlusWeight::finite(v));
        }
    }
    return IdempotentDensity(std::move(w));
}

double IdempotentDensity::operator()(std::span<const double> f) const {
    double best = std::numeric_limits<double>::lowest();
    for (std::size_t i = 0; i < lambda_.size(); ++i) {
        if (!lambda_[i].is_bottom()) {
            best = std::max(best, lambda_[i].value() + f[i]);
        }
    }
    return best;
}

bool IdempotentDensity::zero_bottom_valued() const noexcept {
    return std::all_of(lambda_.begin(), lambda_.end(), [](const MaxPlusWeight& w) {
        return w.is_bottom() || w.value() == 0.0;
    });
}

Functional IdempotentDensity::functional() const {
    std::ostringstream os;
    os << "density(";
    for (std::size_t i = 0; i < lambda_.size(); ++i) {
        os << (i ? "," : "");
        if (lambda_[i].is_bottom()) {
            os << "-inf";
        } else {
            os << lambda_[i].value();
        }
    }
    os << ')';
    return Functional(
        dim(), [self = *this](std::span<const double> f) { return self(f); }, os.str());
}

double density_eval(const IdempotentDensity& lambda, std::span<const double> f) {
    return lambda(f);
}

TableFunctional::TableFunctional(std::size_t dim, std::vector<bool> truth) : dim_(dim) {
    if (dim == 0 || dim > 16) {
        throw Error(Errc::too_large, "table functionals need 1..16 points", "table");
    }
    const Mask top = full_mask(dim);
    if (truth.size() != (std::size_t{1} << dim)) {
        throw Error(Errc::invariant_violation, "one entry per subset", "table.complete");
    }
    if (truth[0] || !truth[top]) {
        throw Error(Errc::invariant_violation, "table must be 0 on 0_X and 1 on 1_X",
                    "table.normed");
    }
    for (Mask s = 0; s <= top; ++s) {
        for (std::size_t x = 0; x < dim; ++x) {
            if (truth[s] && !truth[s | bit(x)]) {
                throw Error(Errc::invariant_violation, "table must be monotone",
                            "table.monotone");
            }
        }
    }
    for (Mask s = 1; s <= top; ++s) {
        if (!truth[s]) {
            continue;
        }
        bool minimal = true;
        for_each_bit(s, [&](std::size_t x) { minimal = minimal && !truth[s & ~bit(x)]; });
        if (minimal) {
            minimal_.push_back(s);
        }
    }
}

double TableFunctional::operator()(std::span<const double> f) const {
    double best = std::numeric_limits<double>::lowest();
    for (Mask s : minimal_) {
        best = std::max(best, SupportFunctional(Extremum::min, s, dim_)(f));
    }
    return best;
}

Functional TableFunctional::functional() const {
    return Functional(
        dim_, [self = *this](std::span<const double> f) { return self(f); }, "table");
}

Functional dual(const Functional& mu) {
    return Functional(
        mu.dim(),
        [mu](std::span<const double> f) {
            RealFunction neg(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) {
                neg[i] = -f[i];
            }
            return -mu(neg);
        },
        "dual(" + mu.label() + ")");
}

// ---------------------------------------------------------------------------
// Test-function families

std::vector<RealFunction> two_valued_functions(std::size_t dim, double lo, double hi) {
    if (dim > 16) {
        throw Error(Errc::too_large, "two-valued enumeration limited to 16 points");
    }
    std::vector<RealFunction> out;
    const Mask top = full_mask(dim);
    out.reserve(std::size_t{1} << dim);
    for (Mask s = 0;; ++s) {
        RealFunction f(dim, lo);
        for_each_bit(s, [&](std::size_t i) { f[i] = hi; });
        out.push_back(std::move(f));
        if (s == top) {
            break;
        }
    }
    return out;
}

std::vector<RealFunction> structured_functions(std::size_t dim) {
    if (dim <= 5) {
        auto out = two_valued_functions(dim, 0.0, 1.0);
        auto pm = two_valued_functions(dim, -1.0, 1.0);
        out.insert(out.end(), pm.begin(), pm.end());
        return out;
    }
    std::vector<RealFunction> out;
    out.emplace_back(dim, 0.0);
    out.emplace_back(dim, 1.0);
    for (std::size_t x = 0; x < dim; ++x) {
        RealFunction ind(dim, 0.0);
        ind[x] = 1.0;
        out.push_back(ind);
        ind[x] = -1.0;
        out.push_back(ind);
        RealFunction co(dim, 1.0);
        co[x] = 0.0;
        out.push_back(co);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Axiom checks

namespace {

constexpr std::array<double, 7> kConstantGrid = {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0};

RealFunction pointwise_max(std::span<const double> f, std::span<const double> g) {
    RealFunction h(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        h[i] = std::max(f[i], g[i]);
    }
    return h;
}

RealFunction pointwise_min(std::span<const double> f, std::span<const double> g) {
    RealFunction h(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        h[i] = std::min(f[i], g[i]);
    }
    return h;
}

RealFunction shifted(std::span<const double> f, double c) {
    RealFunction h(f.begin(), f.end());
    for (auto& v : h) {
        v += c;
    }
    return h;
}

class AxiomChecker {
public:
    AxiomChecker(const Functional& mu, Axiom axiom, double tol) : mu_(mu), axiom_(axiom), tol_(tol) {
        report_.axiom = axiom;
    }

    bool done() const { return !report_.pass; }
    AxiomReport take() { return std::move(report_); }

    void pair(const RealFunction& f, const RealFunction& g) {
        ++report_.cases;
        double lhs = 0.0;
        double rhs = 0.0;
        switch (axiom_) {
        case Axiom::preserves_max:
            lhs = mu_(pointwise_max(f, g));
            rhs = std::max(mu_(f), mu_(g));
            break;
        case Axiom::preserves_min:
            lhs = mu_(pointwise_min(f, g));
            rhs = std::min(mu_(f), mu_(g));
            break;
        case Axiom::monotone: {
            // g is expected to dominate f; a violation is mu(f) > mu(g).
            lhs = mu_(f);
            rhs = mu_(g);
            if (lhs - rhs > tol_) {
                fail(f, g, std::nullopt, lhs, rhs);
            }
            return;
        }
        default:
            return;
        }
        if (std::abs(lhs - rhs) > tol_) {
            fail(f, g, std::nullopt, lhs, rhs);
        }
    }

    void with_constant(const RealFunction& f, double c) {
        ++report_.cases;
        const RealFunction cf(f.size(), c);
        double lhs = 0.0;
        double rhs = 0.0;
        switch (axiom_) {
        case Axiom::weakly_additive:
            lhs = mu_(shifted(f, c));
            rhs = mu_(f) + c;
            break;
        case Axiom::weakly_preserves_max:
            lhs = mu_(pointwise_max(f, cf));
            rhs = std::max(mu_(f), c);
            break;
        case Axiom::weakly_preserves_min:
            lhs = mu_(pointwise_min(f, cf));
            rhs = std::min(mu_(f), c);
            break;
        default:
            return;
        }
        if (std::abs(lhs - rhs) > tol_) {
            fail(f, std::nullopt, c, lhs, rhs);
        }
    }

    void normed() {
        ++report_.cases;
        const RealFunction one(mu_.dim(), 1.0);
        const double lhs = mu_(one);
        if (std::abs(lhs - 1.0) > tol_) {
            fail(one, std::nullopt, std::nullopt, lhs, 1.0);
        }
    }

private:
    void fail(const RealFunction& f, std::optional<RealFunction> g, std::optional<double> c,
              double lhs, double rhs) {
        report_.pass = false;
        report_.witness = AxiomWitness{f, std::move(g), c, lhs, rhs};
    }

    const Functional& mu_;
    Axiom axiom_;
    double tol_;
    AxiomReport report_;
};

bool is_pair_axiom(Axiom a) {
    return a == Axiom::preserves_max || a == Axiom::preserves_min || a == Axiom::monotone;
}

} // namespace

AxiomReport check_axiom(const Functional& mu, Axiom axiom, std::size_t trials, double tol,
                        std::uint64_t seed) {
    if (trials == 0) {
        throw Error(Errc::invariant_violation, "at least one trial", "trials");
    }
    if (!(tol >= 0.0)) {
        throw Error(Errc::invariant_violation, "tolerance must be >= 0", "tol");
    }
    AxiomChecker check(mu, axiom, tol);
    const std::size_t n = mu.dim();
    if (axiom == Axiom::normed) {
        check.normed();
        return check.take();
    }
    const auto base = structured_functions(n);
    if (is_pair_axiom(axiom)) {
        for (const auto& f : base) {
            for (const auto& g : base) {
                check.pair(f, axiom == Axiom::monotone ? pointwise_max(f, g) : g);
                if (check.done()) {
                    return check.take();
                }
            }
        }
    } else {
        for (const auto& f : base) {
            for (double c : kConstantGrid) {
                check.with_constant(f, c);
                if (check.done()) {
                    return check.take();
                }
            }
        }
    }
    Sampler rng(mix_seed(seed, static_cast<std::uint64_t>(axiom)));
    for (std::size_t t = 0; t < trials && !check.done(); ++t) {
        const RealFunction f = rng.dyadic_vector(n);
        if (axiom == Axiom::monotone) {
            RealFunction g = f;
            for (auto& v : g) {
                v += std::abs(rng.dyadic());
            }
            check.pair(f, g);
        } else if (is_pair_axiom(axiom)) {
            check.pair(f, rng.dyadic_vector(n));
        } else {
            check.with_constant(f, rng.dyadic());
        }
    }
    return check.take();
}

// ---------------------------------------------------------------------------
// Support

namespace {

constexpr std::array<double, 7> kSweepGrid = {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0};

bool coordinate_sensitive(const Functional& mu, std::size_t x, const std::vector<RealFunction>& base,
                          Sampler& rng, const SearchOptions& opts) {
    const std::size_t n = mu.dim();
    RealFunction probe(n, 0.0);
    const double at_zero = mu(probe);
    for (double v : {-1.0, 1.0}) {
        probe[x] = v;
        if (std::abs(mu(probe) - at_zero) > opts.tol) {
            return true;
        }
    }
    for (const auto& f : base) {
        const double fx = mu(f);
        RealFunction g = f;
        for (double v : kSweepGrid) {
            if (v == f[x]) {
                continue;
            }
            g[x] = v;
            if (std::abs(mu(g) - fx) > opts.tol) {
                return true;
            }
        }
    }
    for (std::size_t t = 0; t < opts.budget; ++t) {
        RealFunction f = rng.dyadic_vector(n);
        const double fx = mu(f);
        f[x] = rng.dyadic();
        if (std::abs(mu(f) - fx) > opts.tol) {
            return true;
        }
    }
    return false;
}

/// Walks from f to g one coordinate at a time along the points outside
/// `found`; returns the first coordinate whose change moves mu beyond tol.
std::optional<std::size_t> attribute(const Functional& mu, RealFunction f, const RealFunction& g,
                                     Mask found, double tol) {
    double prev = mu(f);
    for (std::size_t x = 0; x < f.size(); ++x) {
        if (contains(found, x) || f[x] == g[x]) {
            continue;
        }
        f[x] = g[x];
        const double cur = mu(f);
        if (std::abs(cur - prev) > tol) {
            return x;
        }
        prev = cur;
    }
    return std::nullopt;
}

} // namespace

Mask support(const Functional& mu, const SearchOptions& opts) {
    const std::size_t n = mu.dim();
    if (n > kMaxPoints) {
        throw Error(Errc::too_large, "support search on too many points");
    }
    const auto base = structured_functions(n);
    Sampler rng(mix_seed(opts.seed, 0x5u));
    Mask found = 0;
    for (std::size_t x = 0; x < n; ++x) {
        if (coordinate_sensitive(mu, x, base, rng, opts)) {
            found |= bit(x);
        }
    }

    // Verify that the found set determines mu; any separation off the set is
    // attributed to a single coordinate by walking between the two inputs.
    std::vector<std::pair<RealFunction, RealFunction>> pairs;
    for (double v : {-1.0, 1.0}) {
        RealFunction g(n, v);
        for_each_bit(found, [&](std::size_t x) { g[x] = 0.0; });
        pairs.emplace_back(RealFunction(n, 0.0), std::move(g));
    }
    for (std::size_t t = 0; t < opts.budget; ++t) {
        RealFunction f = rng.dyadic_vector(n);
        RealFunction g = rng.dyadic_vector(n);
        for_each_bit(found, [&](std::size_t x) { g[x] = f[x]; });
        pairs.emplace_back(std::move(f), std::move(g));
    }
    for (auto& [f, g] : pairs) {
        for_each_bit(found, [&](std::size_t x) { g[x] = f[x]; });
        while (std::abs(mu(f) - mu(g)) > opts.tol) {
            const auto x = attribute(mu, f, g, found, opts.tol);
            if (!x) {
                throw Error(Errc::budget_exhausted_inconclusive,
                            "inputs agreeing on the candidate support separate " + mu.label() +
                                " but no single coordinate does",
                            mu.label());
            }
            found |= bit(*x);
            g[*x] = f[*x];
        }
    }
    return found;
}

Mask support(const Functional& mu, const FiniteTopSpace& space, const SearchOptions& opts) {
    if (space.size() != mu.dim()) {
        throw Error(Errc::space_mismatch, "functional and space differ in size");
    }
    // A neighbourhood-level witness telescopes to a single sensitive point
    // inside the minimal neighbourhood, so the support is the closure of the
    // pointwise support.
    return space.closure(support(mu, opts));
}

// ---------------------------------------------------------------------------
// Separation family

void precheck_lambda_axioms(const Functional& mu, const SearchOptions& opts) {
    for (Axiom a : {Axiom::normed, Axiom::weakly_additive, Axiom::monotone,
                    Axiom::weakly_preserves_max, Axiom::weakly_preserves_min}) {
        const auto report = check_axiom(mu, a, std::max<std::size_t>(opts.budget, 1), opts.tol,
                                        opts.seed);
        if (!report.pass) {
            throw Error(Errc::axiom_precheck_failed,
                        mu.label() + " violates " + std::string(to_string(a)),
                        std::string(to_string(a)));
        }
    }
}

bool lambda_member_unchecked(const Functional& mu, const FiniteTopSpace& space, Mask a,
                             const SearchOptions& opts) {
    if (space.size() != mu.dim()) {
        throw Error(Errc::space_mismatch, "functional and space differ in size");
    }
    a &= space.all();
    if (a == 0) {
        throw Error(Errc::empty_set, "separation test needs a nonempty set", "A");
    }
    const std::size_t n = space.size();
    auto vanishes = [&](const RealFunction& f) { return std::abs(mu(f)) <= opts.tol; };

    // The pointwise largest candidate: -1 exactly on the closure of the open
    // hull of A. For monotone mu it decides the test on its own.
    {
        RealFunction f(n, 0.0);
        for_each_bit(space.closure(space.open_hull(a)), [&](std::size_t x) { f[x] = -1.0; });
        if (vanishes(f)) {
            return false;
        }
    }

    std::size_t evaluated = 0;
    bool vanished = false;
    constexpr std::array<double, 3> kLevels = {-1.0, -0.5, 0.0};
    // f = -1 on `low`, 0 outside `high`, grid values on the points between.
    auto sweep = [&](Mask low, Mask high) {
        const auto free = indices_of(high & ~low);
        std::vector<std::size_t> digit(free.size(), 0);
        while (!vanished && evaluated < opts.max_candidates) {
            ++evaluated;
            RealFunction f(n, 0.0);
            for_each_bit(low, [&](std::size_t x) { f[x] = -1.0; });
            for (std::size_t k = 0; k < free.size(); ++k) {
                f[free[k]] = kLevels[digit[k]];
            }
            vanished = vanishes(f);
            std::size_t k = 0;
            while (k < digit.size() && ++digit[k] == kLevels.size()) {
                digit[k++] = 0;
            }
            if (k == digit.size()) {
                break;
            }
        }
    };

    // Neighbourhoods O of A (A inside the interior of O), then open U with
    // A in U and closure(U) in O.
    const Mask hull = space.open_hull(a);
    const Mask rest = space.all() & ~a;
    for (Mask extra = rest; !vanished && evaluated < opts.max_candidates;
         extra = (extra - 1) & rest) {
        const Mask o = a | extra;
        const Mask inner = space.interior(o);
        if (is_subset(a, inner)) {
            const Mask room = inner & ~hull;
            for (Mask sub = room; !vanished && evaluated < opts.max_candidates;
                 sub = (sub - 1) & room) {
                const Mask u = hull | sub;
                if (space.is_open(u) && is_subset(space.closure(u), o)) {
                    sweep(space.closure(u), o);
                }
                if (sub == 0) {
                    break;
                }
            }
        }
        if (extra == 0) {
            break;
        }
    }
    if (vanished) {
        return false;
    }

    Sampler rng(mix_seed(opts.seed, a));
    const Mask low = space.closure(hull);
    for (std::size_t t = 0; t < opts.budget; ++t) {
        const Mask high = low | (rng.next() & space.all());
        RealFunction f(n, 0.0);
        for_each_bit(low, [&](std::size_t x) { f[x] = -1.0; });
        for_each_bit(high & ~low, [&](std::size_t x) { f[x] = rng.dyadic_in(-1.0, 0.0); });
        if (vanishes(f)) {
            return false;
        }
    }
    return true;
}

bool lambda_member(const Functional& mu, const FiniteTopSpace& space, Mask a,
                   const SearchOptions& opts) {
    precheck_lambda_axioms(mu, opts);
    return lambda_member_unchecked(mu, space, a, opts);
}

SubsetFamily lambda_family(const Functional& mu, const FiniteTopSpace& space,
                           const SearchOptions& opts) {
    if (space.size() > 12) {
        throw Error(Errc::too_large, "separation family enumeration limited to 12 points");
    }
    precheck_lambda_axioms(mu, opts);
    SubsetFamily family{space.size(), {}};
    const Mask top = space.all();
    for (Mask a = 1; a != 0 && a <= top; ++a) {
        if (lambda_member_unchecked(mu, space, a, opts)) {
            family.members.push_back(a);
        }
    }
    return family;
}

double reconstruct(const SubsetFamily& family, std::span<const double> f) {
    double best = std::numeric_limits<double>::infinity();
    for (Mask a : family.members) {
        best = std::min(best, SupportFunctional(Extremum::max, a, family.dim)(f));
    }
    return best;
}

double radul_reconstruct(const Functional& mu, const FiniteTopSpace& space,
                         std::span<const double> f, const SearchOptions& opts) {
    return reconstruct(lambda_family(mu, space, opts), f);
}

// ---------------------------------------------------------------------------
// Classification

namespace {

std::vector<RealFunction> verification_functions(std::size_t n, Sampler& rng, std::size_t budget) {
    auto out = structured_functions(n);
    if (n <= 4) {
        std::size_t count = 1;
        for (std::size_t i = 0; i < n; ++i) {
            count *= 3;
        }
        for (std::size_t code = 0; code < count; ++code) {
            RealFunction f(n);
            std::size_t c = code;
            for (std::size_t i = 0; i < n; ++i) {
                f[i] = static_cast<double>(c % 3) - 1.0;
                c /= 3;
            }
            out.push_back(std::move(f));
        }
    }
    for (std::size_t t = 0; t < budget; ++t) {
        out.push_back(rng.dyadic_vector(n));
    }
    return out;
}

std::optional<IdempotentDensity> extract_density(const Functional& mu,
                                                 const std::vector<RealFunction>& tests,
                                                 double tol) {
    const std::size_t n = mu.dim();
    constexpr double kNear = 1048576.0; // 2^20
    constexpr double kFar = 2097152.0;  // 2^21
    std::vector<MaxPlusWeight> lambda;
    for (std::size_t x = 0; x < n; ++x) {
        RealFunction near(n, -kNear);
        RealFunction far(n, -kFar);
        near[x] = 0.0;
        far[x] = 0.0;
        const double a = mu(near);
        const double b = mu(far);
        if (std::abs(a - b) <= tol) {
            if (a > tol) {
                return std::nullopt;
            }
            lambda.push_back(MaxPlusWeight::finite(std::min(a, 0.0)));
        } else {
            lambda.push_back(MaxPlusWeight::bottom());
        }
    }
    try {
        IdempotentDensity density{std::move(lambda)};
        for (const auto& f : tests) {
            if (std::abs(density(f) - mu(f)) > tol) {
                return std::nullopt;
            }
        }
        return density;
    } catch (const Error&) {
        return std::nullopt;
    }
}

} // namespace

Classification classify(const Functional& mu, const SearchOptions& opts) {
    Classification out;
    const std::size_t n = mu.dim();
    const Mask s = support(mu, opts);
    Sampler rng(mix_seed(opts.seed, 0xC1A55u));
    const auto tests = verification_functions(n, rng, opts.budget);

    if (s != 0) {
        const SupportFunctional as_min(Extremum::min, s, n);
        const SupportFunctional as_max(Extremum::max, s, n);
        bool is_min = true;
        bool is_max = true;
        for (const auto& f : tests) {
            const double v = mu(f);
            is_min = is_min && std::abs(v - as_min(f)) <= opts.tol;
            is_max = is_max && std::abs(v - as_max(f)) <= opts.tol;
            if (!is_min && !is_max) {
                break;
            }
        }
        if (is_min || is_max) {
            out.cls = is_min ? FunctionalClass::r_min : FunctionalClass::r_max;
            out.also_r_max = is_min && is_max;
            out.support = s;
            return out;
        }
    }

    bool measure_axioms = true;
    for (Axiom a : {Axiom::normed, Axiom::weakly_additive, Axiom::preserves_max}) {
        auto report = check_axiom(mu, a, std::max<std::size_t>(opts.budget, 1), opts.tol, opts.seed);
        if (!report.pass) {
            measure_axioms = false;
            out.evidence.push_back(std::move(report));
        }
    }
    if (measure_axioms) {
        if (auto density = extract_density(mu, tests, opts.tol)) {
            out.cls = FunctionalClass::idempotent_measure;
            out.support = s;
            out.density = std::move(density);
            return out;
        }
    }
    auto pmin = check_axiom(mu, Axiom::preserves_min, std::max<std::size_t>(opts.budget, 1),
                            opts.tol, opts.seed);
    if (!pmin.pass) {
        out.evidence.push_back(std::move(pmin));
    }
    out.cls = FunctionalClass::none;
    if (s != 0) {
        out.support = s;
    }
    return out;
}

} // namespace idemx
