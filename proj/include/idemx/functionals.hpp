#ifndef IDEMX_FUNCTIONALS_HPP
#define IDEMX_FUNCTIONALS_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idemx/mask.hpp"
#include "idemx/spaces.hpp"

namespace idemx {

/// One real value per point, positional.
using RealFunction = std::vector<double>;

enum class Extremum { min, max };

std::string_view to_string(Extremum kind) noexcept;
constexpr Extremum opposite(Extremum kind) noexcept {
    return kind == Extremum::min ? Extremum::max : Extremum::min;
}

enum class Axiom {
    normed,
    weakly_additive,
    preserves_max,
    preserves_min,
    weakly_preserves_max,
    weakly_preserves_min,
    monotone,
};

inline constexpr std::array<Axiom, 7> kAllAxioms = {
    Axiom::normed,         Axiom::weakly_additive,      Axiom::preserves_max,
    Axiom::preserves_min,  Axiom::weakly_preserves_max, Axiom::weakly_preserves_min,
    Axiom::monotone,
};

std::string_view to_string(Axiom axiom) noexcept;
/// Throws UnknownAxiom.
Axiom parse_axiom(std::string_view name);
/// The axiom that dual() exchanges this one with.
Axiom dual_axiom(Axiom axiom) noexcept;

/// A real-valued functional on functions over a finite point set.
class Functional {
public:
    using Evaluator = std::function<double(std::span<const double>)>;

    Functional(std::size_t dim, Evaluator evaluate, std::string label);

    double operator()(std::span<const double> f) const { return evaluate_(f); }
    std::size_t dim() const noexcept { return dim_; }
    const std::string& label() const noexcept { return label_; }

private:
    std::size_t dim_;
    Evaluator evaluate_;
    std::string label_;
};

/// mu_F(f) = min_F f (kind min) or max_F f (kind max).
class SupportFunctional {
public:
    /// Throws InvariantViolation("F.nonempty") for an empty support.
    SupportFunctional(Extremum kind, Mask support, std::size_t dim);

    Extremum kind() const noexcept { return kind_; }
    Mask support() const noexcept { return support_; }
    std::size_t dim() const noexcept { return dim_; }
    double operator()(std::span<const double> f) const noexcept;
    Functional functional() const;

private:
    Extremum kind_;
    Mask support_;
    std::size_t dim_;
};

Functional dirac(std::size_t point, std::size_t dim);
Functional arithmetic_mean(std::size_t dim);

/// Element of the max-plus semiring restricted to [-inf, 0]. The bottom
/// element is a sentinel, never a floating-point infinity.
class MaxPlusWeight {
public:
    static constexpr MaxPlusWeight bottom() noexcept { return MaxPlusWeight{}; }
    static MaxPlusWeight finite(double value);

    bool is_bottom() const noexcept { return bottom_; }
    /// Throws InvariantViolation when called on bottom.
    double value() const;

    friend bool operator==(const MaxPlusWeight& a, const MaxPlusWeight& b) noexcept {
        return a.bottom_ == b.bottom_ && (a.bottom_ || a.value_ == b.value_);
    }

private:
    constexpr MaxPlusWeight() noexcept = default;
    bool bottom_ = true;
    double value_ = 0.0;
};

/// Idempotent probability measure on a finite set, mu(f) = max_x (lambda(x) + f(x)).
class IdempotentDensity {
public:
    /// Throws InvariantViolation("lambda.range" / "lambda.normalized").
    explicit IdempotentDensity(std::vector<MaxPlusWeight> lambda);
    /// -infinity entries become bottom.
    static IdempotentDensity from_reals(std::span<const double> lambda);

    std::size_t dim() const noexcept { return lambda_.size(); }
    const std::vector<MaxPlusWeight>& lambda() const noexcept { return lambda_; }
    double operator()(std::span<const double> f) const;
    /// True iff every weight is 0 or bottom.
    bool zero_bottom_valued() const noexcept;
    Functional functional() const;

private:
    std::vector<MaxPlusWeight> lambda_;
};

double density_eval(const IdempotentDensity& lambda, std::span<const double> f);

/**
 * Functional given by its values on the two-valued inputs chi_S, S ranging
 * over all subsets. The table must be {0,1}-valued, monotone, 0 on the empty
 * set and 1 on the full set; general inputs evaluate as
 * max over true S of min_S f.
 */
class TableFunctional {
public:
    /// truth[S] is the value on chi_S; size must be 2^dim.
    TableFunctional(std::size_t dim, std::vector<bool> truth);

    std::size_t dim() const noexcept { return dim_; }
    const std::vector<Mask>& minimal_true_sets() const noexcept { return minimal_; }
    double operator()(std::span<const double> f) const;
    Functional functional() const;

private:
    std::size_t dim_;
    std::vector<Mask> minimal_;
};

/// nu(f) = -mu(-f).
Functional dual(const Functional& mu);

struct AxiomWitness {
    RealFunction f;
    std::optional<RealFunction> g;
    std::optional<double> c;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct AxiomReport {
    Axiom axiom = Axiom::normed;
    bool pass = true;
    std::size_t cases = 0;
    std::optional<AxiomWitness> witness;
};

/// Structured sweep (deterministic) followed by `trials` seeded random cases.
/// Reports the first violation with |lhs - rhs| > tol.
AxiomReport check_axiom(const Functional& mu, Axiom axiom, std::size_t trials, double tol,
                        std::uint64_t seed = 0);

/// Shared tuning knobs for the search-based operations.
struct SearchOptions {
    std::size_t budget = 64;
    double tol = 1e-9;
    std::uint64_t seed = 0;
    /// Cap on enumerated C(O_A) candidates per lambda_member call.
    std::size_t max_candidates = 4096;
};

/// Deterministic test functions: all {0,1}- and {-1,1}-valued functions for
/// dim <= 5, indicator families otherwise.
std::vector<RealFunction> structured_functions(std::size_t dim);
/// All functions with values in {lo, hi}, indexed by the mask of hi-points.
std::vector<RealFunction> two_valued_functions(std::size_t dim, double lo = 0.0, double hi = 1.0);

/// Support on a discrete domain: points where changing f only at that point
/// can change mu. Throws BudgetExhaustedInconclusive when sampled pairs that
/// agree on the found set still separate mu but no single coordinate does.
Mask support(const Functional& mu, const SearchOptions& opts = {});
/// Support on a general finite space: x belongs iff changing f on the
/// minimal neighbourhood of x can change mu.
Mask support(const Functional& mu, const FiniteTopSpace& space, const SearchOptions& opts = {});

struct SubsetFamily {
    std::size_t dim = 0;
    std::vector<Mask> members;
};

/// Throws AxiomPrecheckFailed unless mu is normed, weakly additive,
/// monotone and weakly preserves max and min.
void precheck_lambda_axioms(const Functional& mu, const SearchOptions& opts);

/// Membership of A in the separation family via the C(O_A) test.
bool lambda_member(const Functional& mu, const FiniteTopSpace& space, Mask a,
                   const SearchOptions& opts = {});
/// Same, assuming the prechecks already passed.
bool lambda_member_unchecked(const Functional& mu, const FiniteTopSpace& space, Mask a,
                             const SearchOptions& opts);

/// Every nonempty subset passing lambda_member. Throws TooLarge above 12 points.
SubsetFamily lambda_family(const Functional& mu, const FiniteTopSpace& space,
                           const SearchOptions& opts = {});

/// inf over members of sup over the member of f.
double reconstruct(const SubsetFamily& family, std::span<const double> f);

/// mu(f) rebuilt from the separation family alone.
double radul_reconstruct(const Functional& mu, const FiniteTopSpace& space,
                         std::span<const double> f, const SearchOptions& opts = {});

enum class FunctionalClass { r_min, r_max, idempotent_measure, none };
std::string_view to_string(FunctionalClass cls) noexcept;

struct Classification {
    FunctionalClass cls = FunctionalClass::none;
    std::optional<Mask> support;
    std::optional<IdempotentDensity> density;
    /// Set when mu is min- and max-representable at once (Dirac measures).
    bool also_r_max = false;
    /// Failed axiom reports backing a `none` verdict.
    std::vector<AxiomReport> evidence;

    bool is(Extremum kind) const noexcept {
        return kind == Extremum::min ? cls == FunctionalClass::r_min
                                     : cls == FunctionalClass::r_max || also_r_max;
    }
};

Classification classify(const Functional& mu, const SearchOptions& opts = {});

} // namespace idemx

#endif // IDEMX_FUNCTIONALS_HPP
