#ifndef IDEMX_EXTENDERS_HPP
#define IDEMX_EXTENDERS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idemx/functionals.hpp"
#include "idemx/setmaps.hpp"
#include "idemx/spaces.hpp"

namespace idemx {

/**
 * Maps functions on X (subspace indices) to functions on Y (ambient
 * indices). Extenders built from a retraction remember it; user extenders
 * are opaque and every recovery operation prechecks what it needs.
 */
class Extender {
public:
    using Apply = std::function<RealFunction(std::span<const double>)>;

    Extender(SubspaceEmbedding embedding, Apply apply, std::string label);

    const SubspaceEmbedding& embedding() const noexcept { return embedding_; }
    const std::string& label() const noexcept { return label_; }
    RealFunction operator()(std::span<const double> f) const { return apply_(f); }

    /// mu_y(f) = u(f)(y).
    Functional functional_at(std::size_t y) const;

    bool from_retraction() const noexcept { return retraction_.has_value(); }
    const std::optional<SetValuedMap>& retraction() const noexcept { return retraction_; }
    std::optional<Extremum> kind() const noexcept { return kind_; }

private:
    friend Extender build_extender(const SetValuedMap& r, const SubspaceEmbedding& embedding,
                                   Extremum kind);

    SubspaceEmbedding embedding_;
    Apply apply_;
    std::string label_;
    std::optional<SetValuedMap> retraction_;
    std::optional<Extremum> kind_;
};

/// u(f)(y) = min (or max) of f over r(y). Throws NotARetraction.
Extender build_extender(const SetValuedMap& r, const SubspaceEmbedding& embedding, Extremum kind);

/// Extender that copies f on X and evaluates off_points[k] at the k-th point
/// of Y \ X (ascending ambient order).
Extender extender_from_functionals(const SubspaceEmbedding& embedding,
                                   std::vector<Functional> off_points, std::string label = "user");

enum class FunctionClass { continuous, lsc, usc, neither };
std::string_view to_string(FunctionClass cls) noexcept;

struct ThresholdWitness {
    double threshold = 0.0;
    /// true: the set {g > threshold}; false: the set {g < threshold}.
    bool above = true;
    Mask preimage = 0;
};

struct FunctionClassReport {
    FunctionClass cls = FunctionClass::continuous;
    /// Threshold sets that failed to be open.
    std::vector<ThresholdWitness> witnesses;

    bool lower_semicontinuous() const noexcept {
        return cls == FunctionClass::continuous || cls == FunctionClass::lsc;
    }
    bool upper_semicontinuous() const noexcept {
        return cls == FunctionClass::continuous || cls == FunctionClass::usc;
    }
};

/// Classifies g by the openness of its strict super- and sub-level sets at
/// the midpoints between consecutive distinct values.
FunctionClassReport function_class(std::span<const double> g, const FiniteTopSpace& space);

struct ImplicationCheck {
    std::string name;
    bool applicable = false;
    bool held = true;
    std::size_t functions_checked = 0;
    std::optional<RealFunction> witness;
};

struct SemicontinuityTheoremReport {
    bool r_usc = false;
    bool r_lsc = false;
    std::vector<ImplicationCheck> implications;
    bool axioms_ok = true;
    std::vector<std::string> axiom_failures;

    bool ok() const noexcept;
};

/// Forward implications from the semicontinuity of r to the function class
/// of every tested u(f), plus the axioms of every mu_y. Throws
/// NotARetraction when r is not the identity on X.
SemicontinuityTheoremReport verify_semicontinuity_theorem(const SetValuedMap& r,
                                                          const SubspaceEmbedding& embedding,
                                                          Extremum kind, std::size_t sample,
                                                          std::uint64_t seed = 0);

/// The axioms mu_y must satisfy for an extender of the given kind.
std::vector<Axiom> extender_axioms(Extremum kind);

/// r(y) = support of mu_y. Throws ClassificationFailed(y) unless every mu_y
/// classifies as R_min or R_max.
SetValuedMap supports_retraction(const Extender& u, const SearchOptions& opts = {});

enum class EVariant { max_usc, min_lsc };
std::string_view to_string(EVariant variant) noexcept;

struct EOperatorResult {
    /// Ambient mask.
    Mask set = 0;
    /// Per ambient point in `set`: the schedule constant c that first put it
    /// there, or 0 when only a random member of C_U did.
    std::vector<int> attained_by;
    /// Set for user extenders, where the finite schedule carries no
    /// exactness guarantee.
    bool schedule_limited = false;
};

/// Throws NotNormalized when u(1_X) != 1_Y. `open_u` is a subspace mask and
/// must be open in X.
EOperatorResult e_operator(const Extender& u, Mask open_u, EVariant variant,
                           const SearchOptions& opts = {});

/// r(y) = intersection of closure_X(U) over opens U with y in e(U); all of X
/// when y lies in no e(U).
SetValuedMap recover_retraction_via_e(const Extender& u, EVariant variant,
                                      const SearchOptions& opts = {});

struct EMultiplicativeReport {
    std::size_t pairs_checked = 0;
    bool multiplicative = true;
    bool monotone = true;
    std::optional<std::pair<Mask, Mask>> witness;
    bool ok() const noexcept { return multiplicative && monotone; }
};

/// e(U n V) = e(U) n e(V) and U c V => e(U) c e(V) over all open pairs of X
/// (|X| <= 6). Throws AxiomPrecheckFailed unless every mu_y preserves max
/// (resp. min for the min variant).
EMultiplicativeReport check_e_multiplicative(const Extender& u, EVariant variant,
                                             const SearchOptions& opts = {});

struct ConnectivityReport {
    /// G = union of e(U), ambient mask.
    Mask g = 0;
    /// Recovered map on the subspace G.
    std::optional<SetValuedMap> recovered;
    bool connected_valued = false;
    bool usc = false;
    bool singleton_valued = false;
};

/// Throws NotNormalized / AxiomPrecheckFailed unless u(1_X) = 1_Y and every
/// mu_y preserves both max and min.
ConnectivityReport connectivity_analysis(const Extender& u, EVariant variant = EVariant::max_usc,
                                         const SearchOptions& opts = {});

} // namespace idemx

#endif // IDEMX_EXTENDERS_HPP
