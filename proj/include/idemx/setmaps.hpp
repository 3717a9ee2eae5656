#ifndef IDEMX_SETMAPS_HPP
#define IDEMX_SETMAPS_HPP

#include <optional>
#include <string_view>
#include <vector>

#include "idemx/mask.hpp"
#include "idemx/spaces.hpp"

namespace idemx {

/// Point-to-nonempty-subset map between finite spaces. Images are masks
/// over codomain indices.
class SetValuedMap {
public:
    /// Throws InvariantViolation("map.<point>") for empty or out-of-range images.
    SetValuedMap(FiniteTopSpace domain, FiniteTopSpace codomain, std::vector<Mask> images);

    const FiniteTopSpace& domain() const noexcept { return domain_; }
    const FiniteTopSpace& codomain() const noexcept { return codomain_; }
    Mask image(std::size_t y) const { return images_.at(y); }
    const std::vector<Mask>& images() const noexcept { return images_; }

    /// {y : r(y) meets u}.
    Mask lower_preimage(Mask u) const noexcept;
    /// {y : r(y) inside u}.
    Mask upper_preimage(Mask u) const noexcept;

    friend bool operator==(const SetValuedMap&, const SetValuedMap&) = default;

private:
    FiniteTopSpace domain_;
    FiniteTopSpace codomain_;
    std::vector<Mask> images_;
};

/// Lower semicontinuity. Exact for any size: lower preimages commute with
/// unions, so minimal neighbourhoods of the codomain suffice.
bool is_lsc(const SetValuedMap& r);
/// Upper semicontinuity, exhaustive over the codomain's open sets. Throws
/// TooLarge beyond FiniteTopSpace::kMaxEnumeratedPoints codomain points.
bool is_usc(const SetValuedMap& r);
bool is_continuous(const SetValuedMap& r);

/// r(x) = {x} on X. Throws SpaceMismatch when r does not go from the
/// ambient space to the subspace of `embedding`.
bool is_retraction(const SetValuedMap& r, const SubspaceEmbedding& embedding);
bool is_connected_valued(const SetValuedMap& r);

enum class Semicontinuity { usc, lsc, continuous };
std::string_view to_string(Semicontinuity sc) noexcept;
bool satisfies(const SetValuedMap& r, Semicontinuity sc);

/// Upper bound on the candidate assignments search_retraction will scan.
inline constexpr std::size_t kMaxRetractionCandidates = 1'000'000;

/**
 * Exhaustive search for a retraction Y -> X with the requested
 * semicontinuity. Candidates are scanned by ascending total image size, then
 * lexicographically, so the first hit is a smallest one. Throws TooLarge when
 * (2^|X| - 1)^|Y \ X| exceeds kMaxRetractionCandidates.
 */
std::optional<SetValuedMap> search_retraction(const SubspaceEmbedding& embedding,
                                              Semicontinuity sc);

/// The map with r(x) = {x} on X and off_images[k] at the k-th point of Y \ X
/// (ascending ambient order). Images are subspace masks.
SetValuedMap retraction_with(const SubspaceEmbedding& embedding, const std::vector<Mask>& off_images);

} // namespace idemx

#endif // IDEMX_SETMAPS_HPP
