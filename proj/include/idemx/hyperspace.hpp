#ifndef IDEMX_HYPERSPACE_HPP
#define IDEMX_HYPERSPACE_HPP

#include <cstddef>
#include <string_view>
#include <vector>

#include "idemx/functionals.hpp"
#include "idemx/mask.hpp"
#include "idemx/spaces.hpp"

namespace idemx {

/// Nonempty subset of a finite space, viewed as a point of the hyperspace.
class HyperPoint {
public:
    /// Throws EmptySet / InvariantViolation.
    HyperPoint(std::size_t space_size, Mask member);

    Mask member() const noexcept { return member_; }
    std::size_t space_size() const noexcept { return size_; }

    friend bool operator==(const HyperPoint&, const HyperPoint&) = default;

private:
    std::size_t size_;
    Mask member_;
};

double hausdorff_distance(const HyperPoint& f, const HyperPoint& g, const MetricSpace& metric);

enum class VietorisMode { full, upper, lower };
std::string_view to_string(VietorisMode mode) noexcept;

/// Basic neighbourhood <U_1,...,U_k> of the Vietoris topology or of one of
/// its halves.
class VietorisNbhd {
public:
    /// Each U_i must be open in `space`; upper mode takes exactly one set
    /// (ModeArity otherwise).
    VietorisNbhd(const FiniteTopSpace& space, std::vector<Mask> opens, VietorisMode mode);

    const std::vector<Mask>& opens() const noexcept { return opens_; }
    VietorisMode mode() const noexcept { return mode_; }
    bool contains(const HyperPoint& f) const noexcept;

private:
    std::vector<Mask> opens_;
    VietorisMode mode_;
};

bool vietoris_contains(const VietorisNbhd& nbhd, const HyperPoint& f);

/// All 2^n - 1 nonempty subsets in ascending numeric order. Throws TooLarge
/// beyond 16 points.
std::vector<HyperPoint> enumerate_hyperspace(const FiniteTopSpace& space);

struct PhiReport {
    std::size_t total = 0;
    std::size_t held = 0;
    /// Subsets F whose functional did not round trip.
    std::vector<Mask> mismatches;
    bool ok() const noexcept { return held == total; }
};

/// F -> mu_F -> (support, class) round trip for every nonempty F.
/// Throws TooLarge beyond 6 points.
PhiReport phi_roundtrip(const FiniteTopSpace& space, Extremum kind, const SearchOptions& opts = {});

/// Topology put on the finite functional space R(X)_c.
enum class FunctionalTopology {
    lower_sets,  ///< generated by {mu : mu(f) > a}
    upper_sets,  ///< generated by {mu : mu(f) < a}
    pointwise,   ///< both families together
};

struct CorrespondenceReport {
    /// Topology on R(X)_c transported to hyperspace indices.
    FiniteTopSpace functional_side;
    /// Vietoris-type topology on the hyperspace.
    FiniteTopSpace hyperspace_side;
    bool homeomorphic = false;
};

/**
 * Exact finite check that F -> mu_F carries the chosen functional topology
 * onto the chosen Vietoris topology, on the discrete space with n <= 6
 * points. Both sides are built independently as generated topologies on the
 * 2^n - 1 hyperspace points.
 */
CorrespondenceReport vietoris_correspondence(std::size_t n, Extremum kind,
                                             FunctionalTopology topology, VietorisMode mode);

} // namespace idemx

#endif // IDEMX_HYPERSPACE_HPP
