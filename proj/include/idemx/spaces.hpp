#ifndef IDEMX_SPACES_HPP
#define IDEMX_SPACES_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idemx/mask.hpp"

namespace idemx {

/**
 * A finite topological space given by the minimal open neighbourhood of each
 * point. Every finite topology arises this way: U is open iff it contains the
 * minimal neighbourhood of each of its points. Equivalently the data is the
 * specialization preorder y <= x iff y lies in min_nbhd(x).
 *
 * Values are immutable after construction and cheap to copy; the lazily
 * enumerated open-set family is shared between copies.
 */
class FiniteTopSpace {
public:
    /// Validates and builds a space from positional minimal neighbourhoods.
    /// Throws MembershipViolation / PreorderViolation / TooLarge.
    FiniteTopSpace(std::vector<std::string> points, std::vector<Mask> min_nbhd);

    /// Builds from named neighbourhoods. Points missing from the mapping get
    /// the singleton neighbourhood; unknown names raise InvariantViolation.
    static FiniteTopSpace from_minimal_basis(
        std::vector<std::string> points,
        const std::map<std::string, std::vector<std::string>>& min_nbhd);

    static FiniteTopSpace discrete(std::vector<std::string> points);
    /// Discrete space on points named x0..x{n-1}.
    static FiniteTopSpace discrete(std::size_t n);

    /// Topology on `count` points generated by an arbitrary subbasis.
    static FiniteTopSpace generated_by(std::size_t count, std::span<const Mask> subbasis);

    std::size_t size() const noexcept { return points_.size(); }
    const std::vector<std::string>& points() const noexcept { return points_; }
    const std::string& name(std::size_t i) const { return points_.at(i); }
    Mask min_nbhd(std::size_t i) const { return min_nbhd_.at(i); }
    std::span<const Mask> min_nbhds() const noexcept { return min_nbhd_; }
    Mask all() const noexcept { return full_mask(size()); }

    std::optional<std::size_t> index_of(std::string_view point) const;
    /// Throws InvariantViolation(field) for unknown names.
    Mask mask_of(std::span<const std::string> names, std::string_view field = "points") const;
    std::vector<std::string> names_of(Mask set) const;

    bool is_open(Mask set) const noexcept;
    bool is_closed(Mask set) const noexcept { return is_open(all() & ~set); }
    /// Smallest closed superset.
    Mask closure(Mask set) const noexcept;
    /// Largest open subset.
    Mask interior(Mask set) const noexcept;
    /// Smallest open superset (union of minimal neighbourhoods).
    Mask open_hull(Mask set) const noexcept;
    /// Connectedness of `set` in the induced topology. Throws EmptySet.
    bool is_connected(Mask set) const;
    bool is_discrete() const noexcept;

    /// All open sets in ascending numeric order. Throws TooLarge beyond
    /// kMaxEnumeratedPoints points.
    const std::vector<Mask>& open_sets() const;

    static constexpr std::size_t kMaxEnumeratedPoints = 20;

    friend bool operator==(const FiniteTopSpace& a, const FiniteTopSpace& b) {
        return a.points_ == b.points_ && a.min_nbhd_ == b.min_nbhd_;
    }

private:
    struct OpenCache;

    std::vector<std::string> points_;
    std::vector<Mask> min_nbhd_;
    std::shared_ptr<OpenCache> cache_;
};

/// Finite metric space; the constructor enforces metric axioms and reports
/// violations as InvariantViolation("dist.<rule>").
class MetricSpace {
public:
    MetricSpace(std::vector<std::string> points, std::vector<std::vector<double>> dist);

    std::size_t size() const noexcept { return points_.size(); }
    const std::vector<std::string>& points() const noexcept { return points_; }
    double dist(std::size_t i, std::size_t j) const { return dist_[i][j]; }
    const std::vector<std::vector<double>>& matrix() const noexcept { return dist_; }

    /// Points on the real line with the absolute-difference metric.
    static MetricSpace on_line(std::span<const double> coords);

private:
    std::vector<std::string> points_;
    std::vector<std::vector<double>> dist_;
};

/// X sitting inside an ambient space Y with the induced topology.
class SubspaceEmbedding {
public:
    /// Throws EmptySet for an empty subset and InvariantViolation if the
    /// subset has bits beyond the ambient point count.
    SubspaceEmbedding(FiniteTopSpace ambient, Mask subset);

    const FiniteTopSpace& ambient() const noexcept { return ambient_; }
    Mask subset() const noexcept { return subset_; }
    /// The induced subspace; its points keep the ambient names in ambient order.
    const FiniteTopSpace& subspace() const noexcept { return subspace_; }
    bool subset_discrete() const noexcept { return subspace_.is_discrete(); }

    /// Ambient index of subspace point i.
    std::size_t ambient_index(std::size_t i) const { return to_ambient_.at(i); }
    /// Subspace index of ambient point y, if y lies in X.
    std::optional<std::size_t> subspace_index(std::size_t y) const;
    Mask lift(Mask sub) const noexcept;
    Mask restrict(Mask amb) const noexcept;

private:
    FiniteTopSpace ambient_;
    Mask subset_;
    FiniteTopSpace subspace_;
    std::vector<std::size_t> to_ambient_;
};

/// Subspace topology on `subset` (positional, ambient order).
FiniteTopSpace induced_subspace(const SubspaceEmbedding& embedding);

} // namespace idemx

#endif // IDEMX_SPACES_HPP
