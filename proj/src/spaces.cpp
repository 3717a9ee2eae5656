#include "idemx/spaces.hpp"

#include <cmath>
#include <mutex>
#include <set>

#include "idemx/error.hpp"

namespace idemx {

struct FiniteTopSpace::OpenCache {
    std::once_flag once;
    std::vector<Mask> opens;
};

FiniteTopSpace::FiniteTopSpace(std::vector<std::string> points, std::vector<Mask> min_nbhd)
    : points_(std::move(points)), min_nbhd_(std::move(min_nbhd)),
      cache_(std::make_shared<OpenCache>()) {
    const std::size_t n = points_.size();
    if (n > kMaxPoints) {
        throw Error(Errc::too_large, "at most " + std::to_string(kMaxPoints) + " points",
                    "points");
    }
    if (min_nbhd_.size() != n) {
        throw Error(Errc::invariant_violation, "one neighbourhood per point", "min_nbhd");
    }
    std::set<std::string> seen;
    for (const auto& p : points_) {
        if (!seen.insert(p).second) {
            throw Error(Errc::invariant_violation, "duplicate point '" + p + "'", "points");
        }
    }
    for (std::size_t x = 0; x < n; ++x) {
        if (!is_subset(min_nbhd_[x], all())) {
            throw Error(Errc::invariant_violation, "neighbourhood outside the point set",
                        "min_nbhd." + points_[x]);
        }
        if (!contains(min_nbhd_[x], x)) {
            throw Error(Errc::membership_violation, points_[x] + " not in its own neighbourhood",
                        "min_nbhd." + points_[x]);
        }
    }
    for (std::size_t x = 0; x < n; ++x) {
        for_each_bit(min_nbhd_[x], [&](std::size_t y) {
            if (!is_subset(min_nbhd_[y], min_nbhd_[x])) {
                throw Error(Errc::preorder_violation,
                            "min_nbhd(" + points_[y] + ") not inside min_nbhd(" + points_[x] + ")",
                            "min_nbhd." + points_[x]);
            }
        });
    }
}

FiniteTopSpace FiniteTopSpace::from_minimal_basis(
    std::vector<std::string> points,
    const std::map<std::string, std::vector<std::string>>& min_nbhd) {
    std::vector<Mask> masks(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        masks[i] = bit(i);
    }
    // Resolve names against a scratch discrete space.
    const FiniteTopSpace names = discrete(points);
    for (const auto& [key, members] : min_nbhd) {
        const auto idx = names.index_of(key);
        if (!idx) {
            throw Error(Errc::invariant_violation, "unknown point '" + key + "'", "min_nbhd");
        }
        masks[*idx] = names.mask_of(members, "min_nbhd." + key);
    }
    return FiniteTopSpace(std::move(points), std::move(masks));
}

FiniteTopSpace FiniteTopSpace::discrete(std::vector<std::string> points) {
    std::vector<Mask> masks(points.size());
    for (std::size_t i = 0; i < masks.size(); ++i) {
        masks[i] = bit(i);
    }
    return FiniteTopSpace(std::move(points), std::move(masks));
}

FiniteTopSpace FiniteTopSpace::discrete(std::size_t n) {
    std::vector<std::string> names(n);
    for (std::size_t i = 0; i < n; ++i) {
        names[i] = "x" + std::to_string(i);
    }
    return discrete(std::move(names));
}

FiniteTopSpace FiniteTopSpace::generated_by(std::size_t count, std::span<const Mask> subbasis) {
    if (count > kMaxPoints) {
        throw Error(Errc::too_large, "generated topology on too many points", "points");
    }
    std::vector<Mask> masks(count, full_mask(count));
    for (Mask s : subbasis) {
        for_each_bit(s & full_mask(count), [&](std::size_t p) { masks[p] &= s; });
    }
    std::vector<std::string> names(count);
    for (std::size_t i = 0; i < count; ++i) {
        names[i] = "h" + std::to_string(i);
    }
    return FiniteTopSpace(std::move(names), std::move(masks));
}

std::optional<std::size_t> FiniteTopSpace::index_of(std::string_view point) const {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i] == point) {
            return i;
        }
    }
    return std::nullopt;
}

Mask FiniteTopSpace::mask_of(std::span<const std::string> names, std::string_view field) const {
    Mask m = 0;
    for (const auto& n : names) {
        const auto idx = index_of(n);
        if (!idx) {
            throw Error(Errc::invariant_violation, "unknown point '" + n + "'", std::string(field));
        }
        m |= bit(*idx);
    }
    return m;
}

std::vector<std::string> FiniteTopSpace::names_of(Mask set) const {
    std::vector<std::string> out;
    for_each_bit(set & all(), [&](std::size_t i) { out.push_back(points_[i]); });
    return out;
}

bool FiniteTopSpace::is_open(Mask set) const noexcept {
    bool open = true;
    for_each_bit(set, [&](std::size_t x) {
        if (x >= min_nbhd_.size() || !is_subset(min_nbhd_[x], set)) {
            open = false;
        }
    });
    return open;
}

Mask FiniteTopSpace::closure(Mask set) const noexcept {
    // x is in the closure iff its smallest neighbourhood meets the set.
    Mask out = 0;
    for (std::size_t x = 0; x < size(); ++x) {
        if ((min_nbhd_[x] & set) != 0) {
            out |= bit(x);
        }
    }
    return out;
}

Mask FiniteTopSpace::interior(Mask set) const noexcept {
    Mask out = 0;
    for (std::size_t x = 0; x < size(); ++x) {
        if (is_subset(min_nbhd_[x], set)) {
            out |= bit(x);
        }
    }
    return out;
}

Mask FiniteTopSpace::open_hull(Mask set) const noexcept {
    Mask out = 0;
    for_each_bit(set & all(), [&](std::size_t x) { out |= min_nbhd_[x]; });
    return out;
}

bool FiniteTopSpace::is_connected(Mask set) const {
    set &= all();
    if (set == 0) {
        throw Error(Errc::empty_set, "connectedness of the empty set");
    }
    // Components of the induced topology are the classes of the symmetrized
    // specialization relation restricted to the set.
    Mask reached = bit(static_cast<std::size_t>(std::countr_zero(set)));
    Mask frontier = reached;
    while (frontier != 0) {
        Mask next = 0;
        for_each_bit(frontier, [&](std::size_t x) { next |= min_nbhd_[x] & set; });
        for (std::size_t y = 0; y < size(); ++y) {
            if (contains(set, y) && (min_nbhd_[y] & frontier) != 0) {
                next |= bit(y);
            }
        }
        frontier = next & ~reached;
        reached |= next;
    }
    return reached == set;
}

bool FiniteTopSpace::is_discrete() const noexcept {
    for (std::size_t x = 0; x < size(); ++x) {
        if (min_nbhd_[x] != bit(x)) {
            return false;
        }
    }
    return true;
}

const std::vector<Mask>& FiniteTopSpace::open_sets() const {
    if (size() > kMaxEnumeratedPoints) {
        throw Error(Errc::too_large,
                    "open-set enumeration limited to " + std::to_string(kMaxEnumeratedPoints) +
                        " points",
                    "points");
    }
    std::call_once(cache_->once, [this] {
        const Mask top = all();
        for (Mask u = 0;; ++u) {
            if (is_open(u)) {
                cache_->opens.push_back(u);
            }
            if (u == top) {
                break;
            }
        }
    });
    return cache_->opens;
}

MetricSpace::MetricSpace(std::vector<std::string> points, std::vector<std::vector<double>> dist)
    : points_(std::move(points)), dist_(std::move(dist)) {
    const std::size_t n = points_.size();
    if (dist_.size() != n) {
        throw Error(Errc::invariant_violation, "matrix must be n x n", "dist.shape");
    }
    for (const auto& row : dist_) {
        if (row.size() != n) {
            throw Error(Errc::invariant_violation, "matrix must be n x n", "dist.shape");
        }
        for (double d : row) {
            if (!std::isfinite(d) || d < 0.0) {
                throw Error(Errc::invariant_violation, "distances must be finite and >= 0",
                            "dist.nonnegative");
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (dist_[i][i] != 0.0) {
            throw Error(Errc::invariant_violation, "d(x,x) must be 0", "dist.diagonal");
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (dist_[i][j] != dist_[j][i]) {
                throw Error(Errc::invariant_violation,
                            "d(" + points_[i] + "," + points_[j] + ") != d(" + points_[j] + "," +
                                points_[i] + ")",
                            "dist.symmetry");
            }
            if (i != j && dist_[i][j] == 0.0) {
                throw Error(Errc::invariant_violation, "distinct points at distance 0",
                            "dist.separation");
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                const double bound = dist_[i][k] + dist_[k][j];
                if (dist_[i][j] > bound + 1e-12 * std::max(1.0, bound)) {
                    throw Error(Errc::invariant_violation, "triangle inequality fails",
                                "dist.triangle");
                }
            }
        }
    }
}

MetricSpace MetricSpace::on_line(std::span<const double> coords) {
    const std::size_t n = coords.size();
    std::vector<std::string> names(n);
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        names[i] = "t" + std::to_string(i);
        for (std::size_t j = 0; j < n; ++j) {
            d[i][j] = std::abs(coords[i] - coords[j]);
        }
    }
    return MetricSpace(std::move(names), std::move(d));
}

namespace {

FiniteTopSpace make_induced(const FiniteTopSpace& ambient, Mask subset) {
    std::vector<std::string> names;
    std::vector<std::size_t> order = indices_of(subset);
    std::vector<Mask> nbhd;
    for (std::size_t y : order) {
        names.push_back(ambient.name(y));
    }
    for (std::size_t y : order) {
        Mask local = 0;
        const Mask trace = ambient.min_nbhd(y) & subset;
        for (std::size_t k = 0; k < order.size(); ++k) {
            if (contains(trace, order[k])) {
                local |= bit(k);
            }
        }
        nbhd.push_back(local);
    }
    return FiniteTopSpace(std::move(names), std::move(nbhd));
}

Mask checked_subset(const FiniteTopSpace& ambient, Mask subset) {
    if (subset == 0) {
        throw Error(Errc::empty_set, "subspace must be nonempty", "subset");
    }
    if (!is_subset(subset, ambient.all())) {
        throw Error(Errc::invariant_violation, "subset exceeds the ambient space", "subset");
    }
    return subset;
}

} // namespace

SubspaceEmbedding::SubspaceEmbedding(FiniteTopSpace ambient, Mask subset)
    : ambient_(std::move(ambient)), subset_(checked_subset(ambient_, subset)),
      subspace_(make_induced(ambient_, subset_)), to_ambient_(indices_of(subset_)) {}

std::optional<std::size_t> SubspaceEmbedding::subspace_index(std::size_t y) const {
    if (!contains(subset_, y)) {
        return std::nullopt;
    }
    return cardinality(subset_ & (bit(y) - 1));
}

Mask SubspaceEmbedding::lift(Mask sub) const noexcept {
    Mask out = 0;
    for_each_bit(sub, [&](std::size_t i) {
        if (i < to_ambient_.size()) {
            out |= bit(to_ambient_[i]);
        }
    });
    return out;
}

Mask SubspaceEmbedding::restrict(Mask amb) const noexcept {
    Mask out = 0;
    for (std::size_t i = 0; i < to_ambient_.size(); ++i) {
        if (contains(amb, to_ambient_[i])) {
            out |= bit(i);
        }
    }
    return out;
}

FiniteTopSpace induced_subspace(const SubspaceEmbedding& embedding) {
    return embedding.subspace();
}

} // namespace idemx
