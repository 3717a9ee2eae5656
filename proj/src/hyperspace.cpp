#include "idemx/hyperspace.hpp"

#include <algorithm>
#include <limits>

#include "idemx/error.hpp"

namespace idemx {

std::string_view to_string(VietorisMode mode) noexcept {
    switch (mode) {
    case VietorisMode::full: return "full";
    case VietorisMode::upper: return "upper";
    case VietorisMode::lower: return "lower";
    }
    return "full";
}

HyperPoint::HyperPoint(std::size_t space_size, Mask member) : size_(space_size), member_(member) {
    if (member == 0) {
        throw Error(Errc::empty_set, "hyperspace points are nonempty", "member");
    }
    if (space_size > kMaxPoints || !is_subset(member, full_mask(space_size))) {
        throw Error(Errc::invariant_violation, "member outside the space", "member");
    }
}

double hausdorff_distance(const HyperPoint& f, const HyperPoint& g, const MetricSpace& metric) {
    if (f.space_size() != metric.size() || g.space_size() != metric.size()) {
        throw Error(Errc::space_mismatch, "hyperspace points from a different space");
    }
    auto directed = [&](Mask from, Mask to) {
        double worst = 0.0;
        for_each_bit(from, [&](std::size_t x) {
            double nearest = std::numeric_limits<double>::infinity();
            for_each_bit(to, [&](std::size_t y) { nearest = std::min(nearest, metric.dist(x, y)); });
            worst = std::max(worst, nearest);
        });
        return worst;
    };
    return std::max(directed(f.member(), g.member()), directed(g.member(), f.member()));
}

VietorisNbhd::VietorisNbhd(const FiniteTopSpace& space, std::vector<Mask> opens, VietorisMode mode)
    : opens_(std::move(opens)), mode_(mode) {
    if (opens_.empty()) {
        throw Error(Errc::mode_arity, "at least one open set", "opens");
    }
    if (mode_ == VietorisMode::upper && opens_.size() != 1) {
        throw Error(Errc::mode_arity, "upper neighbourhoods take exactly one open set", "opens");
    }
    for (Mask u : opens_) {
        if (!is_subset(u, space.all()) || !space.is_open(u)) {
            throw Error(Errc::invariant_violation, "neighbourhood sets must be open", "opens");
        }
    }
}

bool VietorisNbhd::contains(const HyperPoint& f) const noexcept {
    const Mask m = f.member();
    const bool meets_all =
        std::all_of(opens_.begin(), opens_.end(), [m](Mask u) { return (m & u) != 0; });
    switch (mode_) {
    case VietorisMode::upper:
        return is_subset(m, opens_.front());
    case VietorisMode::lower:
        return meets_all;
    case VietorisMode::full: {
        Mask cover = 0;
        for (Mask u : opens_) {
            cover |= u;
        }
        return meets_all && is_subset(m, cover);
    }
    }
    return false;
}

bool vietoris_contains(const VietorisNbhd& nbhd, const HyperPoint& f) { return nbhd.contains(f); }

std::vector<HyperPoint> enumerate_hyperspace(const FiniteTopSpace& space) {
    const std::size_t n = space.size();
    if (n > 16) {
        throw Error(Errc::too_large, "hyperspace enumeration limited to 16 points");
    }
    std::vector<HyperPoint> out;
    out.reserve((std::size_t{1} << n) - 1);
    for (Mask m = 1; m <= space.all(); ++m) {
        out.emplace_back(n, m);
    }
    return out;
}

PhiReport phi_roundtrip(const FiniteTopSpace& space, Extremum kind, const SearchOptions& opts) {
    const std::size_t n = space.size();
    if (n > 6) {
        throw Error(Errc::too_large, "round trip enumeration limited to 6 points");
    }
    PhiReport report;
    for (const auto& point : enumerate_hyperspace(space)) {
        const Functional mu = SupportFunctional(kind, point.member(), n).functional();
        ++report.total;
        const Classification c = classify(mu, opts);
        if (support(mu, space, opts) == point.member() && c.is(kind) &&
            c.support == point.member()) {
            ++report.held;
        } else {
            report.mismatches.push_back(point.member());
        }
    }
    return report;
}

CorrespondenceReport vietoris_correspondence(std::size_t n, Extremum kind,
                                             FunctionalTopology topology, VietorisMode mode) {
    if (n == 0 || n > 6) {
        throw Error(Errc::too_large, "correspondence check needs 1..6 points");
    }
    // Hyperspace point h stands for the subset h + 1.
    const std::size_t count = (std::size_t{1} << n) - 1;
    const Mask top = full_mask(n);

    std::vector<Mask> functional_subbasis;
    std::size_t codes = 1;
    for (std::size_t i = 0; i < n; ++i) {
        codes *= 3;
    }
    for (std::size_t code = 0; code < codes; ++code) {
        RealFunction f(n);
        std::size_t c = code;
        for (std::size_t i = 0; i < n; ++i) {
            f[i] = static_cast<double>(c % 3);
            c /= 3;
        }
        for (double a : {0.5, 1.5}) {
            Mask above = 0;
            Mask below = 0;
            for (std::size_t h = 0; h < count; ++h) {
                const double v = SupportFunctional(kind, static_cast<Mask>(h + 1), n)(f);
                if (v > a) {
                    above |= bit(h);
                }
                if (v < a) {
                    below |= bit(h);
                }
            }
            if (topology != FunctionalTopology::upper_sets) {
                functional_subbasis.push_back(above);
            }
            if (topology != FunctionalTopology::lower_sets) {
                functional_subbasis.push_back(below);
            }
        }
    }

    std::vector<Mask> vietoris_subbasis;
    for (Mask u = 0; u <= top; ++u) {
        Mask inside = 0;
        Mask meets = 0;
        for (std::size_t h = 0; h < count; ++h) {
            const Mask f = static_cast<Mask>(h + 1);
            if (is_subset(f, u)) {
                inside |= bit(h);
            }
            if ((f & u) != 0) {
                meets |= bit(h);
            }
        }
        if (mode != VietorisMode::lower) {
            vietoris_subbasis.push_back(inside);
        }
        if (mode != VietorisMode::upper) {
            vietoris_subbasis.push_back(meets);
        }
    }

    CorrespondenceReport report{FiniteTopSpace::generated_by(count, functional_subbasis),
                                FiniteTopSpace::generated_by(count, vietoris_subbasis), false};
    report.homeomorphic = report.functional_side == report.hyperspace_side;
    return report;
}

} // namespace idemx
