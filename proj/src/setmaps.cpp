#include "idemx/setmaps.hpp"

#include <algorithm>

#include "idemx/error.hpp"

namespace idemx {

SetValuedMap::SetValuedMap(FiniteTopSpace domain, FiniteTopSpace codomain, std::vector<Mask> images)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), images_(std::move(images)) {
    if (images_.size() != domain_.size()) {
        throw Error(Errc::invariant_violation, "one image per domain point", "map");
    }
    for (std::size_t y = 0; y < images_.size(); ++y) {
        if (images_[y] == 0) {
            throw Error(Errc::invariant_violation, "images must be nonempty",
                        "map." + domain_.name(y));
        }
        if (!is_subset(images_[y], codomain_.all())) {
            throw Error(Errc::invariant_violation, "image outside the codomain",
                        "map." + domain_.name(y));
        }
    }
}

Mask SetValuedMap::lower_preimage(Mask u) const noexcept {
    Mask out = 0;
    for (std::size_t y = 0; y < images_.size(); ++y) {
        if ((images_[y] & u) != 0) {
            out |= bit(y);
        }
    }
    return out;
}

Mask SetValuedMap::upper_preimage(Mask u) const noexcept {
    Mask out = 0;
    for (std::size_t y = 0; y < images_.size(); ++y) {
        if (is_subset(images_[y], u)) {
            out |= bit(y);
        }
    }
    return out;
}

bool is_lsc(const SetValuedMap& r) {
    const auto& x = r.codomain();
    for (std::size_t p = 0; p < x.size(); ++p) {
        if (!r.domain().is_open(r.lower_preimage(x.min_nbhd(p)))) {
            return false;
        }
    }
    return true;
}

bool is_usc(const SetValuedMap& r) {
    for (Mask u : r.codomain().open_sets()) {
        if (!r.domain().is_open(r.upper_preimage(u))) {
            return false;
        }
    }
    return true;
}

bool is_continuous(const SetValuedMap& r) { return is_lsc(r) && is_usc(r); }

bool is_retraction(const SetValuedMap& r, const SubspaceEmbedding& embedding) {
    if (!(r.domain() == embedding.ambient()) || !(r.codomain() == embedding.subspace())) {
        throw Error(Errc::space_mismatch, "retraction must map the ambient space onto the subspace");
    }
    for (std::size_t i = 0; i < embedding.subspace().size(); ++i) {
        if (r.image(embedding.ambient_index(i)) != bit(i)) {
            return false;
        }
    }
    return true;
}

bool is_connected_valued(const SetValuedMap& r) {
    return std::all_of(r.images().begin(), r.images().end(),
                       [&](Mask m) { return r.codomain().is_connected(m); });
}

std::string_view to_string(Semicontinuity sc) noexcept {
    switch (sc) {
    case Semicontinuity::usc: return "usc";
    case Semicontinuity::lsc: return "lsc";
    case Semicontinuity::continuous: return "continuous";
    }
    return "usc";
}

bool satisfies(const SetValuedMap& r, Semicontinuity sc) {
    switch (sc) {
    case Semicontinuity::usc: return is_usc(r);
    case Semicontinuity::lsc: return is_lsc(r);
    case Semicontinuity::continuous: return is_continuous(r);
    }
    return false;
}

SetValuedMap retraction_with(const SubspaceEmbedding& embedding, const std::vector<Mask>& off_images) {
    const auto& y = embedding.ambient();
    std::vector<Mask> images(y.size(), 0);
    std::size_t k = 0;
    for (std::size_t p = 0; p < y.size(); ++p) {
        if (const auto i = embedding.subspace_index(p)) {
            images[p] = bit(*i);
        } else {
            if (k >= off_images.size()) {
                throw Error(Errc::invariant_violation, "missing image for " + y.name(p), "map");
            }
            images[p] = off_images[k++];
        }
    }
    return SetValuedMap(y, embedding.subspace(), std::move(images));
}

std::optional<SetValuedMap> search_retraction(const SubspaceEmbedding& embedding,
                                              Semicontinuity sc) {
    const std::size_t nx = embedding.subspace().size();
    const std::size_t free = embedding.ambient().size() - nx;
    if (nx >= 20) {
        throw Error(Errc::too_large, "subspace too large for retraction search");
    }
    const std::size_t per_point = (std::size_t{1} << nx) - 1;
    std::size_t total = 1;
    for (std::size_t k = 0; k < free; ++k) {
        total *= per_point;
        if (total > kMaxRetractionCandidates) {
            throw Error(Errc::too_large, "more than 10^6 candidate retractions");
        }
    }

    // Candidate images ordered by size, then numerically.
    std::vector<Mask> candidates;
    for (Mask m = 1; m <= full_mask(nx); ++m) {
        candidates.push_back(m);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](Mask a, Mask b) { return cardinality(a) < cardinality(b); });

    std::vector<Mask> chosen(free, 0);
    std::optional<SetValuedMap> hit;
    // Fills positions k.. with images whose sizes sum to `remaining`.
    auto fill = [&](auto&& self, std::size_t k, std::size_t remaining) -> bool {
        if (k == free) {
            if (remaining != 0) {
                return false;
            }
            SetValuedMap r = retraction_with(embedding, chosen);
            if (satisfies(r, sc)) {
                hit = std::move(r);
                return true;
            }
            return false;
        }
        const std::size_t after = free - k - 1;
        for (Mask c : candidates) {
            const std::size_t size = cardinality(c);
            if (size > remaining) {
                break;
            }
            if (remaining - size < after || remaining - size > after * nx) {
                continue;
            }
            chosen[k] = c;
            if (self(self, k + 1, remaining - size)) {
                return true;
            }
        }
        return false;
    };
    for (std::size_t level = free; level <= free * nx; ++level) {
        if (fill(fill, 0, level)) {
            return hit;
        }
    }
    return std::nullopt;
}

} // namespace idemx
