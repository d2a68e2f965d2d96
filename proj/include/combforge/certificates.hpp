#pragma once

#include "combforge/core.hpp"

namespace combforge {

//! How a comb's spine prefix is pinned to an actual ray: either a declared
//! registry end, or a deterministic extension rule for a search branch.
struct SpineAnchor {
    enum Kind { registry_end, extension_rule } kind = registry_end;
    int end_id = -1;
    std::string rule;  // e.g. "bfs-lowest-index-descent" when kind == extension_rule
};

/**
 * Subdivided star attached to U: paths leave `center`, are pairwise disjoint
 * except at the center, and their last vertices (the leaves) lie in U.
 * `degenerate` flags centers of star-degree < 3 and searches that exhausted a
 * finite U with fewer than k leaves.
 */
struct StarCertificate {
    VertexId center = 0;
    std::vector<std::vector<VertexId>> paths;  // each begins at center, ends at a leaf
    bool degenerate = false;
    bool u_exhausted = false;  // U was provably exhausted below the horizon

    std::vector<VertexId> leaves() const {
        std::vector<VertexId> out;
        for (const auto& p : paths) out.push_back(p.back());
        return out;
    }
};

/**
 * Comb attached to U: spine prefix along a ray plus pairwise disjoint tooth
 * paths, each meeting the spine exactly in its first vertex and ending in U
 * (the teeth). Trivial tooth paths (spine vertex already in U) are allowed.
 */
struct CombCertificate {
    std::vector<VertexId> spine;                     // prefix of the anchored ray
    std::vector<std::vector<VertexId>> tooth_paths;  // first on spine, last in U
    SpineAnchor anchor;
    bool undominated = false;  // registry ground truth for the anchored end

    std::vector<VertexId> teeth() const {
        std::vector<VertexId> out;
        for (const auto& p : tooth_paths) out.push_back(p.back());
        return out;
    }
};

/**
 * k paths from a dominator to a ray, pairwise disjoint except at the
 * dominator: the finite stage of "v dominates the end of R".
 */
struct FanCertificate {
    VertexId dominator = 0;
    int end_id = -1;
    std::vector<std::vector<VertexId>> paths;  // each begins at dominator, ends on the ray
};

using StarComb = std::variant<StarCertificate, CombCertificate>;

inline bool is_star(const Outcome<StarComb>& o) {
    return ok(o) && value(o).index() == 0;
}
inline bool is_comb(const Outcome<StarComb>& o) {
    return ok(o) && value(o).index() == 1;
}
inline const StarCertificate& star_of(const Outcome<StarComb>& o) {
    return std::get<StarCertificate>(value(o));
}
inline const CombCertificate& comb_of(const Outcome<StarComb>& o) {
    return std::get<CombCertificate>(value(o));
}

}  // namespace combforge
