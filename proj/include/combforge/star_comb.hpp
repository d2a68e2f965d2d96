#pragma once

#include "combforge/certificates.hpp"
#include "combforge/core.hpp"
#include "combforge/tree.hpp"
#include "combforge/verify.hpp"

namespace combforge {

//! What the engine knows about U before searching: the predicate plus the
//! declared ends in its closure (families declare these; checks validate).
struct USet {
    std::string name;
    std::function<bool(VertexId)> member;
    bool infinite = true;
    std::vector<int> closure_end_ids;
};

/**
 * Comb attached to U along a declared end: spine = representative ray
 * prefix; teeth collected greedily walking the spine, each via the shortest
 * (then lexicographically least) path into U avoiding the spine region and
 * previously used vertices. Trivial teeth (spine vertices in U) allowed.
 */
inline Outcome<CombCertificate> comb_along_end(const GraphOracle& g,
                                               const EndDescriptor& end, const USet& u,
                                               const Budget& budget) {
    const std::size_t spine_limit =
        std::max<std::size_t>(4 * (std::size_t)budget.k, (std::size_t)budget.depth);
    std::vector<VertexId> full_spine;
    for (std::size_t j = 0; j < spine_limit; ++j) full_spine.push_back(end.ray(j));
    std::unordered_set<VertexId> blocked(full_spine.begin(), full_spine.end());

    CombCertificate comb;
    comb.anchor.kind = SpineAnchor::registry_end;
    comb.anchor.end_id = end.id;
    comb.undominated = !end.dominated;
    std::size_t teeth_end = 0;  // spine prefix length used so far
    std::unordered_set<VertexId> used;

    for (std::size_t j = 0; j < spine_limit && (int)comb.tooth_paths.size() < budget.k; ++j) {
        VertexId s = full_spine[j];
        if (u.member(s)) {
            comb.tooth_paths.push_back({s});
            teeth_end = j + 1;
            continue;
        }
        // shortest path from s into U, off the spine and off used vertices
        std::unordered_set<VertexId> avoid = blocked;
        for (VertexId v : used) avoid.insert(v);
        avoid.erase(s);
        BfsTree reach = bfs_within(g, s, budget.depth, budget.horizon, budget.cap, &avoid);
        std::optional<VertexId> hit;
        for (VertexId v : reach.order)
            if (v != s && u.member(v)) { hit = v; break; }
        if (!hit) continue;
        auto p = reach.path_to_root(*hit);  // hit .. s
        std::reverse(p.begin(), p.end());   // s .. hit
        for (VertexId v : p)
            if (v != s) used.insert(v);
        comb.tooth_paths.push_back(std::move(p));
        teeth_end = j + 1;
    }
    if ((int)comb.tooth_paths.size() < budget.k)
        return Exhausted{"comb", "collected " + std::to_string(comb.tooth_paths.size()) +
                                     " teeth within spine limit " +
                                     std::to_string(spine_limit)};
    comb.spine.assign(full_spine.begin(),
                      full_spine.begin() + std::max<std::size_t>(teeth_end, 2));
    return comb;
}

namespace detail {

//! Star assembly inside a BFS tree: per vertex, the number of child subtrees
//! containing U, with the nearest (then lowest-index) U-vertex per subtree.
struct SubtreeUInfo {
    std::map<VertexId, std::vector<VertexId>> child_hit;  // vertex -> best U-hit per child
};

inline SubtreeUInfo subtree_u_hits(const BfsTree& bfs,
                                   const std::function<bool(VertexId)>& in_u) {
    SubtreeUInfo info;
    // best U-hit in the subtree rooted at v: nearest by depth, then lowest index
    std::unordered_map<VertexId, std::pair<int, VertexId>> best;
    for (auto it = bfs.order.rbegin(); it != bfs.order.rend(); ++it) {
        VertexId v = *it;
        std::pair<int, VertexId> b{INT32_MAX, 0};
        if (in_u(v)) b = {bfs.depth.at(v), v};
        // children were visited later in order; collect from stored bests
        // (children of v are exactly vertices w with parent == v)
        auto stored = best.find(v);
        if (stored != best.end()) b = std::min(b, stored->second);
        best[v] = b;
        auto pit = bfs.parent.find(v);
        if (pit == bfs.parent.end()) continue;
        VertexId p = pit->second;
        if (b.first != INT32_MAX) info.child_hit[p].push_back(b.second);
        auto cur = best.find(p);
        if (cur == best.end() || b < cur->second) best[p] = b;
    }
    return info;
}

}  // namespace detail

/**
 * Star-or-comb search attached to U.
 *
 * Routing follows the declared picture of U: an infinite U with a declared
 * end in its closure yields a comb along the least such end; otherwise a
 * breadth-first tree grown from the first U-vertex is scanned for a center
 * with k subtree-disjoint U-connections. A U provably exhausted below the
 * horizon without k leaves yields the degenerate star on what exists.
 */
inline Outcome<StarComb> star_comb(const GraphOracle& g, const USet& u, const Budget& budget) {
    if (!u.closure_end_ids.empty() && u.infinite) {
        int least = *std::min_element(u.closure_end_ids.begin(), u.closure_end_ids.end());
        const EndDescriptor* end = g.ends().find(least);
        if (!end) throw PreconditionError("declared closure end missing from registry");
        auto c = comb_along_end(g, *end, u, budget);
        if (ok(c)) return StarComb{value(c)};
        return exhausted(c);
    }

    // star route: BFS from the first U-vertex below the horizon
    std::optional<VertexId> root;
    for (VertexId v = 0; v < budget.horizon; ++v) {
        if (!g.has_vertex(v)) break;
        if (u.member(v)) { root = v; break; }
    }
    if (!root) return Exhausted{"star", "no U-vertex below horizon"};

    if (!u.infinite) {
        // a declared-finite U is exhausted once every member below the
        // horizon is connected up; the star is degenerate when U is small
        std::vector<VertexId> members;
        for (VertexId v = *root; v < budget.horizon; ++v) {
            if (!g.has_vertex(v)) break;
            if (u.member(v)) members.push_back(v);
        }
        BfsTree reach = bfs_within(g, *root, budget.depth, budget.horizon, budget.cap);
        auto info = detail::subtree_u_hits(reach, u.member);
        std::optional<VertexId> center;
        std::size_t best_spread = 0;
        for (auto& [v, hits] : info.child_hit) {
            std::size_t spread = hits.size() + (u.member(v) ? 1 : 0);
            if (spread > best_spread) {
                best_spread = spread;
                center = v;
            }
        }
        StarCertificate s;
        if (!center) {
            s.center = *root;
            s.paths = {{*root}};
        } else {
            s.center = *center;
            auto hits = info.child_hit.at(*center);
            std::sort(hits.begin(), hits.end(), [&](VertexId a, VertexId b) {
                return std::make_pair(reach.depth.at(a), a) <
                       std::make_pair(reach.depth.at(b), b);
            });
            for (VertexId leaf : hits) {
                if ((int)s.paths.size() >= budget.k) break;
                auto p = reach.path_to_root(leaf);
                std::vector<VertexId> seg;
                for (VertexId v : p) {
                    seg.push_back(v);
                    if (v == *center) break;
                }
                std::reverse(seg.begin(), seg.end());
                s.paths.push_back(std::move(seg));
            }
            if (u.member(*center) && (int)s.paths.size() < budget.k)
                s.paths.push_back({*center});
        }
        s.degenerate = (int)s.paths.size() < std::max(budget.k, 3);
        s.u_exhausted = true;
        for (VertexId m : members)
            if (!reach.contains(m)) s.u_exhausted = false;
        return StarComb{s};
    }

    BfsTree bfs = bfs_within(g, *root, budget.depth, budget.horizon, budget.cap);
    auto info = detail::subtree_u_hits(bfs, u.member);

    // candidate centers: k child subtrees holding U-vertices; deepest first
    std::optional<VertexId> center;
    int best_depth = -1;
    for (auto& [v, hits] : info.child_hit) {
        if ((int)hits.size() < budget.k) continue;
        int d = bfs.depth.at(v);
        if (d > best_depth || (d == best_depth && center && v < *center)) {
            best_depth = d;
            center = v;
        }
    }
    auto build_star = [&](VertexId c, int want) {
        StarCertificate s;
        s.center = c;
        auto hits = info.child_hit.count(c) ? info.child_hit.at(c) : std::vector<VertexId>{};
        std::sort(hits.begin(), hits.end(), [&](VertexId a, VertexId b) {
            return std::make_pair(bfs.depth.at(a), a) < std::make_pair(bfs.depth.at(b), b);
        });
        for (VertexId leaf : hits) {
            if ((int)s.paths.size() >= want) break;
            auto p = bfs.path_to_root(leaf);  // leaf .. root
            // trim to the segment leaf..c
            std::vector<VertexId> seg;
            for (VertexId v : p) {
                seg.push_back(v);
                if (v == c) break;
            }
            std::reverse(seg.begin(), seg.end());  // c .. leaf
            s.paths.push_back(std::move(seg));
        }
        if (u.member(c) && (int)s.paths.size() < want) s.paths.push_back({c});
        s.degenerate = (int)s.paths.size() < 3 || (int)s.paths.size() < want;
        return s;
    };
    if (center) return StarComb{build_star(*center, budget.k)};

    // no k-spread center: if U is provably exhausted in the explored region,
    // return the best star available (degenerate), else report the budget.
    bool u_known = !bfs.clipped;
    if (u_known) {
        std::optional<VertexId> best;
        std::size_t best_spread = 0;
        for (auto& [v, hits] : info.child_hit) {
            std::size_t spread = hits.size() + (u.member(v) ? 1 : 0);
            if (spread > best_spread || (spread == best_spread && best && v < *best)) {
                best_spread = spread;
                best = v;
            }
        }
        StarCertificate s;
        if (best) {
            s = build_star(*best, (int)info.child_hit.at(*best).size());
        } else {
            // component met no U beyond the root (or only the root)
            s.center = *root;
            s.paths = {{*root}};
            s.degenerate = true;
        }
        s.u_exhausted = true;
        s.degenerate = true;
        return StarComb{s};
    }
    return Exhausted{"star", "no k-spread center within depth/horizon"};
}

/**
 * Star attached to U inside a rayless (finite snapshot) tree, found by tree
 * order alone: the deepest vertex whose child subtrees hold k U-vertices; if
 * no vertex branches enough, the best available star is returned flagged
 * degenerate (paths live in distinct child subtrees, so they meet only at
 * the center). Returns nullopt when the tree holds no U-vertex at all.
 */
inline std::optional<StarCertificate> star_in_rayless_tree(
    const RootedTree& t, const std::function<bool(VertexId)>& in_u, int k) {
    // per vertex: nearest U-descendant per child subtree (depth, index order)
    std::map<VertexId, std::vector<VertexId>> child_hits;
    std::map<VertexId, std::optional<VertexId>> best_in_subtree;
    // walk vertices deepest-first (insertion order reversed is not height
    // order, so sort explicitly)
    std::vector<VertexId> vs = t.order();
    std::sort(vs.begin(), vs.end(), [&](VertexId a, VertexId b) {
        return std::make_pair(-t.height(a), a) < std::make_pair(-t.height(b), b);
    });
    auto better = [&](VertexId a, VertexId b) {
        return std::make_pair(t.height(a), a) < std::make_pair(t.height(b), b);
    };
    for (VertexId v : vs) {
        std::optional<VertexId> best;
        if (in_u(v)) best = v;
        for (VertexId c : t.children(v)) {
            auto sub = best_in_subtree[c];
            if (!sub) continue;
            child_hits[v].push_back(*sub);
            if (!best || better(*sub, *best)) best = *sub;
        }
        best_in_subtree[v] = best;
    }
    std::optional<VertexId> center;
    for (VertexId v : vs) {  // deepest first
        if ((int)child_hits[v].size() >= k) { center = v; break; }
    }
    bool degenerate = false;
    if (!center) {
        std::size_t best_spread = 0;
        for (VertexId v : vs) {
            std::size_t spread = child_hits[v].size() + (in_u(v) ? 1 : 0);
            if (spread > best_spread) {
                best_spread = spread;
                center = v;
            }
        }
        degenerate = true;
        if (!center) return std::nullopt;
    }
    StarCertificate s;
    s.center = *center;
    auto hits = child_hits[*center];
    std::sort(hits.begin(), hits.end(), better);
    for (VertexId leaf : hits) {
        if ((int)s.paths.size() >= k) break;
        std::vector<VertexId> seg{leaf};
        while (seg.back() != *center) seg.push_back(*t.parent(seg.back()));
        std::reverse(seg.begin(), seg.end());
        s.paths.push_back(std::move(seg));
    }
    if ((int)s.paths.size() < k && in_u(*center)) s.paths.push_back({*center});
    s.degenerate = degenerate || (int)s.paths.size() < std::max(k, 3);
    if (s.paths.empty()) return std::nullopt;
    return s;
}

}  // namespace combforge
