#pragma once

#include "combforge/contraction.hpp"
#include "combforge/core.hpp"
#include "combforge/normal_tree.hpp"
#include "combforge/star_comb.hpp"
#include "combforge/tree.hpp"

namespace combforge {

namespace detail {

struct Attachment {
    int height;                   // tree height of the endpoint
    std::size_t length;           // path edges
    VertexId at;                  // endpoint in the tree
    std::vector<VertexId> path;   // u .. at (new vertices, then endpoint)
    bool clipped = false;         // region search hit a budget wall
};

/**
 * The cheapest way to hang u off the tree: minimal endpoint height, then
 * shortest path, then least endpoint, then least final interior vertex. A
 * direct edge to the root is optimal outright and skips the region scan.
 */
inline std::optional<Attachment> best_attachment(const GraphOracle& g,
                                                 const RootedTree& t, VertexId u,
                                                 const Budget& budget) {
    std::optional<Attachment> best;
    auto consider = [&](int h, std::size_t len, VertexId at,
                        std::vector<VertexId> path) {
        if (best && std::tie(best->height, best->length, best->at, best->path) <=
                        std::tie(h, len, at, path))
            return;
        best = Attachment{h, len, at, std::move(path), false};
    };
    for (VertexId w : g.neighbors_below(u, budget.horizon)) {
        if (!t.contains(w)) continue;
        consider(t.height(w), 1, w, {u, w});
        if (t.height(w) == 0) return best;  // nothing beats a root edge
    }
    std::unordered_set<VertexId> tree_set;
    for (VertexId v : t.order()) tree_set.insert(v);
    BfsTree region =
        bfs_within(g, u, budget.depth - 1, budget.horizon, budget.cap, &tree_set);
    for (VertexId v : region.order) {
        if (v == u) continue;  // direct edges already considered
        std::size_t len = (std::size_t)region.depth.at(v) + 1;
        if (best && (best->height < 0 || best->length < len) && best->height == 0)
            break;
        for (VertexId w : g.neighbors_below(v, budget.horizon)) {
            if (!t.contains(w)) continue;
            auto up = region.path_to_root(v);             // v .. u
            std::vector<VertexId> path(up.rbegin(), up.rend());  // u .. v
            path.push_back(w);
            consider(t.height(w), len, w, std::move(path));
        }
    }
    if (best) best->clipped = region.clipped;
    return best;
}

}  // namespace detail

//! Result of growing a tree by minimal-height attachment. Attach heights are
//! in the tree log; a tree whose heights keep returning to a bounded range is
//! the finite face of raylessness.
struct RaylessBuild {
    RootedTree tree;
    int steps_taken = 0;
    bool u_exhausted = false;       // well-order ran out before the budget
    bool search_clipped = false;    // some attachment search hit a budget wall
    std::vector<VertexId> skipped;  // U-vertices unreachable within depth
};

/**
 * Grow a tree containing an initial segment of the cover's well-order,
 * attaching every new U-vertex at the lowest reachable height. Complete
 * graphs collapse to radius-1 stars, dominated fans to radius-2 trees; only
 * genuinely end-rich directions force heights up.
 */
inline RaylessBuild build_rayless_tree(const GraphOracle& g, DispersedCover cover,
                                       const Budget& budget) {
    WellOrderedU order(std::move(cover));
    auto first = order.next();
    if (!first) throw PreconditionError("rayless tree: empty cover");
    RaylessBuild out{RootedTree(g, *first), 1, false, false, {}};
    while (out.steps_taken < budget.steps) {
        auto u = order.next();
        if (!u) {
            out.u_exhausted = true;
            break;
        }
        ++out.steps_taken;
        if (out.tree.contains(*u)) continue;
        auto best = detail::best_attachment(g, out.tree, *u, budget);
        if (!best) {
            out.skipped.push_back(*u);
            continue;
        }
        out.tree.attach_path(best->path);
        if (best->clipped) out.search_clipped = true;
    }
    return out;
}

//! One re-checked build step; `recomputed_*` comes from an independent replay
//! of the attachment search against the reconstructed tree prefix.
struct MinHeightRow {
    int step = 0;
    int recorded_height = 0;
    int recomputed_height = 0;
    std::size_t recorded_length = 0;
    std::size_t recomputed_length = 0;
    bool ok = true;
};

struct MinHeightReport {
    std::vector<MinHeightRow> rows;
    bool ok = true;
    std::vector<std::string> violations;
};

/**
 * Replay a build log from scratch: every path must re-validate against the
 * host (edges present, interior fresh), and every recorded attachment must
 * match the minimum the search finds on the reconstructed prefix. Catches
 * both computation bugs and tampered logs.
 */
inline MinHeightReport verify_min_height(const GraphOracle& g, VertexId root,
                                         const std::vector<AttachEvent>& log,
                                         const Budget& budget) {
    MinHeightReport rep;
    RootedTree t(g, root);
    for (const auto& ev : log) {
        MinHeightRow row;
        row.step = ev.step;
        row.recorded_height = ev.attach_height;
        row.recorded_length = ev.path.size() - 1;
        if (ev.path.size() < 2) {
            rep.ok = false;
            rep.violations.push_back("step " + std::to_string(ev.step) + ": path too short");
            row.ok = false;
            rep.rows.push_back(row);
            break;
        }
        VertexId u = ev.path.front();
        auto best = detail::best_attachment(g, t, u, budget);
        if (!best) {
            rep.ok = false;
            rep.violations.push_back("step " + std::to_string(ev.step) +
                                     ": no attachment reachable, log claims one");
            row.ok = false;
            rep.rows.push_back(row);
            break;
        }
        row.recomputed_height = best->height;
        row.recomputed_length = best->length;
        if (best->height != ev.attach_height) {
            rep.ok = false;
            rep.violations.push_back(
                "step " + std::to_string(ev.step) + ": attach height " +
                std::to_string(ev.attach_height) + " recorded, minimum is " +
                std::to_string(best->height));
            row.ok = false;
        }
        try {
            t.attach_path(ev.path, ev.step);
        } catch (const InvariantError& e) {
            rep.ok = false;
            rep.violations.push_back("step " + std::to_string(ev.step) + ": " + e.what());
            row.ok = false;
            rep.rows.push_back(row);
            break;
        }
        if (t.height(ev.path.back()) != ev.attach_height) {
            rep.ok = false;
            rep.violations.push_back("step " + std::to_string(ev.step) +
                                     ": recorded height disagrees with the tree");
            row.ok = false;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

//! Per-branch growth of a built tree: how many attach events landed in each
//! root branch and how deep they reached. Every row finite is the budgeted
//! face of "no branch grows a ray".
struct BranchGrowth {
    VertexId branch = 0;
    std::size_t events = 0;
    std::size_t vertices = 0;
    int max_height = 0;
};

inline std::vector<BranchGrowth> branch_growth_audit(const RootedTree& t) {
    std::map<VertexId, BranchGrowth> rows;
    for (VertexId b : t.branch_roots()) rows[b] = BranchGrowth{b, 0, 0, 0};
    for (VertexId v : t.order()) {
        auto b = t.branch_of(v);
        if (!b) continue;
        auto& row = rows[*b];
        ++row.vertices;
        row.max_height = std::max(row.max_height, t.height(v));
    }
    for (const auto& ev : t.log()) {
        VertexId probe = ev.path.back() == t.root() && ev.path.size() >= 2
                             ? ev.path[ev.path.size() - 2]
                             : ev.path.back();
        auto b = t.branch_of(probe);
        if (b) ++rows[*b].events;
    }
    std::vector<BranchGrowth> out;
    for (auto& [b, row] : rows) out.push_back(row);
    return out;
}

// ---------------------------------------------------------------------------
// closure classification

//! One declared closure end, classified: budgeted boundary evidence plus
//! where its first declared dominators sit relative to U.
struct ClosureRow {
    int end_id = -1;
    bool declared_dominated = false;
    ClosureEvidence evidence;
    std::optional<VertexId> dominator_in_u;
    std::optional<VertexId> dominator_outside_u;
};

struct HatClosure {
    std::vector<ClosureRow> rows;
    bool all_dominated = true;
    std::optional<int> undominated_id;  // least declared-undominated closure end
};

inline HatClosure hat_closure(const GraphOracle& g, const USet& u, const Budget& budget) {
    HatClosure out;
    for (int id : u.closure_end_ids) {
        const EndDescriptor* e = g.ends().find(id);
        if (!e) throw PreconditionError("closure end " + std::to_string(id) + " not declared");
        ClosureRow row;
        row.end_id = id;
        row.declared_dominated = e->dominated;
        row.evidence = meets_closure_evidence(g, *e, u.member, {2, 4, 8}, budget.depth,
                                              budget.cap);
        for (std::size_t i = 0; i < 32; ++i) {
            auto d = e->dominators(i);
            if (!d) break;
            if (u.member(*d)) {
                if (!row.dominator_in_u) row.dominator_in_u = *d;
            } else if (!row.dominator_outside_u) {
                row.dominator_outside_u = *d;
            }
            if (row.dominator_in_u) break;
        }
        if (!e->dominated) {
            out.all_dominated = false;
            if (!out.undominated_id || id < *out.undominated_id) out.undominated_id = id;
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

// ---------------------------------------------------------------------------
// domination stars and the contraction route

//! Star of dominator paths sharing a landing vertex on the built normal
//! tree; the whole star is one finite branch set of the contraction.
struct DominationStar {
    std::vector<int> end_ids;
    VertexId center = 0;
    std::vector<std::vector<VertexId>> paths;  // per end: dominator .. center
    std::vector<VertexId> branch;              // sorted union
};

struct DominationContraction {
    std::vector<DominationStar> stars;
    BranchPartition partition;
    bool meets_tree_once = true;       // each branch meets the tree at its center only
    bool components_disjoint = true;   // dominator components pairwise disjoint
    std::vector<std::string> notes;
};

/**
 * For every closure end whose declared dominators all sit outside U, walk the
 * first such dominator's component of G - T to the end's ray and land at the
 * lowest-index ray vertex; stars landing at the same vertex merge into one
 * finite branch set. Contracting these puts a dominator inside (the image
 * of) U for each such end.
 */
inline DominationContraction build_domination_contraction(const GraphOracle& g,
                                                          const RootedTree& t,
                                                          const HatClosure& closure,
                                                          const Budget& budget) {
    DominationContraction out;
    std::unordered_set<VertexId> tree_set;
    std::vector<VertexId> tree_vec;
    for (VertexId v : t.order()) {
        tree_set.insert(v);
        tree_vec.push_back(v);
    }
    std::sort(tree_vec.begin(), tree_vec.end());

    std::map<VertexId, DominationStar> by_center;
    std::vector<std::pair<int, std::vector<VertexId>>> components;  // end, sorted comp

    for (const auto& row : closure.rows) {
        if (!row.declared_dominated || row.dominator_in_u) continue;
        if (!row.dominator_outside_u) {
            out.notes.push_back("end " + std::to_string(row.end_id) +
                                ": no declared dominator to contract");
            continue;
        }
        VertexId vr = *row.dominator_outside_u;
        if (tree_set.count(vr)) {
            out.notes.push_back("end " + std::to_string(row.end_id) +
                                ": dominator already on the tree");
            continue;
        }
        const EndDescriptor* e = g.ends().find(row.end_id);
        BfsTree region = bfs_within(g, vr, budget.depth, budget.horizon, budget.cap,
                                    &tree_set);
        // landing candidates: ray vertices adjacent to the dominator's region
        std::optional<std::tuple<VertexId, std::size_t, VertexId>> pick;  // (ray v, len, tail)
        std::unordered_map<VertexId, std::size_t> ray_index;
        for (std::size_t j = 0; j < (std::size_t)(4 * budget.depth); ++j)
            ray_index.emplace(e->ray(j), j);
        for (VertexId v : region.order) {
            std::size_t len = (std::size_t)region.depth.at(v) + 1;
            for (VertexId w : g.neighbors_below(v, budget.horizon)) {
                if (!ray_index.count(w) || !t.contains(w)) continue;
                auto cand = std::make_tuple(w, len, v);
                if (!pick || cand < *pick) pick = cand;
            }
        }
        if (!pick) {
            out.notes.push_back("end " + std::to_string(row.end_id) +
                                ": dominator's region misses the ray within budget");
            continue;
        }
        auto [center, len, tail] = *pick;
        auto up = region.path_to_root(tail);                 // tail .. vr
        std::vector<VertexId> path(up.rbegin(), up.rend());  // vr .. tail
        path.push_back(center);
        auto& star = by_center.try_emplace(center, DominationStar{{}, center, {}, {}})
                         .first->second;
        star.end_ids.push_back(row.end_id);
        star.paths.push_back(path);
        std::vector<VertexId> comp(region.order.begin(), region.order.end());
        std::sort(comp.begin(), comp.end());
        components.emplace_back(row.end_id, std::move(comp));
    }

    std::vector<std::vector<VertexId>> branches;
    for (auto& [center, star] : by_center) {
        std::set<VertexId> members{star.center};
        for (auto& p : star.paths)
            for (std::size_t i = 0; i + 1 < p.size(); ++i) {
                if (t.contains(p[i])) {
                    out.meets_tree_once = false;
                    out.notes.push_back("path interior touches the tree at v" +
                                        std::to_string(p[i]));
                }
                members.insert(p[i]);
            }
        star.branch.assign(members.begin(), members.end());
        branches.push_back(star.branch);
        out.stars.push_back(star);
    }
    // dominator components of distinct stars must not share vertices
    for (std::size_t a = 0; a < components.size(); ++a)
        for (std::size_t b = a + 1; b < components.size(); ++b) {
            const auto& ca = components[a].second;
            const auto& cb = components[b].second;
            bool same_star = false;
            for (const auto& s : out.stars) {
                bool ha = std::find(s.end_ids.begin(), s.end_ids.end(),
                                    components[a].first) != s.end_ids.end();
                bool hb = std::find(s.end_ids.begin(), s.end_ids.end(),
                                    components[b].first) != s.end_ids.end();
                if (ha && hb) same_star = true;
            }
            if (same_star) continue;
            std::vector<VertexId> inter;
            std::set_intersection(ca.begin(), ca.end(), cb.begin(), cb.end(),
                                  std::back_inserter(inter));
            if (!inter.empty()) {
                out.components_disjoint = false;
                out.notes.push_back("dominator components of ends " +
                                    std::to_string(components[a].first) + " and " +
                                    std::to_string(components[b].first) + " overlap");
            }
        }
    try {
        out.partition = BranchPartition("domination-stars", branches);
    } catch (const PreconditionError& e) {
        out.components_disjoint = false;
        out.notes.push_back(e.what());
        out.partition = BranchPartition();
    }
    return out;
}

//! Map a cover through a contraction: piece images, deduplicated, ascending.
inline DispersedCover map_cover(DispersedCover cover, const BranchPartition& part) {
    auto piece_fn = cover.piece;
    return DispersedCover{[piece_fn, part](std::size_t i) -> std::optional<CoverPiece> {
        auto p = piece_fn(i);
        if (!p) return std::nullopt;
        if (!p->finite) throw PreconditionError("cannot map an infinite cover piece");
        std::set<VertexId> img;
        for (std::size_t j = 0;; ++j) {
            auto v = p->at(j);
            if (!v) break;
            img.insert(part.rank_of(*v));
            if (j > 1000000) throw InvariantError("cover piece not finite");
        }
        std::vector<VertexId> vec(img.begin(), img.end());
        CoverPiece out;
        out.finite = true;
        out.at = [vec](std::size_t j) -> std::optional<VertexId> {
            if (j < vec.size()) return vec[j];
            return std::nullopt;
        };
        return out;
    }};
}

/**
 * Expand a tree over the contraction back into the host: each branch set is
 * filled in by its own spanning tree, consecutive branches joined by the
 * lexicographically least host edge realizing the contracted tree edge.
 */
inline RootedTree lift_rayless(const GraphOracle& g, const BranchPartition& part,
                               const RootedTree& h_tree) {
    auto root_members = part.branch_members(part.rep_of_rank(h_tree.root()));
    RootedTree out(g, root_members.front());
    auto grow_branch = [&](const std::vector<VertexId>& members, VertexId from) {
        // breadth-first inside the branch set, starting at the join vertex
        std::set<VertexId> left(members.begin(), members.end());
        left.erase(from);
        std::vector<VertexId> frontier{from};
        while (!frontier.empty() && !left.empty()) {
            std::vector<VertexId> next;
            for (VertexId v : frontier) {
                for (auto it = left.begin(); it != left.end();) {
                    if (g.adjacent(v, *it)) {
                        out.attach_leaf(*it, v);
                        next.push_back(*it);
                        it = left.erase(it);
                    } else {
                        ++it;
                    }
                }
            }
            if (next.empty() && !left.empty())
                throw InvariantError("branch set disconnected during lift");
            frontier = std::move(next);
        }
    };
    grow_branch(root_members, root_members.front());
    for (VertexId rank : h_tree.order()) {
        if (rank == h_tree.root()) continue;
        VertexId parent_rank = *h_tree.parent(rank);
        auto members = part.branch_members(part.rep_of_rank(rank));
        auto up = part.branch_members(part.rep_of_rank(parent_rank));
        std::optional<std::pair<VertexId, VertexId>> edge;  // (in-tree end, new end)
        for (VertexId b : up)
            for (VertexId a : members) {
                if (!g.adjacent(a, b)) continue;
                auto cand = std::make_pair(b, a);
                if (!edge || cand < *edge) edge = cand;
            }
        if (!edge) throw InvariantError("contracted edge has no host realization");
        out.attach_leaf(edge->second, edge->first);
        grow_branch(members, edge->second);
    }
    return out;
}

// ---------------------------------------------------------------------------
// the duality driver

/**
 * The constructive dichotomy for a normally spanned U: either some closure
 * end is undominated and a comb along it is extracted, or every closure end
 * is dominated and U fits in a rayless tree built directly (dominators
 * inside U) or after contracting finitely many domination stars (dominators
 * outside U).
 */
struct Theorem1Result {
    std::string route;  // "comb" | "direct" | "contraction"
    HatClosure closure;
    std::optional<CombCertificate> comb;
    std::optional<RaylessBuild> direct_build;
    std::optional<NormalTreeBuild> host_tree;
    std::optional<DominationContraction> stars;
    std::shared_ptr<ContractedOracle> contracted;
    std::optional<RaylessBuild> contracted_build;
    std::optional<RootedTree> lifted;
};

inline Theorem1Result theorem1_driver(const GraphOracle& g, const USet& u,
                                      const std::optional<DispersedCover>& cover,
                                      const Budget& budget) {
    Theorem1Result out;
    out.closure = hat_closure(g, u, budget);
    if (out.closure.undominated_id) {
        out.route = "comb";
        const EndDescriptor* e = g.ends().find(*out.closure.undominated_id);
        auto comb = comb_along_end(g, *e, u, budget);
        if (!ok(comb))
            throw BudgetError("comb extraction exhausted: " + exhausted(comb).detail);
        out.comb = value(comb);
        return out;
    }
    if (!cover)
        throw PreconditionError(
            "U is declared not normally spanned (no dispersed cover); extract a comb "
            "instead");
    bool need_contraction = false;
    for (const auto& row : out.closure.rows)
        if (!row.dominator_in_u) need_contraction = true;
    if (!need_contraction) {
        out.route = "direct";
        out.direct_build = build_rayless_tree(g, *cover, budget);
        return out;
    }
    out.route = "contraction";
    out.host_tree = build_normal_tree(g, *cover, budget);
    out.stars = build_domination_contraction(g, out.host_tree->tree, out.closure, budget);
    out.contracted = contract(g, out.stars->partition, true);
    out.contracted_build =
        build_rayless_tree(*out.contracted, map_cover(*cover, out.stars->partition), budget);
    out.lifted = lift_rayless(g, out.stars->partition, out.contracted_build->tree);
    return out;
}

}  // namespace combforge
