#pragma once

#include "combforge/core.hpp"
#include "combforge/tree.hpp"

namespace combforge {

//! One piece of a dispersed cover; enumeration is index-ascending.
struct CoverPiece {
    bool finite = true;
    std::function<std::optional<VertexId>(std::size_t)> at;

    std::vector<VertexId> members(std::size_t limit = 100000) const {
        std::vector<VertexId> out;
        for (std::size_t i = 0; i < limit; ++i) {
            auto v = at(i);
            if (!v) break;
            out.push_back(*v);
        }
        return out;
    }
};

//! U presented as a countable union of dispersed sets: the constructive
//! meaning of "normally spanned".
struct DispersedCover {
    std::function<std::optional<CoverPiece>(std::size_t)> piece;

    //! Pieces 0..n-1 (fewer when the cover is finite).
    std::vector<CoverPiece> pieces(std::size_t n) const {
        std::vector<CoverPiece> out;
        for (std::size_t i = 0; i < n; ++i) {
            auto p = piece(i);
            if (!p) break;
            out.push_back(*p);
        }
        return out;
    }
};

/**
 * The cover's well-order on U: pieces in order, each piece by its own
 * enumeration, repeats skipped. Initial segments are finite unions of
 * dispersed sets, hence dispersed.
 */
class WellOrderedU {
  public:
    explicit WellOrderedU(DispersedCover cover) : cover_(std::move(cover)) {}

    //! Next U-vertex after `served` many, or nullopt when the cover ends.
    std::optional<VertexId> next() {
        while (true) {
            if (!piece_) {
                auto p = cover_.piece(piece_index_);
                if (!p) return std::nullopt;
                piece_ = *p;
                member_index_ = 0;
            }
            auto v = piece_->at(member_index_++);
            if (!v) {
                if (!piece_->finite)
                    throw InvariantError("well-order: infinite piece exhausted");
                piece_.reset();
                ++piece_index_;
                continue;
            }
            if (seen_.insert(*v).second) return v;
        }
    }

    const std::set<VertexId>& seen() const { return seen_; }

  private:
    DispersedCover cover_;
    std::optional<CoverPiece> piece_;
    std::size_t piece_index_ = 0;
    std::size_t member_index_ = 0;
    std::set<VertexId> seen_;
};

//! A witness that the tree snapshot is not normal in its host.
struct NormalityCounterexample {
    VertexId x = 0, y = 0;               // incomparable tree vertices
    std::vector<VertexId> path;          // x .. y, interior outside the tree
};

struct NormalityReport {
    bool normal = true;
    bool complete = true;  // truncation exploration was not clipped
    std::optional<NormalityCounterexample> counterexample;
};

/**
 * Truncation-level normality: within G[{0..horizon}], (a) every host edge
 * between tree vertices joins comparable ones, (b) for every component K of
 * the truncation minus the tree, the tree neighbors of K form a chain. This
 * is exactly "endvertices of tree paths are comparable" restricted to the
 * truncation, with counterexamples extracted through K.
 */
inline NormalityReport check_normal(const GraphOracle& g, const RootedTree& t,
                                    VertexId horizon, std::size_t cap = 200000) {
    NormalityReport rep;
    auto tree_vertices = t.sorted_vertices();
    std::unordered_set<VertexId> in_tree(tree_vertices.begin(), tree_vertices.end());

    // (a) direct edges between tree vertices
    for (VertexId v : tree_vertices) {
        for (VertexId w : g.neighbors_below(v, horizon)) {
            if (w <= v || !in_tree.count(w)) continue;
            if (!t.comparable(v, w)) {
                rep.normal = false;
                rep.counterexample = NormalityCounterexample{v, w, {v, w}};
                return rep;
            }
        }
    }

    // (b) components of the truncation minus the tree
    std::unordered_set<VertexId> assigned;
    for (VertexId s = 0; s < horizon; ++s) {
        if (!g.has_vertex(s) || in_tree.count(s) || assigned.count(s)) continue;
        BfsTree comp = bfs_within(g, s, (int)horizon + 1, horizon, cap, &in_tree);
        if (comp.clipped) rep.complete = false;
        std::vector<VertexId> boundary;
        for (VertexId v : comp.order) {
            assigned.insert(v);
            for (VertexId w : g.neighbors_below(v, horizon))
                if (in_tree.count(w)) boundary.push_back(w);
            if (assigned.size() > cap) {
                rep.complete = false;
                break;
            }
        }
        std::sort(boundary.begin(), boundary.end());
        boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
        for (std::size_t i = 0; i < boundary.size(); ++i)
            for (std::size_t j = i + 1; j < boundary.size(); ++j) {
                if (t.comparable(boundary[i], boundary[j])) continue;
                rep.normal = false;
                NormalityCounterexample ce;
                ce.x = boundary[i];
                ce.y = boundary[j];
                // extract an x-y path through the component
                std::unordered_set<VertexId> avoid = in_tree;
                avoid.erase(ce.x);
                BfsTree reach = bfs_within(g, ce.x, (int)horizon + 1, horizon, cap, &avoid);
                // walk from y's neighbor inside comp back to x
                std::vector<VertexId> best;
                for (VertexId v : comp.order) {
                    if (!g.adjacent(v, ce.y) || !reach.contains(v)) continue;
                    auto up = reach.path_to_root(v);  // v .. x
                    std::reverse(up.begin(), up.end());
                    up.push_back(ce.y);
                    if (best.empty() || up.size() < best.size() ||
                        (up.size() == best.size() && up < best))
                        best = up;
                }
                ce.path = best.empty() ? std::vector<VertexId>{ce.x, ce.y} : best;
                rep.counterexample = std::move(ce);
                return rep;
            }
    }
    return rep;
}

/**
 * Every x-y path must meet the intersection of down-closures. Checked on the
 * truncation by deleting that intersection and testing reachability; on
 * failure the violating path is returned.
 */
struct SeparationReport {
    bool separated = true;
    std::vector<VertexId> separator;            // down(x) ∩ down(y)
    std::vector<VertexId> violating_path;       // present when !separated
};

inline SeparationReport separation_check(const GraphOracle& g, const RootedTree& t,
                                         VertexId x, VertexId y, VertexId horizon,
                                         std::size_t cap = 200000) {
    if (!t.contains(x) || !t.contains(y))
        throw PreconditionError("separation check: vertices must lie in the tree");
    SeparationReport rep;
    auto dx = t.down_closure(x);
    auto dy = t.down_closure(y);
    std::set<VertexId> sx(dx.begin(), dx.end());
    for (VertexId v : dy)
        if (sx.count(v)) rep.separator.push_back(v);
    std::sort(rep.separator.begin(), rep.separator.end());
    std::unordered_set<VertexId> sep(rep.separator.begin(), rep.separator.end());
    if (sep.count(x) || sep.count(y)) return rep;  // endpoint inside the separator: trivially met
    std::unordered_set<VertexId> avoid(rep.separator.begin(), rep.separator.end());
    BfsTree reach = bfs_within(g, x, (int)horizon + 1, horizon, cap, &avoid);
    if (reach.contains(y)) {
        rep.separated = false;
        auto p = reach.path_to_root(y);
        std::reverse(p.begin(), p.end());
        rep.violating_path = p;
    }
    return rep;
}

struct NormalTreeBuild {
    RootedTree tree;
    int steps_taken = 0;
    bool u_exhausted = false;   // cover ran out before the step budget
    std::vector<VertexId> skipped;  // U-vertices unreachable within depth
};

/**
 * Grow a tree that is normal in G and contains an initial segment of the
 * cover's well-order, attaching each new U-vertex as deep as possible: for
 * candidate attach points in decreasing height (ties: lowest index), find a
 * path from u meeting the tree only at that point whose other vertices have
 * tree-neighbors only on the candidate's down-closure. Deep attachment keeps
 * chains chained (complete graphs grow paths, trees grow themselves).
 *
 * The region scan around u is bounded by horizon and cap only, never by the
 * depth budget: the attachment rule preserves normality exactly because the
 * component of u is seen out to its whole tree boundary, whose deepest vertex
 * tops a chain. A depth-clipped scan can miss the deep boundary and fork what
 * must stay a chain (observed on the grid).
 */
inline NormalTreeBuild build_normal_tree(const GraphOracle& g, DispersedCover cover,
                                         const Budget& budget) {
    WellOrderedU order(std::move(cover));
    auto first = order.next();
    if (!first) throw PreconditionError("normal tree: empty cover");
    NormalTreeBuild out{RootedTree(g, *first), 1, false, {}};
    RootedTree& t = out.tree;

    auto attach_ok = [&](const std::vector<VertexId>& path, VertexId at) {
        // every path vertex may see the tree only along down(at)
        std::set<VertexId> down;
        for (VertexId v : t.down_closure(at)) down.insert(v);
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            for (VertexId w : g.neighbors_below(path[i], budget.horizon))
                if (t.contains(w) && !down.count(w)) return false;
        }
        return true;
    };

    while (out.steps_taken < budget.steps) {
        auto u = order.next();
        if (!u) {
            out.u_exhausted = true;
            break;
        }
        ++out.steps_taken;
        if (t.contains(*u)) continue;
        std::unordered_set<VertexId> tree_set;
        for (VertexId v : t.order()) tree_set.insert(v);
        // component of u in G - T, then its tree boundary as attach candidates
        BfsTree region =
            bfs_within(g, *u, budget.depth - 1, budget.horizon, budget.cap, &tree_set);
        std::vector<VertexId> boundary;
        for (VertexId v : region.order)
            for (VertexId w : g.neighbors_below(v, budget.horizon))
                if (tree_set.count(w)) boundary.push_back(w);
        std::sort(boundary.begin(), boundary.end());
        boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
        std::stable_sort(boundary.begin(), boundary.end(), [&](VertexId a, VertexId b) {
            return t.height(a) > t.height(b);
        });
        bool attached = false;
        for (VertexId at : boundary) {
            std::unordered_set<VertexId> avoid = tree_set;
            avoid.erase(at);
            BfsTree reach = bfs_within(g, *u, budget.depth, budget.horizon, budget.cap, &avoid);
            if (!reach.contains(at)) continue;
            auto p = reach.path_to_root(at);   // at .. u
            std::reverse(p.begin(), p.end());  // u .. at
            if (!attach_ok(p, at)) continue;
            t.attach_path(p, out.steps_taken - 1);
            attached = true;
            break;
        }
        if (!attached) out.skipped.push_back(*u);
    }
    return out;
}

struct RayEndTracking {
    int end_id = -1;
    bool in_closure_of_tree = true;
    //! Per tested scale: leaves of the maximal branches whose tails land in
    //! the end's component. Exactly one branch for large scales is the
    //! expected shape (normal rays are in bijection with closure ends).
    std::vector<std::pair<VertexId, std::vector<VertexId>>> tracked_branches;
    bool unique_for_largest_scale = false;
};

/**
 * For each declared end in the closure of the tree snapshot: delete the tree
 * prefix of height < h and test which maximal branches continue into the
 * end's component. The tree's normal-ray prefix toward the end should be
 * unique once the scale bites.
 */
inline std::vector<RayEndTracking> normal_ray_end_check(
    const GraphOracle& g, const RootedTree& t, const std::vector<int>& end_ids,
    const std::vector<int>& height_scales, const Budget& budget) {
    std::vector<RayEndTracking> out;
    for (int id : end_ids) {
        const EndDescriptor* end = g.ends().find(id);
        if (!end) throw PreconditionError("unknown end id");
        RayEndTracking tr;
        tr.end_id = id;
        for (int h : height_scales) {
            std::vector<VertexId> x;
            for (VertexId v : t.order())
                if (t.height(v) < h) x.push_back(v);
            std::size_t j = ray_tail_start(*end, x);
            Truncation comp = component_after_deletion(
                g, x, end->ray(j), budget.depth,
                std::min<std::size_t>(budget.cap, 20000), false);
            std::vector<VertexId> hits;
            for (const auto& branch : t.maximal_branches()) {
                VertexId leaf = branch.back();
                if ((int)branch.size() > h && comp.contains(leaf)) hits.push_back(leaf);
            }
            tr.tracked_branches.emplace_back((VertexId)h, hits);
            if (hits.empty()) tr.in_closure_of_tree = false;
        }
        if (!tr.tracked_branches.empty())
            tr.unique_for_largest_scale = tr.tracked_branches.back().second.size() == 1;
        out.push_back(std::move(tr));
    }
    return out;
}

}  // namespace combforge
