#pragma once

#include "combforge/decomposition.hpp"
#include "combforge/rayless.hpp"

namespace combforge {

//! Finite-stage audit of a built reflecting tree: U is contained within the
//! materialized scope, and each declared undominated closure end is tracked
//! by exactly one nested chain of separator crossings.
struct ReflectionReport {
    bool degenerate = false;  // no undominated closure end: rayless route
    std::string degenerate_route;
    std::vector<std::string> stages;
    bool u_cofinal = true;
    std::vector<VertexId> missed_u;  // materialized U-vertices absent from the tree
    struct EndRow {
        int end_id = -1;
        bool undominated = false;
        std::size_t scales_checked = 0;
        bool separators_in_tree = true;  // every tested crossing separator present
        bool prefix_nested = true;       // each crossing's root-path threads the previous
        bool tracked = false;
    };
    std::vector<EndRow> ends;
    bool ok = true;
};

struct ReflectingBuild {
    RootedTree tree;
    ReflectionReport report;
};

namespace detail {

//! Edges of the induced subgraph on a sorted finite vertex set.
inline std::vector<std::pair<VertexId, VertexId>>
part_edges(const GraphOracle& g, const std::vector<VertexId>& part) {
    std::vector<std::pair<VertexId, VertexId>> edges;
    if (part.empty()) return edges;
    VertexId bound = part.back() + 1;
    for (VertexId v : part)
        for (VertexId w : g.neighbors_below(v, bound))
            if (w > v && std::binary_search(part.begin(), part.end(), w))
                edges.emplace_back(v, w);
    return edges;
}

struct GroupIndex {
    std::vector<int> gid;  // per part position; singletons get unique ids
    int groups = 0;
};

//! Group part vertices so that each incident separator is one unit: the
//! finite face of contracting separators to dummy vertices.
inline GroupIndex group_by_separators(const std::vector<VertexId>& part,
                                      const std::vector<const std::vector<VertexId>*>& seps) {
    GroupIndex gi;
    gi.gid.assign(part.size(), -1);
    auto pos = [&](VertexId v) -> std::optional<std::size_t> {
        auto it = std::lower_bound(part.begin(), part.end(), v);
        if (it == part.end() || *it != v) return std::nullopt;
        return (std::size_t)(it - part.begin());
    };
    for (const auto* s : seps) {
        int id = gi.groups++;
        for (VertexId v : *s) {
            auto p = pos(v);
            if (!p) throw InvariantError("separator vertex outside its part");
            gi.gid[*p] = id;
        }
    }
    for (auto& id : gi.gid)
        if (id < 0) id = gi.groups++;
    return gi;
}

}  // namespace detail

/**
 * Build a tree containing U that reflects the declared undominated ends in
 * its closure, following the part-by-part recipe: U is first extended by all
 * separator vertices; every separator gets a spanning tree; every part gets
 * a tree of the part's graph with its incident separators treated as single
 * contracted units (parts here are finite, so these trees are rayless
 * outright); the part trees glue along the separator trees, and the result
 * is pruned to the down-closure of the extended U.
 */
inline Outcome<ReflectingBuild> build_reflecting_tree(const GraphOracle& g, const USet& u,
                                                      const std::optional<DispersedCover>& cover,
                                                      const DisplayingDecomposition& dd,
                                                      const Budget& budget) {
    ReflectionReport rep;

    HatClosure closure = hat_closure(g, u, budget);
    if (!closure.undominated_id) {
        // nothing to reflect: the rayless duality route applies as-is
        auto r = theorem1_driver(g, u, cover, budget);
        rep.degenerate = true;
        rep.degenerate_route = r.route;
        rep.stages.push_back("degenerate: no undominated closure end");
        RootedTree t = r.direct_build ? std::move(r.direct_build->tree)
                       : r.lifted     ? std::move(*r.lifted)
                                      : RootedTree(g, 0);
        return ReflectingBuild{std::move(t), std::move(rep)};
    }

    if (!dd.dec.separators_connected || !dd.dec.separators_pairwise_disjoint)
        throw PreconditionError(
            "reflecting tree needs connected, pairwise disjoint separators");
    for (const auto& row : closure.rows) {
        if (row.declared_dominated) continue;
        bool declared = std::find(dd.displayed.begin(), dd.displayed.end(), row.end_id) !=
                        dd.displayed.end();
        if (!declared || !dd.tau.count(row.end_id))
            throw PreconditionError("decomposition does not display undominated end " +
                                    std::to_string(row.end_id));
    }
    for (const auto& n : dd.dec.nodes)
        if (!n.part_finite)
            return Exhausted{"materialize", "node " + std::to_string(n.id) +
                                                " has no finite part snapshot"};

    // separator vertices join U (the closure is unchanged; see the hat audit)
    std::set<VertexId> sep_all;
    for (const auto& n : dd.dec.nodes)
        for (VertexId v : n.separator) sep_all.insert(v);
    auto u_hat = [member = u.member, &sep_all](VertexId v) {
        return member(v) || sep_all.count(v) > 0;
    };
    rep.stages.push_back("hat: " + std::to_string(sep_all.size()) + " separator vertices");

    // separator spanning trees: edge lists per node id
    std::map<int, std::vector<std::pair<VertexId, VertexId>>> span;
    for (const auto& n : dd.dec.nodes) {
        if (n.separator.empty()) continue;
        auto sorted = n.separator;
        std::sort(sorted.begin(), sorted.end());
        auto edges = detail::part_edges(g, sorted);
        // breadth-first spanning subset
        std::set<VertexId> seen{sorted.front()};
        std::vector<std::pair<VertexId, VertexId>> tree_edges;
        bool grew = true;
        while (grew && seen.size() < sorted.size()) {
            grew = false;
            for (auto [a, b] : edges) {
                bool ha = seen.count(a), hb = seen.count(b);
                if (ha == hb) continue;
                tree_edges.emplace_back(ha ? a : b, ha ? b : a);
                seen.insert(ha ? b : a);
                grew = true;
            }
        }
        if (seen.size() < sorted.size())
            return Exhausted{"separator-spanning-tree",
                             "separator of node " + std::to_string(n.id) + " disconnected"};
        span[n.id] = std::move(tree_edges);
    }
    rep.stages.push_back("separator spanning trees: " + std::to_string(span.size()));

    // assembly: per-part trees over separator groups, glued along the tree order
    const auto& root_part = dd.dec.nodes.front().finite_part;
    std::optional<VertexId> anchor;
    for (VertexId v : root_part)
        if (u_hat(v)) {
            anchor = v;
            break;
        }
    if (!anchor && !root_part.empty()) anchor = root_part.front();
    if (!anchor) return Exhausted{"part-tree", "root part empty"};
    RootedTree tree(g, *anchor);

    auto attach_group = [&](const std::vector<VertexId>& members, VertexId entry) {
        // grow the group's remaining members from the entry vertex along its
        // spanning edges (separator groups) or any induced edges (ad hoc)
        std::set<VertexId> left(members.begin(), members.end());
        left.erase(entry);
        for (VertexId m : members)
            if (tree.contains(m)) left.erase(m);
        std::vector<VertexId> frontier{entry};
        auto edges = detail::part_edges(g, members);
        while (!frontier.empty() && !left.empty()) {
            std::vector<VertexId> next;
            for (VertexId v : frontier)
                for (auto [a, b] : edges) {
                    VertexId other;
                    if (a == v && left.count(b))
                        other = b;
                    else if (b == v && left.count(a))
                        other = a;
                    else
                        continue;
                    tree.attach_leaf(other, v);
                    left.erase(other);
                    next.push_back(other);
                }
            if (next.empty() && !left.empty())
                throw InvariantError("group disconnected during reflecting assembly");
            frontier = std::move(next);
        }
    };

    std::vector<int> order{dd.dec.nodes.front().id};
    for (std::size_t i = 0; i < order.size(); ++i)
        for (int c : dd.dec.children(order[i])) order.push_back(c);

    for (int id : order) {
        const auto& node = dd.dec.nodes[id];
        auto part = node.finite_part;
        std::sort(part.begin(), part.end());
        if (part.empty()) continue;
        std::vector<std::vector<VertexId>> sep_sets;
        if (!node.separator.empty()) {
            sep_sets.push_back(node.separator);
            std::sort(sep_sets.back().begin(), sep_sets.back().end());
        }
        for (int c : dd.dec.children(id)) {
            const auto& cs = dd.dec.nodes[c].separator;
            if (cs.empty()) continue;
            sep_sets.push_back(cs);
            std::sort(sep_sets.back().begin(), sep_sets.back().end());
        }
        std::vector<const std::vector<VertexId>*> sep_ptrs;
        for (auto& s : sep_sets) sep_ptrs.push_back(&s);
        detail::GroupIndex gi;
        try {
            gi = detail::group_by_separators(part, sep_ptrs);
        } catch (const InvariantError& e) {
            return Exhausted{"materialize", std::string(e.what()) + " (node " +
                                                std::to_string(id) + ")"};
        }
        auto edges = detail::part_edges(g, part);
        auto pos = [&](VertexId v) {
            return (std::size_t)(std::lower_bound(part.begin(), part.end(), v) -
                                 part.begin());
        };
        // start from whatever part vertices are already in the global tree
        // (the root anchor, or this node's own separator placed by the parent)
        std::set<int> done;
        std::vector<VertexId> frontier;
        for (VertexId v : part)
            if (tree.contains(v)) {
                done.insert(gi.gid[pos(v)]);
                frontier.push_back(v);
            }
        if (frontier.empty()) {
            // isolated root part start
            if (id == order.front()) {
                done.insert(gi.gid[pos(*anchor)]);
                frontier.push_back(*anchor);
            } else {
                return Exhausted{"part-tree", "node " + std::to_string(id) +
                                                  " has no contact with the tree"};
            }
        }
        // complete the already-touched groups first
        for (int gid : std::set<int>(done)) {
            std::vector<VertexId> members;
            for (std::size_t i = 0; i < part.size(); ++i)
                if (gi.gid[i] == gid) members.push_back(part[i]);
            VertexId entry = 0;
            for (VertexId m : members)
                if (tree.contains(m)) entry = m;
            if (members.size() > 1) attach_group(members, entry);
        }
        bool grew = true;
        std::size_t in_tree = 0;
        for (VertexId v : part)
            if (tree.contains(v)) ++in_tree;
        while (grew && in_tree < part.size()) {
            grew = false;
            for (auto [a, b] : edges) {
                bool ha = tree.contains(a), hb = tree.contains(b);
                if (ha == hb) continue;
                VertexId from = ha ? a : b, fresh = ha ? b : a;
                tree.attach_leaf(fresh, from);
                ++in_tree;
                int gid = gi.gid[pos(fresh)];
                if (!done.count(gid)) {
                    done.insert(gid);
                    std::vector<VertexId> members;
                    for (std::size_t i = 0; i < part.size(); ++i)
                        if (gi.gid[i] == gid) members.push_back(part[i]);
                    if (members.size() > 1) attach_group(members, fresh);
                    for (VertexId m : members)
                        if (m != fresh && tree.contains(m)) ++in_tree;
                }
                grew = true;
            }
        }
        if (in_tree < part.size())
            return Exhausted{"part-tree",
                             "part of node " + std::to_string(id) + " disconnected"};
    }
    rep.stages.push_back("assembled " + std::to_string(tree.size()) + " vertices over " +
                         std::to_string(order.size()) + " parts");

    // down-closure of the extended U
    std::set<VertexId> keep;
    for (VertexId v : tree.order())
        if (u_hat(v))
            for (VertexId a : tree.down_closure(v)) keep.insert(a);
    RootedTree pruned(g, tree.root());
    for (VertexId v : tree.order()) {
        if (v == tree.root() || !keep.count(v)) continue;
        pruned.attach_leaf(v, *tree.parent(v));
    }
    rep.stages.push_back("down-closure kept " + std::to_string(pruned.size()) + " of " +
                         std::to_string(tree.size()));

    // audit: U within the materialized parts sits in the tree
    for (const auto& n : dd.dec.nodes)
        for (VertexId v : n.finite_part)
            if (u.member(v) && !pruned.contains(v)) rep.missed_u.push_back(v);
    std::sort(rep.missed_u.begin(), rep.missed_u.end());
    rep.missed_u.erase(std::unique(rep.missed_u.begin(), rep.missed_u.end()),
                       rep.missed_u.end());
    rep.u_cofinal = rep.missed_u.empty();

    // audit: per undominated closure end, the separator crossings along its
    // decomposition ray are present and threaded by one nested chain
    for (const auto& row : closure.rows) {
        ReflectionReport::EndRow er;
        er.end_id = row.end_id;
        er.undominated = !row.declared_dominated;
        if (!er.undominated) {
            rep.ends.push_back(er);
            continue;
        }
        const auto& target = dd.tau.at(row.end_id);
        std::vector<std::vector<VertexId>> crossings;
        for (std::size_t s : {1, 2, 4}) {
            if (!target.to_tree_end) break;
            int node = target.dray(s);
            if (node < 0 || node >= (int)dd.dec.nodes.size()) break;
            const auto& sep = dd.dec.nodes[node].separator;
            if (sep.empty()) continue;
            crossings.push_back(sep);
        }
        er.scales_checked = crossings.size();
        for (std::size_t i = 0; i < crossings.size(); ++i) {
            for (VertexId x : crossings[i])
                if (!pruned.contains(x)) er.separators_in_tree = false;
            if (!er.separators_in_tree) break;
            if (i == 0) continue;
            for (VertexId x : crossings[i]) {
                bool threads = false;
                for (VertexId a : pruned.down_closure(x))
                    if (std::find(crossings[i - 1].begin(), crossings[i - 1].end(), a) !=
                        crossings[i - 1].end()) {
                        threads = true;
                        break;
                    }
                if (!threads) er.prefix_nested = false;
            }
        }
        er.tracked =
            er.scales_checked >= 2 && er.separators_in_tree && er.prefix_nested;
        if (!er.tracked) rep.ok = false;
        rep.ends.push_back(er);
    }
    if (!rep.u_cofinal) rep.ok = false;

    return ReflectingBuild{std::move(pruned), std::move(rep)};
}

}  // namespace combforge
