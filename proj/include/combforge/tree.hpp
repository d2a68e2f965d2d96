#pragma once

#include "combforge/core.hpp"

namespace combforge {

//! One builder step: a path whose last vertex was already in the tree.
struct AttachEvent {
    int step = 0;
    std::vector<VertexId> path;  // new vertices first, existing endpoint last
    int attach_height = 0;       // height of the existing endpoint
};

/**
 * Finite snapshot of a growing rooted tree. Every edge is validated against
 * the host oracle on attach, so a snapshot is always a subgraph of its host.
 */
class RootedTree {
  public:
    RootedTree(const GraphOracle& host, VertexId root) : host_(&host), root_(root) {
        height_[root] = 0;
        order_.push_back(root);
    }

    VertexId root() const { return root_; }
    const GraphOracle& host() const { return *host_; }

    bool contains(VertexId v) const { return height_.count(v) > 0; }
    std::size_t size() const { return height_.size(); }

    int height(VertexId v) const { return height_.at(v); }

    std::optional<VertexId> parent(VertexId v) const {
        auto it = parent_.find(v);
        if (it == parent_.end()) return std::nullopt;
        return it->second;
    }

    const std::vector<VertexId>& children(VertexId v) const {
        static const std::vector<VertexId> none;
        auto it = children_.find(v);
        return it == children_.end() ? none : it->second;
    }

    //! Vertices in insertion order (root first).
    const std::vector<VertexId>& order() const { return order_; }

    const std::vector<AttachEvent>& log() const { return log_; }

    //! True when u is an ancestor of v or u == v (tree order u <= v).
    bool tree_le(VertexId u, VertexId v) const {
        for (std::optional<VertexId> w = v; w; w = parent(*w))
            if (*w == u) return true;
        return false;
    }

    bool comparable(VertexId u, VertexId v) const {
        return tree_le(u, v) || tree_le(v, u);
    }

    //! Down-closure: v plus all its ancestors.
    std::vector<VertexId> down_closure(VertexId v) const {
        std::vector<VertexId> out{v};
        while (auto p = parent(out.back())) out.push_back(*p);
        return out;
    }

    //! Attach a single leaf under `at` (must be a host edge).
    void attach_leaf(VertexId leaf, VertexId at) {
        attach_path({leaf, at}, 0);
    }

    /**
     * Attach a path: path.back() must already be in the tree, all other
     * vertices new; consecutive vertices must be host edges. Records an
     * AttachEvent with the endpoint's height.
     */
    void attach_path(const std::vector<VertexId>& path, int step = -1) {
        if (path.size() < 2) throw InvariantError("attach: path too short");
        VertexId at = path.back();
        if (!contains(at)) throw InvariantError("attach: endpoint not in tree");
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            if (contains(path[i])) throw InvariantError("attach: interior vertex already in tree");
            if (!host_->adjacent(path[i], path[i + 1]))
                throw InvariantError("attach: non-edge in path");
        }
        for (std::size_t i = path.size() - 1; i-- > 0;) {
            VertexId p = path[i + 1], v = path[i];
            parent_[v] = p;
            height_[v] = height_[p] + 1;
            children_[p].push_back(v);
            order_.push_back(v);
        }
        AttachEvent ev;
        ev.step = step < 0 ? (int)log_.size() : step;
        ev.path = path;
        ev.attach_height = height_[at];
        log_.push_back(std::move(ev));
    }

    int radius() const {
        int r = 0;
        for (auto& [v, h] : height_) r = std::max(r, h);
        return r;
    }

    //! Children of the root, each labelling one branch (root-subtree).
    std::vector<VertexId> branch_roots() const {
        auto b = children(root_);
        std::sort(b.begin(), b.end());
        return b;
    }

    //! The branch (child of root) above v, or nullopt for the root itself.
    std::optional<VertexId> branch_of(VertexId v) const {
        if (v == root_) return std::nullopt;
        VertexId cur = v;
        while (auto p = parent(cur)) {
            if (*p == root_) return cur;
            cur = *p;
        }
        return cur;
    }

    //! Maximal branches: paths from root to each leaf, sorted by leaf index.
    std::vector<std::vector<VertexId>> maximal_branches() const {
        std::vector<std::vector<VertexId>> out;
        std::vector<VertexId> leaves;
        for (auto& [v, h] : height_)
            if (children(v).empty()) leaves.push_back(v);
        std::sort(leaves.begin(), leaves.end());
        for (VertexId leaf : leaves) {
            auto p = down_closure(leaf);
            std::reverse(p.begin(), p.end());
            out.push_back(std::move(p));
        }
        return out;
    }

    std::vector<VertexId> sorted_vertices() const {
        std::vector<VertexId> vs = order_;
        std::sort(vs.begin(), vs.end());
        return vs;
    }

  private:
    const GraphOracle* host_;
    VertexId root_;
    std::unordered_map<VertexId, VertexId> parent_;
    std::unordered_map<VertexId, int> height_;
    std::unordered_map<VertexId, std::vector<VertexId>> children_;
    std::vector<VertexId> order_;
    std::vector<AttachEvent> log_;
};

/**
 * An infinite spanning tree given by a total parent rule: parent(v) is the
 * tree-parent, nullopt exactly at the root. Every parent walk must reach the
 * root in finitely many steps.
 */
struct SpanningTreeRule {
    std::string name;
    VertexId root = 0;
    std::function<std::optional<VertexId>(VertexId)> parent;

    //! Walk to the root, collecting the path (v first, root last).
    std::vector<VertexId> root_path(VertexId v, std::size_t limit = 1 << 20) const {
        std::vector<VertexId> p{v};
        while (auto q = parent(p.back())) {
            p.push_back(*q);
            if (p.size() > limit) throw InvariantError("spanning tree: parent walk too long");
        }
        if (p.back() != root) throw InvariantError("spanning tree: walk missed root");
        return p;
    }

    //! True when `anc` lies on the root path of v (inclusive).
    bool in_subtree(VertexId v, VertexId anc) const {
        VertexId cur = v;
        while (true) {
            if (cur == anc) return true;
            auto p = parent(cur);
            if (!p) return false;
            cur = *p;
        }
    }
};

//! Grow the snapshot of a rule-defined spanning tree on all vertices below
//! the horizon (attaching each via its root path).
inline RootedTree materialize_rule_tree(const GraphOracle& g, const SpanningTreeRule& rule,
                                        VertexId horizon) {
    RootedTree t(g, rule.root);
    for (VertexId v = 0; v < horizon; ++v) {
        if (!g.has_vertex(v) || t.contains(v)) continue;
        auto path = rule.root_path(v);
        std::size_t cut = 0;
        while (cut < path.size() && !t.contains(path[cut])) ++cut;
        if (cut == path.size()) throw InvariantError("rule tree: detached root path");
        t.attach_path(std::vector<VertexId>(path.begin(), path.begin() + cut + 1));
    }
    return t;
}

}  // namespace combforge
