#pragma once

#include "combforge/certificates.hpp"
#include "combforge/core.hpp"
#include "combforge/tree.hpp"

namespace combforge {

//! Machine-readable rejection classes; stable strings for the CLI and tests.
enum class Violation {
    none,
    non_edge,            // consecutive path vertices not adjacent in the oracle
    path_repeats,        // a path revisits a vertex
    paths_intersect,     // two paths share a vertex other than the common center
    leaf_not_in_u,       // star leaf outside U
    center_mismatch,     // star path does not begin at the center
    tooth_not_in_u,      // comb tooth outside U
    tooth_meets_spine,   // tooth path touches the spine beyond its first vertex
    tooth_detached,      // tooth path does not begin on the spine
    spine_not_ray,       // spine prefix is not a path in the oracle
    anchor_mismatch,     // spine is not a prefix of the anchored end's ray
    unknown_anchor,      // anchored end id missing from the registry
    domination_mismatch, // undominated flag contradicts the registry
    fan_endpoint_off_ray,
    fan_center_mismatch,
    empty_certificate,
    tree_not_subgraph,   // tree edge absent from the oracle
    tree_cyclic,
    decomposition_mismatch,  // serialized decomposition disagrees with re-derivation
};

inline const char* violation_name(Violation v) {
    switch (v) {
        case Violation::none: return "none";
        case Violation::non_edge: return "non-edge";
        case Violation::path_repeats: return "path-repeats";
        case Violation::paths_intersect: return "paths-intersect";
        case Violation::leaf_not_in_u: return "leaf-not-in-u";
        case Violation::center_mismatch: return "center-mismatch";
        case Violation::tooth_not_in_u: return "tooth-not-in-u";
        case Violation::tooth_meets_spine: return "tooth-meets-spine";
        case Violation::tooth_detached: return "tooth-detached";
        case Violation::spine_not_ray: return "spine-not-ray";
        case Violation::anchor_mismatch: return "anchor-mismatch";
        case Violation::unknown_anchor: return "unknown-anchor";
        case Violation::domination_mismatch: return "domination-mismatch";
        case Violation::fan_endpoint_off_ray: return "fan-endpoint-off-ray";
        case Violation::fan_center_mismatch: return "fan-center-mismatch";
        case Violation::empty_certificate: return "empty-certificate";
        case Violation::tree_not_subgraph: return "tree-not-subgraph";
        case Violation::tree_cyclic: return "tree-cyclic";
        case Violation::decomposition_mismatch: return "decomposition-mismatch";
    }
    return "unknown";
}

struct VerifyReport {
    Violation violation = Violation::none;
    std::string detail;
    bool accepted() const { return violation == Violation::none; }

    static VerifyReport fail(Violation v, std::string d) { return {v, std::move(d)}; }
    static VerifyReport pass() { return {}; }
};

namespace detail {

inline std::optional<VerifyReport> check_path(const GraphOracle& g,
                                              const std::vector<VertexId>& p) {
    std::set<VertexId> seen;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!seen.insert(p[i]).second)
            return VerifyReport::fail(Violation::path_repeats,
                                      "vertex " + std::to_string(p[i]) + " repeats");
        if (i + 1 < p.size() && !g.adjacent(p[i], p[i + 1]))
            return VerifyReport::fail(
                Violation::non_edge,
                std::to_string(p[i]) + "-" + std::to_string(p[i + 1]) + " is not an edge");
    }
    return std::nullopt;
}

}  // namespace detail

/**
 * Re-derive every star axiom from the oracle and the U-predicate alone:
 * paths start at the center, are host paths, pairwise meet exactly in the
 * center, and end in U. Trivial single-vertex paths are accepted only for
 * degenerate certificates.
 */
inline VerifyReport verify_star(const GraphOracle& g, const StarCertificate& s,
                                const std::function<bool(VertexId)>& in_u) {
    if (s.paths.empty()) return VerifyReport::fail(Violation::empty_certificate, "no paths");
    std::map<VertexId, int> uses;
    for (const auto& p : s.paths) {
        if (p.empty()) return VerifyReport::fail(Violation::empty_certificate, "empty path");
        if (p.front() != s.center)
            return VerifyReport::fail(Violation::center_mismatch,
                                      "path starts at " + std::to_string(p.front()));
        if (auto bad = detail::check_path(g, p)) return *bad;
        if (!in_u(p.back()))
            return VerifyReport::fail(Violation::leaf_not_in_u,
                                      "leaf " + std::to_string(p.back()) + " not in U");
        for (VertexId v : p) ++uses[v];
    }
    for (auto& [v, n] : uses)
        if (n > 1 && v != s.center)
            return VerifyReport::fail(Violation::paths_intersect,
                                      "vertex " + std::to_string(v) + " shared");
    // distinct leaves (paths may not collapse onto one U-vertex)
    std::set<VertexId> leaves;
    for (const auto& p : s.paths)
        if (!leaves.insert(p.back()).second && p.back() != s.center)
            return VerifyReport::fail(Violation::paths_intersect, "duplicate leaf");
    return VerifyReport::pass();
}

/**
 * Re-derive every comb axiom: the spine is a host path and a prefix of the
 * anchored ray; tooth paths begin on the spine, leave it immediately, are
 * pairwise disjoint, and end in U.
 */
inline VerifyReport verify_comb(const GraphOracle& g, const CombCertificate& c,
                                const std::function<bool(VertexId)>& in_u) {
    if (c.spine.size() < 2)
        return VerifyReport::fail(Violation::empty_certificate, "spine too short");
    if (c.tooth_paths.empty())
        return VerifyReport::fail(Violation::empty_certificate, "no teeth");
    if (auto bad = detail::check_path(g, c.spine)) {
        if (bad->violation == Violation::non_edge) bad->violation = Violation::spine_not_ray;
        return *bad;
    }
    if (c.anchor.kind == SpineAnchor::registry_end) {
        const EndDescriptor* end = g.ends().find(c.anchor.end_id);
        if (!end)
            return VerifyReport::fail(Violation::unknown_anchor,
                                      "end " + std::to_string(c.anchor.end_id));
        for (std::size_t i = 0; i < c.spine.size(); ++i)
            if (end->ray(i) != c.spine[i])
                return VerifyReport::fail(
                    Violation::anchor_mismatch,
                    "spine diverges from declared ray at position " + std::to_string(i));
        if (c.undominated == end->dominated)
            return VerifyReport::fail(Violation::domination_mismatch,
                                      "registry disagrees on domination");
    } else if (c.undominated) {
        return VerifyReport::fail(Violation::domination_mismatch,
                                  "undominated claim without a registry anchor");
    }
    std::set<VertexId> spine_set(c.spine.begin(), c.spine.end());
    std::map<VertexId, int> uses;
    std::set<VertexId> teeth;
    for (const auto& p : c.tooth_paths) {
        if (p.empty()) return VerifyReport::fail(Violation::empty_certificate, "empty tooth");
        if (!spine_set.count(p.front()))
            return VerifyReport::fail(Violation::tooth_detached,
                                      "tooth starts off-spine at " + std::to_string(p.front()));
        if (auto bad = detail::check_path(g, p)) return *bad;
        for (std::size_t i = 1; i < p.size(); ++i)
            if (spine_set.count(p[i]))
                return VerifyReport::fail(Violation::tooth_meets_spine,
                                          "tooth revisits spine at " + std::to_string(p[i]));
        if (!in_u(p.back()))
            return VerifyReport::fail(Violation::tooth_not_in_u,
                                      "tooth " + std::to_string(p.back()) + " not in U");
        if (!teeth.insert(p.back()).second)
            return VerifyReport::fail(Violation::paths_intersect, "duplicate tooth");
        for (VertexId v : p) ++uses[v];
    }
    for (auto& [v, n] : uses)
        if (n > 1)
            return VerifyReport::fail(Violation::paths_intersect,
                                      "tooth paths share " + std::to_string(v));
    return VerifyReport::pass();
}

//! Re-derive fan axioms: paths from the dominator to distinct ray vertices,
//! disjoint except at the dominator.
inline VerifyReport verify_fan(const GraphOracle& g, const FanCertificate& f) {
    const EndDescriptor* end = g.ends().find(f.end_id);
    if (!end)
        return VerifyReport::fail(Violation::unknown_anchor, "end " + std::to_string(f.end_id));
    if (f.paths.empty()) return VerifyReport::fail(Violation::empty_certificate, "no paths");
    auto on_ray = [&](VertexId v) {
        for (std::size_t j = 0; j < 100000; ++j) {
            VertexId r = end->ray(j);
            if (r == v) return true;
            if (r > v) return false;  // rays are index-ascending
        }
        return false;
    };
    std::map<VertexId, int> uses;
    std::set<VertexId> hits;
    for (const auto& p : f.paths) {
        if (p.size() < 2) return VerifyReport::fail(Violation::empty_certificate, "trivial path");
        if (p.front() != f.dominator)
            return VerifyReport::fail(Violation::fan_center_mismatch,
                                      "path starts at " + std::to_string(p.front()));
        if (auto bad = detail::check_path(g, p)) return *bad;
        if (!on_ray(p.back()) || p.back() == f.dominator)
            return VerifyReport::fail(Violation::fan_endpoint_off_ray,
                                      std::to_string(p.back()) + " not on the ray");
        if (!hits.insert(p.back()).second)
            return VerifyReport::fail(Violation::paths_intersect, "duplicate ray endpoint");
        for (VertexId v : p) ++uses[v];
    }
    for (auto& [v, n] : uses)
        if (n > 1 && v != f.dominator)
            return VerifyReport::fail(Violation::paths_intersect,
                                      "paths share " + std::to_string(v));
    return VerifyReport::pass();
}

//! Validate a tree snapshot against its host: every edge real, no cycles
//! (parent structure is cycle-free by construction, so check edges + counts).
inline VerifyReport verify_tree_subgraph(const GraphOracle& g, const RootedTree& t) {
    for (VertexId v : t.order()) {
        auto p = t.parent(v);
        if (!p) continue;
        if (!g.adjacent(v, *p))
            return VerifyReport::fail(Violation::tree_not_subgraph,
                                      std::to_string(v) + "-" + std::to_string(*p));
    }
    return VerifyReport::pass();
}

/**
 * Maximum number of src-to-`targets` paths meeting pairwise exactly in `src`
 * (fan semantics: interior vertices and endpoints all distinct), by
 * unit-capacity augmentation on the vertex-split graph. Used as the honest
 * fan-absence oracle: a value < k at a truncation is evidence (not proof)
 * that no k-fan exists there.
 */
namespace detail {

struct DisjointPathFlow {
    int flow = 0;
    bool hit_limit = false;         // stopped at the path budget, cut meaningless
    std::vector<VertexId> cut;      // min vertex cut when the flow is exact
};

inline DisjointPathFlow disjoint_path_flow(const Truncation& t, VertexId src,
                                           const std::set<VertexId>& targets,
                                           int limit) {
    DisjointPathFlow out;
    auto adj = t.adjacency();
    if (!t.contains(src)) return out;
    // node splitting: in/out per vertex; src and targets uncapped
    std::map<VertexId, int> id;
    int n = 0;
    for (VertexId v : t.vertices) id[v] = n++;
    const int N = 2 * n + 2, S = 2 * n, T = 2 * n + 1;
    auto in_node = [&](VertexId v) { return 2 * id[v]; };
    auto out_node = [&](VertexId v) { return 2 * id[v] + 1; };
    std::vector<std::map<int, int>> cap(N);
    for (VertexId v : t.vertices) {
        // fan paths share only src; each target absorbs at most one path
        cap[in_node(v)][out_node(v)] = (v == src) ? limit + 1 : 1;
    }
    for (auto& [v, nbs] : adj)
        for (VertexId w : nbs) {
            cap[out_node(v)][in_node(w)] = limit + 1;
        }
    cap[S][in_node(src)] = limit + 1;
    for (VertexId v : t.vertices)
        if (targets.count(v) && v != src) cap[out_node(v)][T] = 1;
    std::vector<int> prev(N, -1);
    while (true) {
        if (out.flow >= limit) {
            out.hit_limit = true;
            return out;
        }
        // BFS augment
        prev.assign(N, -1);
        prev[S] = S;
        std::queue<int> q;
        q.push(S);
        while (!q.empty() && prev[T] == -1) {
            int u = q.front();
            q.pop();
            for (auto& [w, c] : cap[u])
                if (c > 0 && prev[w] == -1) {
                    prev[w] = u;
                    q.push(w);
                }
        }
        if (prev[T] == -1) break;
        for (int v = T; v != S; v = prev[v]) {
            cap[prev[v]][v] -= 1;
            cap[v][prev[v]] += 1;
        }
        ++out.flow;
    }
    // the saturated splitting edges crossing the residual reachability
    // frontier form a min vertex cut; capped edges only, so src and targets
    // never appear in it
    for (VertexId v : t.vertices)
        if (prev[in_node(v)] != -1 && prev[out_node(v)] == -1) out.cut.push_back(v);
    return out;
}

}  // namespace detail

inline int max_vertex_disjoint_paths(const Truncation& t, VertexId src,
                                     const std::set<VertexId>& targets, int limit) {
    return detail::disjoint_path_flow(t, src, targets, limit).flow;
}

//! Fan-absence evidence for an end: max disjoint src-to-ray-prefix paths in
//! the truncation, compared against k.
inline int max_fan_at_truncation(const GraphOracle& g, const Truncation& t, VertexId src,
                                 const EndDescriptor& end, int k) {
    std::set<VertexId> ray_targets;
    for (std::size_t j = 0; j < t.size(); ++j) {
        VertexId r = end.ray(j);
        if (r > (t.vertices.empty() ? 0 : t.vertices.back())) break;
        if (t.contains(r) && r != src) ray_targets.insert(r);
    }
    (void)g;
    if (ray_targets.empty()) return 0;
    return max_vertex_disjoint_paths(t, src, ray_targets, k);
}

//! Separator witnessing a bounded fan: a min vertex cut between `src` and the
//! ray prefix inside the truncation, empty when the fan reaches k.
struct FanSeparator {
    int fan = 0;
    bool bounded = false;           // fan stayed below k, cut is exact
    std::vector<VertexId> cut;
};

inline FanSeparator fan_separator_at_truncation(const GraphOracle& g, const Truncation& t,
                                                VertexId src, const EndDescriptor& end,
                                                int k) {
    std::set<VertexId> ray_targets;
    for (std::size_t j = 0; j < t.size(); ++j) {
        VertexId r = end.ray(j);
        if (r > (t.vertices.empty() ? 0 : t.vertices.back())) break;
        if (t.contains(r) && r != src) ray_targets.insert(r);
    }
    (void)g;
    FanSeparator out;
    if (ray_targets.empty()) { out.bounded = true; return out; }
    auto f = detail::disjoint_path_flow(t, src, ray_targets, k);
    out.fan = f.flow;
    out.bounded = !f.hit_limit;
    out.cut = std::move(f.cut);
    return out;
}

}  // namespace combforge
