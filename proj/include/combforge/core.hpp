#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

namespace combforge {

using VertexId = std::uint64_t;

//! Serialization-facing vertex reference; `label` is a pure function of `index`.
struct Vertex {
    VertexId index;
    std::string label;
};

//! Thrown when an operation's stated preconditions do not hold (CLI exit 4).
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

//! Thrown when a structural invariant is violated mid-run (CLI exit 3).
struct InvariantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

//! Thrown when a budget runs out inside an operation that must produce a
//! definite result (CLI exit 2); never a bug, just "raise the budgets".
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

//! Honest "ran out of budget" outcome; never an error.
struct Exhausted {
    std::string stage;
    std::string detail;
};

template <class T>
using Outcome = std::variant<T, Exhausted>;

template <class T>
bool ok(const Outcome<T>& o) { return o.index() == 0; }

template <class T>
const T& value(const Outcome<T>& o) { return std::get<0>(o); }

template <class T>
const Exhausted& exhausted(const Outcome<T>& o) { return std::get<1>(o); }

//! Search budgets. Every search is bounded by these; defaults are per-family.
struct Budget {
    int k = 8;                 // certificate size (teeth, leaves, fan paths)
    int depth = 32;            // path / exploration depth bound
    int steps = 200;           // builder iterations
    VertexId horizon = 4096;   // vertex-index bound: searches live in G[{0..horizon-1}]
    std::size_t cap = 200000;  // hard cap on discovered vertices per search
};

//! Pull-based cursor over a (possibly infinite) stream of vertex indices.
class NeighborCursor {
  public:
    explicit NeighborCursor(std::function<std::optional<VertexId>(std::size_t)> at)
        : at_(std::move(at)) {}

    std::optional<VertexId> next() { return at_(pos_++); }
    std::size_t pulls() const { return pos_; }

  private:
    std::function<std::optional<VertexId>(std::size_t)> at_;
    std::size_t pos_ = 0;
};

struct EndDescriptor {
    int id = 0;
    bool dominated = false;
    // i-th vertex of the representative ray; injective, consecutive vertices
    // adjacent, and (catalog convention) strictly index-ascending.
    std::function<VertexId(std::size_t)> ray;
    // Stream of dominating vertices; exhausts (nullopt) for undominated ends.
    std::function<std::optional<VertexId>(std::size_t)> dominators;
    std::string note;
};

//! Declared end metadata. Domination is not finitely decidable, so families
//! declare it; `ends` is a representative sample unless `exhaustive`.
struct EndRegistry {
    std::vector<EndDescriptor> ends;
    bool exhaustive = true;
    bool all_ends_dominated = false;

    const EndDescriptor* find(int id) const {
        for (const auto& e : ends)
            if (e.id == id) return &e;
        return nullptr;
    }
};

/**
 * A countable graph presented lazily: a total enumeration (vertex i is just
 * the index i), per-vertex neighbor streams ordered by increasing index, and
 * decidable adjacency. Implementations must be deterministic and pure.
 */
class GraphOracle {
  public:
    virtual ~GraphOracle() = default;

    virtual std::string name() const = 0;

    //! i-th neighbor of v in increasing index order; nullopt when exhausted.
    virtual std::optional<VertexId> neighbor_at(VertexId v, std::size_t i) const = 0;

    //! Decidable adjacency. Default scans neighbors(v) until the stream
    //! passes u, which terminates because streams are increasing.
    virtual bool adjacent(VertexId u, VertexId v) const {
        if (u == v) return false;
        for (std::size_t i = 0;; ++i) {
            auto w = neighbor_at(v, i);
            if (!w || *w > u) return false;
            if (*w == u) return true;
        }
    }

    virtual std::string label(VertexId v) const { return "v" + std::to_string(v); }

    //! Number of vertices when finite; nullopt for the infinite catalog families.
    virtual std::optional<std::uint64_t> vertex_count() const { return std::nullopt; }

    virtual const EndRegistry& ends() const {
        static const EndRegistry empty;
        return empty;
    }

    NeighborCursor neighbors(VertexId v) const {
        return NeighborCursor([this, v](std::size_t i) { return neighbor_at(v, i); });
    }

    bool has_vertex(VertexId v) const {
        auto c = vertex_count();
        return !c || v < *c;
    }

    Vertex vertex(VertexId v) const { return {v, label(v)}; }

    //! Neighbors of v with index < bound, as a sorted vector. Terminates on
    //! infinite streams because they are increasing.
    std::vector<VertexId> neighbors_below(VertexId v, VertexId bound) const {
        std::vector<VertexId> out;
        for (std::size_t i = 0;; ++i) {
            auto w = neighbor_at(v, i);
            if (!w || *w >= bound) break;
            out.push_back(*w);
        }
        return out;
    }
};

//! Explicit finite graph wrapped as an oracle; used for tests, induced parts
//! and expanded pieces. Adjacency lists are kept sorted.
class FiniteGraph : public GraphOracle {
  public:
    FiniteGraph(std::string name, std::size_t n,
                const std::vector<std::pair<VertexId, VertexId>>& edges)
        : name_(std::move(name)), adj_(n) {
        for (auto [u, v] : edges) add_edge(u, v);
    }

    void add_edge(VertexId u, VertexId v) {
        if (u == v) throw InvariantError("finite graph: loop edge");
        if (u >= adj_.size() || v >= adj_.size())
            throw InvariantError("finite graph: edge endpoint out of range");
        insert_sorted(adj_[u], v);
        insert_sorted(adj_[v], u);
    }

    std::string name() const override { return name_; }

    std::optional<VertexId> neighbor_at(VertexId v, std::size_t i) const override {
        if (v >= adj_.size() || i >= adj_[v].size()) return std::nullopt;
        return adj_[v][i];
    }

    bool adjacent(VertexId u, VertexId v) const override {
        if (v >= adj_.size()) return false;
        return std::binary_search(adj_[v].begin(), adj_[v].end(), u);
    }

    std::optional<std::uint64_t> vertex_count() const override { return adj_.size(); }

    const EndRegistry& ends() const override { return registry_; }
    EndRegistry& registry() { return registry_; }

    std::size_t size() const { return adj_.size(); }

  private:
    static void insert_sorted(std::vector<VertexId>& vec, VertexId x) {
        auto it = std::lower_bound(vec.begin(), vec.end(), x);
        if (it == vec.end() || *it != x) vec.insert(it, x);
    }

    std::string name_;
    std::vector<std::vector<VertexId>> adj_;
    EndRegistry registry_;
};

/**
 * Finite induced snapshot of an oracle. `complete` is false when a vertex cap
 * clipped exploration, i.e. the snapshot may be a proper subset of the
 * intended region.
 */
struct Truncation {
    std::vector<VertexId> vertices;                    // sorted, unique
    std::vector<std::pair<VertexId, VertexId>> edges;  // u < v, sorted
    bool complete = true;
    std::string mode;

    bool contains(VertexId v) const {
        return std::binary_search(vertices.begin(), vertices.end(), v);
    }

    std::size_t size() const { return vertices.size(); }

    //! Sorted adjacency restricted to the truncation.
    std::map<VertexId, std::vector<VertexId>> adjacency() const {
        std::map<VertexId, std::vector<VertexId>> adj;
        for (VertexId v : vertices) adj[v];
        for (auto [u, v] : edges) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        for (auto& [v, nb] : adj) std::sort(nb.begin(), nb.end());
        return adj;
    }
};

namespace detail {

//! Collect induced edges among `vertices` (sorted) by pulling neighbor
//! streams up to the maximum member index.
inline std::vector<std::pair<VertexId, VertexId>>
induced_edges(const GraphOracle& g, const std::vector<VertexId>& vertices) {
    std::vector<std::pair<VertexId, VertexId>> edges;
    if (vertices.empty()) return edges;
    const VertexId bound = vertices.back() + 1;
    for (VertexId v : vertices) {
        for (VertexId w : g.neighbors_below(v, bound)) {
            if (w > v && std::binary_search(vertices.begin(), vertices.end(), w))
                edges.emplace_back(v, w);
        }
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

}  // namespace detail

//! Induced subgraph on the first n enumerated vertices.
inline Truncation truncate_first_n(const GraphOracle& g, VertexId n) {
    Truncation t;
    t.mode = "first-" + std::to_string(n);
    auto c = g.vertex_count();
    VertexId hi = c ? std::min<VertexId>(n, *c) : n;
    t.vertices.reserve(hi);
    for (VertexId v = 0; v < hi; ++v) t.vertices.push_back(v);
    t.edges = detail::induced_edges(g, t.vertices);
    return t;
}

//! Ball of given radius around `root`, capped at `max_vertices` discovered
//! vertices (infinite-degree vertices make uncapped balls infinite).
inline Truncation truncate_ball(const GraphOracle& g, VertexId root, int radius,
                                std::size_t max_vertices = 100000) {
    Truncation t;
    t.mode = "ball(" + std::to_string(root) + "," + std::to_string(radius) + ")";
    std::unordered_map<VertexId, int> dist;
    dist[root] = 0;
    std::vector<VertexId> frontier{root};
    for (int d = 0; d < radius && !frontier.empty() && t.complete; ++d) {
        std::sort(frontier.begin(), frontier.end());
        std::vector<VertexId> next;
        for (VertexId v : frontier) {
            for (std::size_t i = 0;; ++i) {
                auto w = g.neighbor_at(v, i);
                if (!w) break;
                if (dist.count(*w)) continue;
                if (dist.size() >= max_vertices) {
                    t.complete = false;
                    break;
                }
                dist[*w] = d + 1;
                next.push_back(*w);
            }
            if (!t.complete) break;
        }
        frontier = std::move(next);
    }
    t.vertices.reserve(dist.size());
    for (auto& [v, d] : dist) t.vertices.push_back(v);
    std::sort(t.vertices.begin(), t.vertices.end());
    t.edges = detail::induced_edges(g, t.vertices);
    return t;
}

/**
 * Vertices reachable from `seed` in G - X within `depth` steps, capped at
 * `max_vertices`. The workhorse for component tracking: which side of a
 * finite separator a ray tail lives on, leaf parts of star-decompositions,
 * closure evidence.
 */
inline Truncation component_after_deletion(const GraphOracle& g,
                                           const std::vector<VertexId>& deleted,
                                           VertexId seed, int depth,
                                           std::size_t max_vertices = 100000,
                                           bool with_edges = true) {
    Truncation t;
    t.mode = "component";
    std::unordered_set<VertexId> x(deleted.begin(), deleted.end());
    if (x.count(seed)) {
        t.complete = false;  // seed itself deleted: empty region, flagged
        return t;
    }
    std::unordered_map<VertexId, int> dist;
    dist[seed] = 0;
    std::vector<VertexId> frontier{seed};
    // per-vertex streams can be infinite yet fully absorbed by x, so pulls
    // are budgeted separately from discovered vertices
    std::size_t pulls = 0;
    const std::size_t pull_cap = 16 * max_vertices + 4096;
    for (int d = 0; d < depth && !frontier.empty() && t.complete; ++d) {
        std::sort(frontier.begin(), frontier.end());
        std::vector<VertexId> next;
        for (VertexId v : frontier) {
            for (std::size_t i = 0;; ++i) {
                auto w = g.neighbor_at(v, i);
                if (!w) break;
                if (++pulls > pull_cap) {
                    t.complete = false;
                    break;
                }
                if (x.count(*w) || dist.count(*w)) continue;
                if (dist.size() >= max_vertices) {
                    t.complete = false;
                    break;
                }
                dist[*w] = d + 1;
                next.push_back(*w);
            }
            if (!t.complete) break;
        }
        frontier = std::move(next);
    }
    if (!frontier.empty()) t.complete = false;  // depth bound clipped the region
    t.vertices.reserve(dist.size());
    for (auto& [v, d] : dist) t.vertices.push_back(v);
    std::sort(t.vertices.begin(), t.vertices.end());
    // dense hosts make induced edges quadratic; membership-only callers skip them
    if (with_edges) t.edges = detail::induced_edges(g, t.vertices);
    return t;
}

//! Breadth-first tree grown inside G[{0..horizon-1}] to a depth bound,
//! avoiding `avoid`. Levels are expanded in sorted order so parent choice is
//! canonical (lowest-index discoverer first).
struct BfsTree {
    VertexId root = 0;
    std::unordered_map<VertexId, VertexId> parent;  // root absent
    std::unordered_map<VertexId, int> depth;
    std::vector<VertexId> order;  // discovery order, levels sorted
    bool clipped = false;         // horizon or cap removed candidate vertices

    bool contains(VertexId v) const { return depth.count(v) > 0; }

    std::vector<VertexId> path_to_root(VertexId v) const {
        std::vector<VertexId> p{v};
        while (parent.count(p.back())) p.push_back(parent.at(p.back()));
        return p;
    }
};

inline BfsTree bfs_within(const GraphOracle& g, VertexId root, int depth_bound,
                          VertexId horizon, std::size_t cap = 200000,
                          const std::unordered_set<VertexId>* avoid = nullptr) {
    BfsTree t;
    t.root = root;
    if (avoid && avoid->count(root)) return t;
    t.depth[root] = 0;
    t.order.push_back(root);
    std::vector<VertexId> frontier{root};
    for (int d = 0; d < depth_bound && !frontier.empty(); ++d) {
        std::sort(frontier.begin(), frontier.end());
        std::vector<VertexId> next;
        for (VertexId v : frontier) {
            for (std::size_t i = 0;; ++i) {
                auto w = g.neighbor_at(v, i);
                if (!w) break;
                if (*w >= horizon) {
                    t.clipped = true;
                    break;  // streams are increasing: nothing below horizon remains
                }
                if (t.depth.count(*w)) continue;
                if (avoid && avoid->count(*w)) continue;
                if (t.depth.size() >= cap) {
                    t.clipped = true;
                    break;
                }
                t.depth[*w] = d + 1;
                t.parent[*w] = v;
                next.push_back(*w);
            }
            if (t.depth.size() >= cap) break;
        }
        std::sort(next.begin(), next.end());
        for (VertexId w : next) t.order.push_back(w);
        frontier = std::move(next);
    }
    if (!frontier.empty()) t.clipped = true;
    return t;
}

//! First ray index from which the representative ray avoids `x` for good.
//! Well-defined because catalog rays are index-ascending and x is finite.
inline std::size_t ray_tail_start(const EndDescriptor& end,
                                  const std::vector<VertexId>& x) {
    VertexId max_x = 0;
    for (VertexId v : x) max_x = std::max(max_x, v);
    std::size_t j = 0;
    while (end.ray(j) <= max_x || std::count(x.begin(), x.end(), end.ray(j)) > 0) ++j;
    return j;
}

struct ClosureEvidence {
    struct Stage {
        VertexId scale;       // deleted set = enumeration prefix [0, scale)
        bool meets_u;         // component toward the end meets U
        bool complete;        // exploration was not clipped
    };
    std::vector<Stage> stages;
    bool in_closure = true;  // every tested stage met U

    std::string summary() const {
        std::string s;
        for (const auto& st : stages) {
            s += "scale " + std::to_string(st.scale) + ": " +
                 (st.meets_u ? "meets" : "avoids") +
                 (st.complete ? "" : " (clipped)") + "; ";
        }
        return s;
    }
};

/**
 * Finite-stage evidence for "end lies in the closure of U": for each scale s,
 * delete the enumeration prefix [0, s) and test whether the component of the
 * ray tail meets U within the exploration budget. Depth-qualified, honest.
 */
inline ClosureEvidence meets_closure_evidence(
    const GraphOracle& g, const EndDescriptor& end,
    const std::function<bool(VertexId)>& in_u,
    const std::vector<VertexId>& scales, int depth, std::size_t cap = 100000) {
    ClosureEvidence ev;
    for (VertexId s : scales) {
        std::vector<VertexId> x;
        x.reserve(s);
        for (VertexId v = 0; v < s; ++v) x.push_back(v);
        std::size_t j = ray_tail_start(end, x);
        VertexId seed = end.ray(j);
        Truncation comp = component_after_deletion(
            g, x, seed, depth, std::min<std::size_t>(cap, 20000), false);
        bool meets = false;
        for (VertexId v : comp.vertices)
            if (in_u(v)) { meets = true; break; }
        ev.stages.push_back({s, meets, comp.complete});
        if (!meets) ev.in_closure = false;
    }
    return ev;
}

//! k vertex-disjoint single-edge paths from a dominator onto the ray; the
//! catalog's declared dominators are all adjacent to infinitely many ray
//! vertices, so direct edges suffice. Returns the chosen ray indices.
inline std::optional<std::vector<std::size_t>>
direct_fan_indices(const GraphOracle& g, VertexId dominator,
                   const EndDescriptor& end, int k, std::size_t scan_limit = 10000) {
    std::vector<std::size_t> picks;
    for (std::size_t j = 0; j < scan_limit && (int)picks.size() < k; ++j) {
        VertexId r = end.ray(j);
        if (r == dominator) continue;
        if (g.adjacent(dominator, r)) picks.push_back(j);
    }
    if ((int)picks.size() < k) return std::nullopt;
    return picks;
}

}  // namespace combforge
