#pragma once

#include <mutex>

#include "combforge/core.hpp"
#include "combforge/decomposition.hpp"
#include "combforge/normal_tree.hpp"
#include "combforge/star_comb.hpp"
#include "combforge/tree.hpp"

namespace combforge {

//! A named canonical U together with everything the engines need to run on
//! it: the declared closure ends live inside the USet, the dispersed cover
//! (when one is known) feeds the tree builders.
struct Preset {
    std::string name;
    USet u;
    std::optional<DispersedCover> cover;
    std::optional<bool> normally_spanned;  // declared metadata, not checked
};

//! Spanning tree shipped for fundamental-cut audits, with the sampled tree
//! edges (given by their child endpoints) the consistency check exercises.
struct AuditTree {
    SpanningTreeRule rule;
    std::vector<VertexId> sample_children;
};

struct FamilySpec {
    std::string name;
    std::string summary;
    bool doc_only = false;
    std::string doc_note;
    std::shared_ptr<GraphOracle> oracle;
    std::vector<Preset> presets;
    bool finitely_separable = true;
    std::vector<AuditTree> audit_trees;
    DecompositionFactory decomposition;
    Budget default_budget;
    //! (operation, preset) -> expected certificate shape, e.g.
    //! ("theorem1", "all") -> "comb".
    std::map<std::pair<std::string, std::string>, std::string> known_answers;

    const Preset* preset(const std::string& n) const {
        for (auto& p : presets)
            if (p.name == n) return &p;
        return nullptr;
    }
};

namespace families {

// ---------------------------------------------------------------------------
// oracles

class ray_oracle : public GraphOracle {
  public:
    ray_oracle() {
        EndDescriptor e;
        e.id = 0;
        e.dominated = false;
        e.ray = [](std::size_t j) { return (VertexId)j; };
        e.dominators = [](std::size_t) { return std::optional<VertexId>{}; };
        e.note = "the tail of the path";
        reg_.ends.push_back(std::move(e));
        reg_.exhaustive = true;
    }

    std::string name() const override { return "ray"; }

    std::optional<VertexId> neighbor_at(VertexId v, std::size_t i) const override {
        if (v == 0) return i == 0 ? std::optional<VertexId>(1) : std::nullopt;
        if (i == 0) return v - 1;
        if (i == 1) return v + 1;
        return std::nullopt;
    }

    bool adjacent(VertexId u, VertexId v) const override {
        return u + 1 == v || v + 1 == u;
    }

    const EndRegistry& ends() const override { return reg_; }

  private:
    EndRegistry reg_;
};

//! Bottom rail 2i, top rail 2i+1, rungs between them.
class ladder_oracle : public GraphOracle {
  public:
    ladder_oracle() {
        EndDescriptor e;
        e.id = 0;
        e.dominated = false;
        e.ray = [](std::size_t j) { return (VertexId)(2 * j); };
        e.dominators = [](std::size_t) { return std::optional<VertexId>{}; };
        e.note = "the single end; bottom rail as representative";
        reg_.ends.push_back(std::move(e));
        reg_.exhaustive = true;
    }

    std::string name() const override { return "one-way-ladder"; }

    std::optional<VertexId> neighbor_at(VertexId v, std::size_t i) const override {
        std::vector<VertexId> nb;
        if (v % 2 == 0) {
            if (v >= 2) nb.push_back(v - 2);
            nb.push_back(v + 1);
            nb.push_back(v + 2);
        } else {
            if (v >= 3) nb.push_back(v - 2);
            nb.push_back(v - 1);
            nb.push_back(v + 2);
        }
        std::sort(nb.begin(), nb.end());
        if (i < nb.size()) return nb[i];
        return std::nullopt;
    }

    const EndRegistry& ends() const override { return reg_; }

  private:
    EndRegistry reg_;
};

/**
 * The integer grid under 4-adjacency, enumerated by L1 diamonds: ring r
 * occupies the contiguous index block [ring_start(r), ring_start(r+1)),
 * quadrant by quadrant.
 */
class grid_oracle : public GraphOracle {
  public:
    grid_oracle() {
        EndDescriptor e;
        e.id = 0;
        e.dominated = false;
        e.ray = [](std::size_t j) { return axis_index((long long)j); };
        e.dominators = [](std::size_t) { return std::optional<VertexId>{}; };
        e.note = "the single end; east axis as representative; undominatedness "
                 "is recorded as bounded max-fan evidence at test depths";
        reg_.ends.push_back(std::move(e));
        reg_.exhaustive = true;
    }

    static VertexId ring_start(VertexId r) { return r == 0 ? 0 : 1 + 2 * r * (r - 1); }

    static VertexId axis_index(long long j) {
        return j == 0 ? 0 : (VertexId)(2 * j * j - 2 * j + 1);
    }

    static std::pair<long long, long long> coord_of(VertexId v) {
        if (v == 0) return {0, 0};
        VertexId r = 1;
        while (ring_start(r + 1) <= v) ++r;
        long long p = (long long)(v - ring_start(r));
        long long q = p / (long long)r, j = p % (long long)r, R = (long long)r;
        if (q == 0) return {R - j, j};
        if (q == 1) return {-j, R - j};
        if (q == 2) return {-(R - j), -j};
        return {j, -(R - j)};
    }

    static VertexId index_of(long long x, long long y) {
        long long r = (x < 0 ? -x : x) + (y < 0 ? -y : y);
        if (r == 0) return 0;
        long long q, j;
        if (x > 0 && y >= 0) {
            q = 0; j = y;
        } else if (x <= 0 && y > 0) {
            q = 1; j = -x;
        } else if (x < 0 && y <= 0) {
            q = 2; j = -y;
        } else {
            q = 3; j = x;
        }
        return ring_start((VertexId)r) + (VertexId)(q * r + j);
    }

    std::string name() const override { return "grid"; }

    std::optional<VertexId> neighbor_at(VertexId v, std::size_t i) const override {
        if (i >= 4) return std::nullopt;
        auto [x, y] = coord_of(v);
        VertexId nb[4] = {index_of(x + 1, y), index_of(x - 1, y), index_of(x, y + 1),
                          index_of(x, y - 1)};
        std::sort(nb, nb + 4);
        return nb[i];
    }

    bool adjacent(VertexId u, VertexId v) const override {
        if (u == v) return false;
        auto [ax, ay] = coord_of(u);
        auto [bx, by] = coord_of(v);
        long long dx = ax - bx, dy = ay - by;
        return (dx == 0 && (dy == 1 || dy == -1)) || (dy == 0 && (dx == 1 || dx == -1));
    }

    std::string label(VertexId v) const override {
        auto [x, y] = coord_of(v);
        return "(" + std::to_string(x) + "," + std::to_string(y) + ")";
    }

    const EndRegistry& ends() const override { return reg_; }

  private:
    EndRegistry reg_;
};

//! v0 = 0, apex = 1, v_i = i + 1 for i >= 1; apex adjacent to every v_i.
class fan_oracle : public GraphOracle {
  public:
    fan_oracle() {
        EndDescriptor e;
        e.id = 0;
        e.dominated = true;
        e.ray = [](std::size_t j) { return j == 0 ? (VertexId)0 : (VertexId)(j + 1); };
        e.dominators = [](std::size_t i) -> std::optional<VertexId> {
            if (i == 0) return 1;
            return std::nullopt;
        };
        e.note = "the ray's end; dominated by the apex";
        reg_.ends.push_back(std::move(e));
        reg_.exhaustive = true;
        reg_.all_ends_dominated = true;
    }

    std::string name() const override { return "fan"; }

    std::optional<VertexId> neighbor_at(VertexId v, std::size_t i) const override {
        if (v == 0) {
            if (i == 0) return 1;
            if (i == 1) return 2;
            return std::nullopt;
        }
        if (v == 1) {  // apex: 0, 2, 3, 4, ...
            if (i == 0) return 0;
            return (VertexId)(i + 1);
        }
        if (v == 2) {
            if (i == 0) return 0;
            if (i == 1) return 1;
            if (i == 2) return 3;
            return std::nullopt;
        }
        if (i == 0) return 1;
        if (i == 1) return v - 1;
        if (i == 2) return v + 1;
        return std::nullopt;
    }

    bool adjacent(VertexId u, VertexId v) const override {
        if (u == v) return false;
        if (u > v) std::swap(u, v);
        if (u == 1 && v >= 2) return true;      // apex to any ray vertex
        if (u == 0) return v == 1 || v == 2;    // v0 to apex and v1
        return v == u + 1;                      // consecutive ray vertices
    }

    std::string label(VertexId v) const override {
        if (v == 1) return "apex";
        return "v" + std::to_string(v == 0 ? 0 : v - 1);
    }

    const EndRegistry& ends() const override { return reg_; }

  private:
    EndRegistry reg_;
};

class complete_oracle : public GraphOracle {
  public:
    complete_oracle() {
        EndDescriptor e;
        e.id = 0;
        e.dominated = true;
        e.ray = [](std::size_t j) { return (VertexId)j; };
        e.dominators = [](std::size_t i) -> std::optional<VertexId> { return (VertexId)i; };
        e.note = "the single end; dominated by every vertex";
        reg_.ends.push_back(std::move(e));
        reg_.exhaustive = true;
        reg_.all_ends_dominated = true;
    }

    std::string name() const override { return "complete"; }

    std::optional<VertexId> neighbor_at(VertexId v, std::size_t i) const override {
        VertexId w = (VertexId)i;
        if (w >= v) ++w;  // skip v itself
        return w;
    }

    bool adjacent(VertexId u, VertexId v) const override { return u != v; }

    const EndRegistry& ends() const override { return reg_; }

  private:
    EndRegistry reg_;
};

class star_oracle : public GraphOracle {
  public:
    star_oracle() {
        reg_.exhaustive = true;
        reg_.all_ends_dominated = true;  // vacuously: the star has no ends
    }

    std::string name() const override { return "infinite-star"; }

    std::optional<VertexId> neighbor_at(VertexId v, std::size_t i) const override {
        if (v == 0) return (VertexId)(i + 1);
        return i == 0 ? std::optional<VertexId>(0) : std::nullopt;
    }

    bool adjacent(VertexId u, VertexId v) const override {
        return u != v && (u == 0 || v == 0);
    }

    const EndRegistry& ends() const override { return reg_; }

  private:
    EndRegistry reg_;
};

//! Rooted binary tree in level order: children of n are 2n+1, 2n+2.
class binary_oracle : public GraphOracle {
  public:
    binary_oracle() {
        EndDescriptor l;
        l.id = 0;
        l.dominated = false;
        l.ray = [](std::size_t j) { return (VertexId)((1ull << std::min<std::size_t>(j, 62)) - 1); };
        l.dominators = [](std::size_t) { return std::optional<VertexId>{}; };
        l.note = "leftmost branch (sample end; the tree has continuum many)";
        EndDescriptor r;
        r.id = 1;
        r.dominated = false;
        r.ray = [](std::size_t j) { return (VertexId)((1ull << std::min<std::size_t>(j + 1, 62)) - 2); };
        r.dominators = [](std::size_t) { return std::optional<VertexId>{}; };
        r.note = "rightmost branch (sample end)";
        reg_.ends = {std::move(l), std::move(r)};
        reg_.exhaustive = false;
    }

    std::string name() const override { return "binary-tree"; }

    std::optional<VertexId> neighbor_at(VertexId v, std::size_t i) const override {
        if (v == 0) {
            if (i == 0) return 1;
            if (i == 1) return 2;
            return std::nullopt;
        }
        if (i == 0) return (v - 1) / 2;
        if (i == 1) return 2 * v + 1;
        if (i == 2) return 2 * v + 2;
        return std::nullopt;
    }

    bool adjacent(VertexId u, VertexId v) const override {
        if (u == v) return false;
        if (u > v) std::swap(u, v);
        return v >= 1 && (v - 1) / 2 == u;
    }

    const EndRegistry& ends() const override { return reg_; }

  private:
    EndRegistry reg_;
};

/**
 * Binary tree with tops, realized countably: tree vertex n sits at index 2n;
 * for every n, the eventually-left branch through n (ancestors of n, then the
 * all-left chain below n) gets a top at index 2n+1 adjacent to that whole
 * branch. Left-tail ends are dominated by the tops along their tail; branches
 * that never settle left (e.g. the all-right one) stay undominated, so the
 * registry is a declared sample and all_ends_dominated is honestly false for
 * this realization.
 */
class tops_oracle : public GraphOracle {
  public:
    tops_oracle() {
        // heap chains: 2^j - 1 (all left), 3*2^(j-1) - 1 (right once at the
        // root child), 7*2^(j-2) - 1 (right twice); tops sit at 2m+1
        EndDescriptor a;
        a.id = 0;
        a.dominated = true;
        a.ray = [](std::size_t j) { return 2 * ((1ull << std::min<std::size_t>(j, 60)) - 1); };
        a.dominators = [](std::size_t i) -> std::optional<VertexId> {
            return (1ull << std::min<std::size_t>(i + 1, 60)) - 1;
        };
        a.note = "all-left branch; dominated by the tops along it";
        EndDescriptor b;
        b.id = 1;
        b.dominated = true;
        b.ray = [](std::size_t j) -> VertexId {
            if (j == 0) return 0;
            return 2 * (3 * (1ull << std::min<std::size_t>(j - 1, 58)) - 1);
        };
        b.dominators = [](std::size_t i) -> std::optional<VertexId> {
            return 2 * (3 * (1ull << std::min<std::size_t>(i + 1, 58)) - 1) + 1;
        };
        b.note = "branch turning right once, then left; dominated by its tail tops";
        EndDescriptor c;
        c.id = 2;
        c.dominated = true;
        c.ray = [](std::size_t j) -> VertexId {
            if (j == 0) return 0;
            if (j == 1) return 4;
            return 2 * (7 * (1ull << std::min<std::size_t>(j - 2, 57)) - 1);
        };
        c.dominators = [](std::size_t i) -> std::optional<VertexId> {
            return 2 * (7 * (1ull << std::min<std::size_t>(i, 57)) - 1) + 1;
        };
        c.note = "branch turning right twice, then left; dominated by its tail tops";
        reg_.ends = {std::move(a), std::move(b), std::move(c)};
        reg_.exhaustive = false;
        reg_.all_ends_dominated = false;
    }

    static bool heap_ancestor(VertexId a, VertexId h) {
        while (h > a) h = (h - 1) / 2;
        return h == a;
    }

    //! n lies strictly below m on m's all-left chain: n+1 == (m+1) * 2^t.
    static bool on_left_chain_below(VertexId n, VertexId m) {
        if (n <= m) return false;
        VertexId x = n + 1, y = m + 1;
        while (x > y && x % 2 == 0) x /= 2;
        return x == y;
    }

    std::string name() const override { return "binary-tree-with-tops"; }

    std::optional<VertexId> neighbor_at(VertexId v, std::size_t i) const override {
        if (v % 2 == 0) {
            VertexId n = v / 2;
            std::vector<VertexId> pre;
            if (n > 0) pre.push_back(2 * ((n - 1) / 2));
            VertexId x = n + 1;  // tops of ancestors whose left chain passes n
            while (x % 2 == 0) {
                x /= 2;
                pre.push_back(2 * (x - 1) + 1);
            }
            std::sort(pre.begin(), pre.end());
            if (i < pre.size()) return pre[i];
            return tail_at(n, i - pre.size());
        }
        VertexId m = (v - 1) / 2;
        std::vector<VertexId> anc;
        for (VertexId h = m;; h = (h - 1) / 2) {
            anc.push_back(h);
            if (h == 0) break;
        }
        std::reverse(anc.begin(), anc.end());
        if (i < anc.size()) return 2 * anc[i];
        std::size_t k = i - anc.size() + 1;
        if (k >= 62 || ((m + 1) >> (62 - k)) > 0) return std::nullopt;
        return 2 * (((m + 1) << k) - 1);
    }

    bool adjacent(VertexId u, VertexId v) const override {
        if (u == v) return false;
        if (u > v) std::swap(u, v);
        if (u % 2 == 0 && v % 2 == 0) {
            VertexId a = u / 2, b = v / 2;
            return b >= 1 && (b - 1) / 2 == a;
        }
        if (u % 2 == 1 && v % 2 == 1) return false;
        VertexId n = (u % 2 == 0 ? u : v) / 2;
        VertexId m = ((u % 2 == 1 ? u : v) - 1) / 2;
        return heap_ancestor(n, m) || on_left_chain_below(n, m);
    }

    std::string label(VertexId v) const override {
        if (v % 2 == 0) return "t" + std::to_string(v / 2);
        return "top" + std::to_string((v - 1) / 2);
    }

    const EndRegistry& ends() const override { return reg_; }

  private:
    //! Merged ascending stream past the tree vertex's prelude: heap children
    //! 4n+2, 4n+4 interleaved with the tops of n's subtree in level order.
    //! Cached per vertex; uncached pulls would cost O(idx) each and make
    //! region scans quadratic.
    std::optional<VertexId> tail_at(VertexId n, std::size_t idx) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto& cache = tail_cache_[n];
        if (idx >= cache.size()) extend_tail(n, cache, std::max<std::size_t>(2 * cache.size(), idx + 8));
        if (idx < cache.size()) return cache[idx];
        return std::nullopt;  // beyond the representable prefix
    }

    void extend_tail(VertexId n, std::vector<VertexId>& out, std::size_t want) const {
        out.clear();
        VertexId child[2] = {4 * n + 2, 4 * n + 4};
        std::size_t ci = 0;
        std::size_t level = 0;
        VertexId width = 1, off = 0;
        auto top_val = [&]() -> std::optional<VertexId> {
            if (level >= 62 || ((n + 1) >> (62 - level)) > 0) return std::nullopt;
            VertexId m = ((n + 1) << level) - 1 + off;
            return 2 * m + 1;
        };
        while (out.size() < want) {
            auto tv = top_val();
            if (ci < 2 && (!tv || child[ci] < *tv)) {
                out.push_back(child[ci]);
                ++ci;
            } else if (tv) {
                out.push_back(*tv);
                if (++off == width) {
                    off = 0;
                    width <<= 1;
                    ++level;
                }
            } else {
                break;
            }
        }
    }

    EndRegistry reg_;
    mutable std::mutex mu_;
    mutable std::unordered_map<VertexId, std::vector<VertexId>> tail_cache_;
};

//! Rooted ternary tree: children of the root are 1, 2, 3; children of n >= 1
//! are 2n+2, 2n+3 plus the root level makes every level triple the pattern.
class ternary_oracle : public GraphOracle {
  public:
    ternary_oracle() {
        EndDescriptor l;
        l.id = 0;
        l.dominated = false;
        l.ray = [](std::size_t j) -> VertexId {
            return j == 0 ? 0 : 3 * (1ull << std::min<std::size_t>(j - 1, 58)) - 2;
        };
        l.dominators = [](std::size_t) { return std::optional<VertexId>{}; };
        l.note = "leftmost branch (sample end)";
        EndDescriptor r;
        r.id = 1;
        r.dominated = false;
        r.ray = [](std::size_t j) -> VertexId {
            return j == 0 ? 0 : 3 * (1ull << std::min<std::size_t>(j, 58)) - 3;
        };
        r.dominators = [](std::size_t) { return std::optional<VertexId>{}; };
        r.note = "rightmost branch (sample end)";
        reg_.ends = {std::move(l), std::move(r)};
        reg_.exhaustive = false;
    }

    static std::optional<VertexId> parent_of(VertexId v) {
        if (v == 0) return std::nullopt;
        if (v <= 3) return 0;
        return (v - 2) / 2;
    }

    std::string name() const override { return "ternary-tree"; }

    std::optional<VertexId> neighbor_at(VertexId v, std::size_t i) const override {
        if (v == 0) {
            if (i < 3) return (VertexId)(i + 1);
            return std::nullopt;
        }
        if (i == 0) return *parent_of(v);
        if (i == 1) return 2 * v + 2;
        if (i == 2) return 2 * v + 3;
        return std::nullopt;
    }

    bool adjacent(VertexId u, VertexId v) const override {
        if (u == v) return false;
        if (u > v) std::swap(u, v);
        auto p = parent_of(v);
        return p && *p == u;
    }

    const EndRegistry& ends() const override { return reg_; }

  private:
    EndRegistry reg_;
};

//! Spine vertex s_i = 2i, pendant tooth c_i = 2i+1.
class comb_oracle : public GraphOracle {
  public:
    comb_oracle() {
        EndDescriptor e;
        e.id = 0;
        e.dominated = false;
        e.ray = [](std::size_t j) { return (VertexId)(2 * j); };
        e.dominators = [](std::size_t) { return std::optional<VertexId>{}; };
        e.note = "the spine's end";
        reg_.ends.push_back(std::move(e));
        reg_.exhaustive = true;
    }

    std::string name() const override { return "comb"; }

    std::optional<VertexId> neighbor_at(VertexId v, std::size_t i) const override {
        if (v % 2 == 1)
            return i == 0 ? std::optional<VertexId>(v - 1) : std::nullopt;
        std::vector<VertexId> nb;
        if (v >= 2) nb.push_back(v - 2);
        nb.push_back(v + 1);
        nb.push_back(v + 2);
        std::sort(nb.begin(), nb.end());
        if (i < nb.size()) return nb[i];
        return std::nullopt;
    }

    bool adjacent(VertexId u, VertexId v) const override {
        if (u == v) return false;
        if (u > v) std::swap(u, v);
        if (u % 2 == 0 && v % 2 == 0) return v == u + 2;
        if (u % 2 == 0 && v % 2 == 1) return v == u + 1;
        return false;
    }

    const EndRegistry& ends() const override { return reg_; }

  private:
    EndRegistry reg_;
};

// ---------------------------------------------------------------------------
// cover helpers

//! Cover whose i-th piece is the single vertex nth(i).
inline DispersedCover singleton_cover(std::function<std::optional<VertexId>(std::size_t)> nth) {
    return DispersedCover{[nth](std::size_t i) -> std::optional<CoverPiece> {
        auto v = nth(i);
        if (!v) return std::nullopt;
        CoverPiece p;
        p.finite = true;
        VertexId x = *v;
        p.at = [x](std::size_t j) -> std::optional<VertexId> {
            if (j == 0) return x;
            return std::nullopt;
        };
        return p;
    }};
}

//! Cover whose i-th piece is a small explicit set (ascending).
inline DispersedCover pieces_cover(
    std::function<std::optional<std::vector<VertexId>>(std::size_t)> nth) {
    return DispersedCover{[nth](std::size_t i) -> std::optional<CoverPiece> {
        auto vs = nth(i);
        if (!vs) return std::nullopt;
        CoverPiece p;
        p.finite = true;
        auto vec = *vs;
        p.at = [vec](std::size_t j) -> std::optional<VertexId> {
            if (j < vec.size()) return vec[j];
            return std::nullopt;
        };
        return p;
    }};
}

//! Cover whose d-th piece is the index interval [lo(d), lo(d+1)).
inline DispersedCover interval_cover(std::function<VertexId(std::size_t)> lo,
                                     std::size_t max_pieces) {
    return DispersedCover{[lo, max_pieces](std::size_t d) -> std::optional<CoverPiece> {
        if (d >= max_pieces) return std::nullopt;
        CoverPiece p;
        p.finite = true;
        VertexId a = lo(d), b = lo(d + 1);
        p.at = [a, b](std::size_t j) -> std::optional<VertexId> {
            if (a + j < b) return a + j;
            return std::nullopt;
        };
        return p;
    }};
}

// ---------------------------------------------------------------------------
// decomposition factories

//! Path decomposition by index windows [stride*j, stride*j + width); adjacent
//! windows overlap in exactly width - stride indices, which is the separator.
inline DecompositionFactory window_factory(std::string name, VertexId stride,
                                           VertexId width, int displayed_end) {
    return [name, stride, width, displayed_end](int scale) {
        int count = std::max(6, scale + 2);
        DisplayingDecomposition dd;
        dd.dec.name = name;
        dd.dec.separators_connected = true;
        dd.dec.separators_pairwise_disjoint = true;
        dd.dec.upwards_disjoint = true;
        for (int j = 0; j < count; ++j) {
            DecompositionNode n;
            n.id = j;
            n.parent = j - 1;
            n.label = "w" + std::to_string(j);
            VertexId lo = stride * (VertexId)j, hi = lo + width;
            n.part = [lo, hi](VertexId v) { return lo <= v && v < hi; };
            for (VertexId v = lo; v < hi; ++v) n.finite_part.push_back(v);
            n.part_finite = true;
            if (j > 0)
                for (VertexId v = lo; v < lo + (width - stride); ++v)
                    n.separator.push_back(v);
            dd.dec.nodes.push_back(std::move(n));
        }
        int cnt = count;
        VertexId st = stride, w = width;
        dd.dec.holders = [cnt, st, w](VertexId v) {
            std::vector<int> out;
            long long top = (long long)(v / st);
            long long bot = top - (long long)(w / st);
            for (long long j = std::max(0ll, bot); j <= top && j < cnt; ++j)
                out.push_back((int)j);
            return out;
        };
        TauTarget t;
        t.to_tree_end = true;
        t.dray = [](std::size_t s) { return (int)s; };
        dd.tau[displayed_end] = t;
        dd.displayed = {displayed_end};
        return dd;
    };
}

inline DecompositionFactory grid_factory() {
    return [](int scale) {
        int count = std::max(6, scale / 2 + 3);
        DisplayingDecomposition dd;
        dd.dec.name = "grid-annuli";
        dd.dec.separators_connected = true;
        dd.dec.separators_pairwise_disjoint = true;
        dd.dec.upwards_disjoint = true;
        for (int j = 0; j < count; ++j) {
            DecompositionNode n;
            n.id = j;
            n.parent = j - 1;
            n.label = "annulus" + std::to_string(j);
            VertexId rlo = 2 * (VertexId)j;
            VertexId lo = grid_oracle::ring_start(rlo);
            VertexId hi = grid_oracle::ring_start(rlo + 4);  // rings rlo..rlo+3
            n.part = [lo, hi](VertexId v) { return lo <= v && v < hi; };
            for (VertexId v = lo; v < hi; ++v) n.finite_part.push_back(v);
            n.part_finite = true;
            if (j > 0)
                for (VertexId v = lo; v < grid_oracle::ring_start(rlo + 2); ++v)
                    n.separator.push_back(v);  // rings rlo, rlo+1
            dd.dec.nodes.push_back(std::move(n));
        }
        int cnt = count;
        dd.dec.holders = [cnt](VertexId v) {
            long long r = 0;
            if (v > 0) {
                VertexId rr = 1;
                while (grid_oracle::ring_start(rr + 1) <= v) ++rr;
                r = (long long)rr;
            }
            std::vector<int> out;
            for (long long j = std::max(0ll, (r - 3) / 2); j <= r / 2 && j < cnt; ++j)
                out.push_back((int)j);
            return out;
        };
        TauTarget t;
        t.to_tree_end = true;
        t.dray = [](std::size_t s) { return (int)s; };
        dd.tau[0] = t;
        dd.displayed = {0};
        return dd;
    };
}

inline DecompositionFactory binary_factory() {
    return [](int scale) {
        int s = std::clamp(scale, 4, 15);
        int count = 1 << (s + 1);
        DisplayingDecomposition dd;
        dd.dec.name = "binary-self";
        dd.dec.separators_connected = true;
        dd.dec.separators_pairwise_disjoint = true;
        dd.dec.upwards_disjoint = true;
        dd.dec.nodes.resize(count);
        for (int t = 0; t < count; ++t) {
            auto& n = dd.dec.nodes[t];
            n.id = t;
            n.parent = t == 0 ? -1 : (t - 1) / 2;
            n.label = "b" + std::to_string(t);
            VertexId tt = (VertexId)t;
            n.part = [tt](VertexId v) { return v == tt || v == 2 * tt + 1 || v == 2 * tt + 2; };
            n.finite_part = {tt, 2 * tt + 1, 2 * tt + 2};
            n.part_finite = true;
            if (t > 0) n.separator = {tt};
        }
        int cnt = count;
        dd.dec.holders = [cnt](VertexId v) {
            std::vector<int> out;
            if (v < (VertexId)cnt) out.push_back((int)v);
            if (v > 0 && (v - 1) / 2 < (VertexId)cnt) out.push_back((int)((v - 1) / 2));
            return out;
        };
        TauTarget a;
        a.to_tree_end = true;
        a.dray = [](std::size_t sc) { return (int)((1ull << std::min<std::size_t>(sc, 30)) - 1); };
        TauTarget b;
        b.to_tree_end = true;
        b.dray = [](std::size_t sc) { return (int)((1ull << std::min<std::size_t>(sc + 1, 30)) - 2); };
        dd.tau[0] = a;
        dd.tau[1] = b;
        dd.displayed = {0, 1};
        return dd;
    };
}

inline DecompositionFactory ternary_factory() {
    return [](int scale) {
        int s = std::clamp(scale, 4, 14);
        int count = 3 * (1 << s);
        DisplayingDecomposition dd;
        dd.dec.name = "ternary-self";
        dd.dec.separators_connected = true;
        dd.dec.separators_pairwise_disjoint = true;
        dd.dec.upwards_disjoint = true;
        dd.dec.nodes.resize(count);
        for (int t = 0; t < count; ++t) {
            auto& n = dd.dec.nodes[t];
            n.id = t;
            n.parent = t == 0 ? -1 : (int)*ternary_oracle::parent_of((VertexId)t);
            n.label = "t" + std::to_string(t);
            VertexId tt = (VertexId)t;
            if (t == 0) {
                n.part = [](VertexId v) { return v <= 3; };
                n.finite_part = {0, 1, 2, 3};
            } else {
                n.part = [tt](VertexId v) {
                    return v == tt || v == 2 * tt + 2 || v == 2 * tt + 3;
                };
                n.finite_part = {tt, 2 * tt + 2, 2 * tt + 3};
            }
            n.part_finite = true;
            if (t > 0) n.separator = {tt};
        }
        int cnt = count;
        dd.dec.holders = [cnt](VertexId v) {
            std::vector<int> out;
            if (v < (VertexId)cnt) out.push_back((int)v);
            auto p = ternary_oracle::parent_of(v);
            if (p && *p < (VertexId)cnt) out.push_back((int)*p);
            return out;
        };
        TauTarget a;
        a.to_tree_end = true;
        a.dray = [](std::size_t sc) {
            return sc == 0 ? 0 : (int)(3 * (1ull << std::min<std::size_t>(sc - 1, 28)) - 2);
        };
        TauTarget b;
        b.to_tree_end = true;
        b.dray = [](std::size_t sc) {
            return sc == 0 ? 0 : (int)(3 * (1ull << std::min<std::size_t>(sc, 28)) - 3);
        };
        dd.tau[0] = a;
        dd.tau[1] = b;
        dd.displayed = {0, 1};
        return dd;
    };
}

inline DecompositionFactory single_part_factory(std::string name, std::vector<int> end_ids) {
    return [name, end_ids](int) {
        DisplayingDecomposition dd;
        dd.dec.name = name;
        dd.dec.separators_connected = true;
        dd.dec.separators_pairwise_disjoint = true;
        dd.dec.upwards_disjoint = true;
        DecompositionNode n;
        n.id = 0;
        n.label = "whole";
        n.part = [](VertexId) { return true; };
        dd.dec.nodes.push_back(std::move(n));
        dd.dec.holders = [](VertexId) { return std::vector<int>{0}; };
        for (int id : end_ids) {
            TauTarget t;
            t.node = 0;
            dd.tau[id] = t;
        }
        return dd;
    };
}

// ---------------------------------------------------------------------------
// family construction

inline FamilySpec make_ray() {
    FamilySpec f;
    f.name = "ray";
    f.summary = "One-way infinite path v0 v1 v2 ...";
    f.oracle = std::make_shared<ray_oracle>();
    f.finitely_separable = true;
    f.default_budget = Budget{8, 16, 200, 4096, 200000};
    f.decomposition = window_factory("ray-windows", 3, 4, 0);

    Preset all{"all", {"all", [](VertexId) { return true; }, true, {0}},
               singleton_cover([](std::size_t i) { return std::optional<VertexId>((VertexId)i); }),
               true};
    Preset even{"even", {"even", [](VertexId v) { return v % 2 == 0; }, true, {0}},
                singleton_cover([](std::size_t i) { return std::optional<VertexId>(2 * (VertexId)i); }),
                true};
    Preset origin{"origin", {"origin", [](VertexId v) { return v == 0; }, false, {}},
                  singleton_cover([](std::size_t i) -> std::optional<VertexId> {
                      if (i == 0) return 0;
                      return std::nullopt;
                  }),
                  true};
    f.presets = {all, even, origin};

    SpanningTreeRule tail{"tail-path", 0, [](VertexId v) -> std::optional<VertexId> {
                              if (v == 0) return std::nullopt;
                              return v - 1;
                          }};
    f.audit_trees = {{tail, {1, 5, 9}}};

    for (auto p : {"all", "even"}) {
        f.known_answers[{"star-comb", p}] = "comb";
        f.known_answers[{"theorem1", p}] = "comb";
        f.known_answers[{"theorem3", p}] = "comb";
        f.known_answers[{"theorem4", p}] = "comb";
    }
    f.known_answers[{"star-comb", "origin"}] = "star";
    f.known_answers[{"theorem1", "origin"}] = "rayless-tree";
    f.known_answers[{"theorem3", "origin"}] = "star-decomposition";
    f.known_answers[{"theorem4", "origin"}] = "dominated-subgraph";
    return f;
}

inline FamilySpec make_ladder() {
    FamilySpec f;
    f.name = "one-way-ladder";
    f.summary = "Two parallel rays joined by rungs";
    f.oracle = std::make_shared<ladder_oracle>();
    f.finitely_separable = true;
    f.default_budget = Budget{8, 16, 200, 4096, 200000};
    f.decomposition = window_factory("ladder-windows", 2, 4, 0);

    Preset all{"all", {"all", [](VertexId) { return true; }, true, {0}},
               pieces_cover([](std::size_t i) {
                   return std::optional<std::vector<VertexId>>(
                       std::vector<VertexId>{2 * (VertexId)i, 2 * (VertexId)i + 1});
               }),
               true};
    Preset bottom{"bottom-rail", {"bottom-rail", [](VertexId v) { return v % 2 == 0; }, true, {0}},
                  singleton_cover([](std::size_t i) { return std::optional<VertexId>(2 * (VertexId)i); }),
                  true};
    Preset rung{"first-rung", {"first-rung", [](VertexId v) { return v <= 1; }, false, {}},
                pieces_cover([](std::size_t i) -> std::optional<std::vector<VertexId>> {
                    if (i == 0) return std::vector<VertexId>{0, 1};
                    return std::nullopt;
                }),
                true};
    f.presets = {all, bottom, rung};

    SpanningTreeRule rungs{"bottom-rungs", 0, [](VertexId v) -> std::optional<VertexId> {
                               if (v == 0) return std::nullopt;
                               if (v % 2 == 1) return v - 1;
                               return v - 2;
                           }};
    f.audit_trees = {{rungs, {3, 5, 7, 4}}};

    for (auto p : {"all", "bottom-rail"}) {
        f.known_answers[{"star-comb", p}] = "comb";
        f.known_answers[{"theorem1", p}] = "comb";
        f.known_answers[{"theorem3", p}] = "comb";
        f.known_answers[{"theorem4", p}] = "comb";
    }
    f.known_answers[{"star-comb", "first-rung"}] = "star";
    f.known_answers[{"theorem1", "first-rung"}] = "rayless-tree";
    f.known_answers[{"theorem3", "first-rung"}] = "star-decomposition";
    f.known_answers[{"theorem4", "first-rung"}] = "dominated-subgraph";
    return f;
}

inline FamilySpec make_grid() {
    FamilySpec f;
    f.name = "grid";
    f.summary = "The integer grid under 4-adjacency, enumerated by L1 diamonds";
    f.oracle = std::make_shared<grid_oracle>();
    f.finitely_separable = true;
    f.default_budget = Budget{8, 12, 200, 4096, 200000};
    f.decomposition = grid_factory();

    Preset all{"all", {"all", [](VertexId) { return true; }, true, {0}},
               interval_cover([](std::size_t d) { return grid_oracle::ring_start((VertexId)d); }, 4000),
               true};
    Preset axis{"east-axis",
                {"east-axis",
                 [](VertexId v) {
                     if (v == 0) return true;
                     for (long long j = 1;; ++j) {
                         VertexId idx = grid_oracle::axis_index(j);
                         if (idx == v) return true;
                         if (idx > v) return false;
                     }
                 },
                 true,
                 {0}},
                singleton_cover([](std::size_t i) {
                    return std::optional<VertexId>(grid_oracle::axis_index((long long)i));
                }),
                true};
    Preset block{"origin-block", {"origin-block", [](VertexId v) { return v < 25; }, false, {}},
                 pieces_cover([](std::size_t i) -> std::optional<std::vector<VertexId>> {
                     if (i > 0) return std::nullopt;
                     std::vector<VertexId> vs;
                     for (VertexId v = 0; v < 25; ++v) vs.push_back(v);
                     return vs;
                 }),
                 true};
    f.presets = {all, axis, block};

    for (auto p : {"all", "east-axis"}) {
        f.known_answers[{"star-comb", p}] = "comb";
        f.known_answers[{"theorem1", p}] = "comb";
        f.known_answers[{"theorem3", p}] = "comb";
        f.known_answers[{"theorem4", p}] = "comb";
    }
    f.known_answers[{"star-comb", "origin-block"}] = "star";
    f.known_answers[{"theorem1", "origin-block"}] = "rayless-tree";
    f.known_answers[{"theorem3", "origin-block"}] = "star-decomposition";
    f.known_answers[{"theorem4", "origin-block"}] = "dominated-subgraph";
    return f;
}

inline FamilySpec make_fan() {
    FamilySpec f;
    f.name = "fan";
    f.summary = "A ray plus an apex adjacent to every ray vertex";
    f.oracle = std::make_shared<fan_oracle>();
    f.finitely_separable = true;
    f.default_budget = Budget{8, 8, 200, 4096, 200000};
    f.decomposition = single_part_factory("fan-single", {0});

    Preset all{"all", {"all", [](VertexId) { return true; }, true, {0}},
               pieces_cover([](std::size_t i) -> std::optional<std::vector<VertexId>> {
                   if (i == 0) return std::vector<VertexId>{0, 1};
                   return std::vector<VertexId>{1, (VertexId)i + 1};
               }),
               true};
    Preset rayv{"ray-vertices", {"ray-vertices", [](VertexId v) { return v != 1; }, true, {0}},
                singleton_cover([](std::size_t i) -> std::optional<VertexId> {
                    return i == 0 ? (VertexId)0 : (VertexId)(i + 1);
                }),
                true};
    Preset apex{"apex", {"apex", [](VertexId v) { return v == 1; }, false, {}},
                singleton_cover([](std::size_t i) -> std::optional<VertexId> {
                    if (i == 0) return 1;
                    return std::nullopt;
                }),
                true};
    f.presets = {all, rayv, apex};

    SpanningTreeRule star_rule{"apex-star", 1, [](VertexId v) -> std::optional<VertexId> {
                                   if (v == 1) return std::nullopt;
                                   return 1;
                               }};
    SpanningTreeRule ray_rule{"ray-path", 0, [](VertexId v) -> std::optional<VertexId> {
                                  if (v == 0) return std::nullopt;
                                  if (v <= 2) return 0;
                                  return v - 1;
                              }};
    f.audit_trees = {{star_rule, {0, 2, 5}}, {ray_rule, {1, 3}}};

    f.known_answers[{"star-comb", "all"}] = "comb";
    f.known_answers[{"theorem1", "all"}] = "rayless-tree";
    f.known_answers[{"theorem3", "all"}] = "star-decomposition";
    f.known_answers[{"theorem4", "all"}] = "dominated-subgraph";
    f.known_answers[{"star-comb", "ray-vertices"}] = "comb";
    f.known_answers[{"theorem1", "ray-vertices"}] = "rayless-tree";
    f.known_answers[{"theorem3", "ray-vertices"}] = "star-decomposition";
    f.known_answers[{"theorem4", "ray-vertices"}] = "dominated-subgraph";
    f.known_answers[{"star-comb", "apex"}] = "star";
    f.known_answers[{"theorem1", "apex"}] = "rayless-tree";
    f.known_answers[{"theorem3", "apex"}] = "star-decomposition";
    f.known_answers[{"theorem4", "apex"}] = "dominated-subgraph";
    return f;
}

inline FamilySpec make_complete() {
    FamilySpec f;
    f.name = "complete";
    f.summary = "The complete graph on countably many vertices";
    f.oracle = std::make_shared<complete_oracle>();
    f.finitely_separable = false;
    f.default_budget = Budget{8, 6, 200, 4096, 200000};
    f.decomposition = single_part_factory("complete-single", {0});

    Preset all{"all", {"all", [](VertexId) { return true; }, true, {0}},
               singleton_cover([](std::size_t i) { return std::optional<VertexId>((VertexId)i); }),
               true};
    Preset origin{"origin", {"origin", [](VertexId v) { return v == 0; }, false, {}},
                  singleton_cover([](std::size_t i) -> std::optional<VertexId> {
                      if (i == 0) return 0;
                      return std::nullopt;
                  }),
                  true};
    f.presets = {all, origin};

    SpanningTreeRule hub{"v0-star", 0, [](VertexId v) -> std::optional<VertexId> {
                             if (v == 0) return std::nullopt;
                             return 0;
                         }};
    f.audit_trees = {{hub, {1, 2}}};

    f.known_answers[{"star-comb", "all"}] = "comb";
    f.known_answers[{"theorem1", "all"}] = "rayless-tree";
    f.known_answers[{"theorem3", "all"}] = "star-decomposition";
    f.known_answers[{"theorem4", "all"}] = "dominated-subgraph";
    f.known_answers[{"star-comb", "origin"}] = "star";
    f.known_answers[{"theorem1", "origin"}] = "rayless-tree";
    f.known_answers[{"theorem3", "origin"}] = "star-decomposition";
    f.known_answers[{"theorem4", "origin"}] = "dominated-subgraph";
    return f;
}

inline FamilySpec make_star() {
    FamilySpec f;
    f.name = "infinite-star";
    f.summary = "One hub adjacent to countably many leaves";
    f.oracle = std::make_shared<star_oracle>();
    f.finitely_separable = true;
    f.default_budget = Budget{8, 4, 200, 4096, 200000};
    f.decomposition = single_part_factory("star-single", {});

    Preset all{"all", {"all", [](VertexId) { return true; }, true, {}},
               singleton_cover([](std::size_t i) { return std::optional<VertexId>((VertexId)i); }),
               true};
    Preset leaves{"leaves", {"leaves", [](VertexId v) { return v >= 1; }, true, {}},
                  singleton_cover([](std::size_t i) { return std::optional<VertexId>((VertexId)i + 1); }),
                  true};
    Preset hub{"hub", {"hub", [](VertexId v) { return v == 0; }, false, {}},
               singleton_cover([](std::size_t i) -> std::optional<VertexId> {
                   if (i == 0) return 0;
                   return std::nullopt;
               }),
               true};
    f.presets = {all, leaves, hub};

    SpanningTreeRule rule{"hub-star", 0, [](VertexId v) -> std::optional<VertexId> {
                              if (v == 0) return std::nullopt;
                              return 0;
                          }};
    f.audit_trees = {{rule, {1, 2, 7}}};

    for (auto p : {"all", "leaves", "hub"}) {
        f.known_answers[{"star-comb", p}] = "star";
        f.known_answers[{"theorem1", p}] = "rayless-tree";
        f.known_answers[{"theorem3", p}] = "star-decomposition";
        f.known_answers[{"theorem4", p}] = "dominated-subgraph";
    }
    return f;
}

inline FamilySpec make_binary() {
    FamilySpec f;
    f.name = "binary-tree";
    f.summary = "The rooted infinite binary tree in level order";
    f.oracle = std::make_shared<binary_oracle>();
    f.finitely_separable = true;
    f.default_budget = Budget{8, 12, 200, 16384, 200000};
    f.decomposition = binary_factory();

    Preset all{"all", {"all", [](VertexId) { return true; }, true, {0, 1}},
               interval_cover([](std::size_t d) { return (VertexId)((1ull << std::min<std::size_t>(d, 50)) - 1); }, 50),
               true};
    Preset leftmost{"leftmost-ray",
                    {"leftmost-ray", [](VertexId v) { return ((v + 1) & v) == 0; }, true, {0}},
                    singleton_cover([](std::size_t i) {
                        return std::optional<VertexId>((VertexId)((1ull << std::min<std::size_t>(i, 62)) - 1));
                    }),
                    true};
    Preset root{"root", {"root", [](VertexId v) { return v == 0; }, false, {}},
                singleton_cover([](std::size_t i) -> std::optional<VertexId> {
                    if (i == 0) return 0;
                    return std::nullopt;
                }),
                true};
    f.presets = {all, leftmost, root};

    for (auto p : {"all", "leftmost-ray"}) {
        f.known_answers[{"star-comb", p}] = "comb";
        f.known_answers[{"theorem1", p}] = "comb";
        f.known_answers[{"theorem3", p}] = "comb";
        f.known_answers[{"theorem4", p}] = "comb";
    }
    f.known_answers[{"star-comb", "root"}] = "star";
    f.known_answers[{"theorem1", "root"}] = "rayless-tree";
    f.known_answers[{"theorem3", "root"}] = "star-decomposition";
    f.known_answers[{"theorem4", "root"}] = "dominated-subgraph";
    return f;
}

inline FamilySpec make_tops() {
    FamilySpec f;
    f.name = "binary-tree-with-tops";
    f.summary = "Binary tree plus one top per eventually-left branch, adjacent "
                "to that whole branch";
    f.oracle = std::make_shared<tops_oracle>();
    f.finitely_separable = false;
    f.default_budget = Budget{8, 10, 260, 4096, 200000};
    f.decomposition = single_part_factory("tops-single", {0, 1, 2});

    Preset all{"all", {"all", [](VertexId) { return true; }, true, {0, 1, 2}},
               std::nullopt, false};
    Preset t2{"t2-vertices", {"t2-vertices", [](VertexId v) { return v % 2 == 0; }, true, {0, 1, 2}},
              pieces_cover([](std::size_t d) -> std::optional<std::vector<VertexId>> {
                  if (d >= 40) return std::nullopt;
                  std::vector<VertexId> vs;
                  VertexId lo = (1ull << d) - 1, n = (1ull << d);
                  for (VertexId i = 0; i < n; ++i) vs.push_back(2 * (lo + i));
                  return vs;
              }),
              true};
    Preset tops{"tops", {"tops", [](VertexId v) { return v % 2 == 1; }, true, {0, 1, 2}},
                singleton_cover([](std::size_t i) { return std::optional<VertexId>(2 * (VertexId)i + 1); }),
                true};
    f.presets = {all, t2, tops};

    f.known_answers[{"star-comb", "all"}] = "comb";
    f.known_answers[{"theorem1", "all"}] = "precondition";
    f.known_answers[{"theorem3", "all"}] = "star-decomposition";
    f.known_answers[{"theorem4", "all"}] = "dominated-subgraph";
    f.known_answers[{"star-comb", "t2-vertices"}] = "comb";
    f.known_answers[{"theorem1", "t2-vertices"}] = "rayless-tree";
    f.known_answers[{"theorem3", "t2-vertices"}] = "star-decomposition";
    f.known_answers[{"theorem4", "t2-vertices"}] = "dominated-subgraph";
    f.known_answers[{"star-comb", "tops"}] = "comb";
    f.known_answers[{"theorem1", "tops"}] = "rayless-tree";
    f.known_answers[{"theorem3", "tops"}] = "star-decomposition";
    f.known_answers[{"theorem4", "tops"}] = "dominated-subgraph";
    return f;
}

inline FamilySpec make_ternary() {
    FamilySpec f;
    f.name = "ternary-tree";
    f.summary = "The rooted infinite ternary tree in level order";
    f.oracle = std::make_shared<ternary_oracle>();
    f.finitely_separable = true;
    f.default_budget = Budget{8, 12, 200, 16384, 200000};
    f.decomposition = ternary_factory();

    Preset all{"all", {"all", [](VertexId) { return true; }, true, {0, 1}},
               interval_cover(
                   [](std::size_t d) -> VertexId {
                       if (d == 0) return 0;
                       return 3 * (1ull << std::min<std::size_t>(d - 1, 50)) - 2;
                   },
                   50),
               true};
    Preset leftmost{"leftmost-ray",
                    {"leftmost-ray",
                     [](VertexId v) {
                         if (v == 0) return true;
                         VertexId x = 1;
                         while (x < v) x = 2 * x + 2;
                         return x == v;
                     },
                     true,
                     {0}},
                    singleton_cover([](std::size_t i) -> std::optional<VertexId> {
                        if (i == 0) return 0;
                        return (VertexId)(3 * (1ull << std::min<std::size_t>(i - 1, 58)) - 2);
                    }),
                    true};
    Preset root{"root", {"root", [](VertexId v) { return v == 0; }, false, {}},
                singleton_cover([](std::size_t i) -> std::optional<VertexId> {
                    if (i == 0) return 0;
                    return std::nullopt;
                }),
                true};
    f.presets = {all, leftmost, root};

    for (auto p : {"all", "leftmost-ray"}) {
        f.known_answers[{"star-comb", p}] = "comb";
        f.known_answers[{"theorem1", p}] = "comb";
        f.known_answers[{"theorem3", p}] = "comb";
        f.known_answers[{"theorem4", p}] = "comb";
    }
    f.known_answers[{"star-comb", "root"}] = "star";
    f.known_answers[{"theorem1", "root"}] = "rayless-tree";
    f.known_answers[{"theorem3", "root"}] = "star-decomposition";
    f.known_answers[{"theorem4", "root"}] = "dominated-subgraph";
    return f;
}

inline FamilySpec make_comb() {
    FamilySpec f;
    f.name = "comb";
    f.summary = "A spine ray with one pendant tooth per spine vertex";
    f.oracle = std::make_shared<comb_oracle>();
    f.finitely_separable = true;
    f.default_budget = Budget{8, 16, 200, 4096, 200000};
    f.decomposition = window_factory("comb-windows", 2, 3, 0);

    Preset all{"all", {"all", [](VertexId) { return true; }, true, {0}},
               pieces_cover([](std::size_t i) {
                   return std::optional<std::vector<VertexId>>(
                       std::vector<VertexId>{2 * (VertexId)i, 2 * (VertexId)i + 1});
               }),
               true};
    Preset teeth{"teeth", {"teeth", [](VertexId v) { return v % 2 == 1; }, true, {0}},
                 singleton_cover([](std::size_t i) { return std::optional<VertexId>(2 * (VertexId)i + 1); }),
                 true};
    Preset spine{"spine", {"spine", [](VertexId v) { return v % 2 == 0; }, true, {0}},
                 singleton_cover([](std::size_t i) { return std::optional<VertexId>(2 * (VertexId)i); }),
                 true};
    Preset base{"base", {"base", [](VertexId v) { return v <= 1; }, false, {}},
                pieces_cover([](std::size_t i) -> std::optional<std::vector<VertexId>> {
                    if (i == 0) return std::vector<VertexId>{0, 1};
                    return std::nullopt;
                }),
                true};
    f.presets = {all, teeth, spine, base};

    SpanningTreeRule self{"self-tree", 0, [](VertexId v) -> std::optional<VertexId> {
                              if (v == 0) return std::nullopt;
                              if (v % 2 == 1) return v - 1;
                              return v - 2;
                          }};
    f.audit_trees = {{self, {3, 4}}};

    for (auto p : {"all", "teeth", "spine"}) {
        f.known_answers[{"star-comb", p}] = "comb";
        f.known_answers[{"theorem1", p}] = "comb";
        f.known_answers[{"theorem3", p}] = "comb";
        f.known_answers[{"theorem4", p}] = "comb";
    }
    f.known_answers[{"star-comb", "base"}] = "star";
    f.known_answers[{"theorem1", "base"}] = "rayless-tree";
    f.known_answers[{"theorem3", "base"}] = "star-decomposition";
    f.known_answers[{"theorem4", "base"}] = "dominated-subgraph";
    return f;
}

inline FamilySpec make_seymour_thomas() {
    FamilySpec f;
    f.name = "seymour-thomas";
    f.summary = "Documentation-only uncountable example";
    f.doc_only = true;
    f.doc_note = "An uncountable graph showing the normally-spanned hypothesis of the "
                 "rayless-tree duality cannot be dropped; it admits no countable lazy "
                 "enumeration, so no oracle is shipped.";
    return f;
}

inline FamilySpec make_t_aleph1() {
    FamilySpec f;
    f.name = "t-aleph1";
    f.summary = "Documentation-only uncountable tree";
    f.doc_only = true;
    f.doc_note = "The uncountably-branching tree used as a boundary example for "
                 "star-decomposition duality; uncountable, so no oracle is shipped.";
    return f;
}

}  // namespace families

inline const std::vector<FamilySpec>& list_families() {
    static const std::vector<FamilySpec> catalog = [] {
        std::vector<FamilySpec> c;
        c.push_back(families::make_ray());
        c.push_back(families::make_ladder());
        c.push_back(families::make_grid());
        c.push_back(families::make_fan());
        c.push_back(families::make_complete());
        c.push_back(families::make_star());
        c.push_back(families::make_binary());
        c.push_back(families::make_tops());
        c.push_back(families::make_ternary());
        c.push_back(families::make_comb());
        c.push_back(families::make_seymour_thomas());
        c.push_back(families::make_t_aleph1());
        return c;
    }();
    return catalog;
}

inline const FamilySpec& family_spec(const std::string& name) {
    for (const auto& f : list_families())
        if (f.name == name) return f;
    throw PreconditionError("unknown family: " + name);
}

//! The runnable oracle for a family; documentation-only entries have none.
inline std::shared_ptr<GraphOracle> family_oracle(const std::string& name) {
    const FamilySpec& f = family_spec(name);
    if (f.doc_only || !f.oracle)
        throw PreconditionError("documentation-only family: " + name);
    return f.oracle;
}

}  // namespace combforge
