#pragma once

#include <memory>
#include <mutex>

#include "combforge/certificates.hpp"
#include "combforge/core.hpp"
#include "combforge/tree.hpp"

namespace combforge {

/**
 * Partition of the host vertex set into branch sets: finitely many explicit
 * finite merged branches, every other vertex a singleton. A branch is named
 * by its representative, the least member. Partitions that would need an
 * infinite branch can only be declared, not enumerated; declaring one blocks
 * end-registry transfer.
 */
class BranchPartition {
  public:
    BranchPartition() : name_("identity") {}

    BranchPartition(std::string name, std::vector<std::vector<VertexId>> merged)
        : name_(std::move(name)) {
        for (auto& b : merged) {
            std::sort(b.begin(), b.end());
            b.erase(std::unique(b.begin(), b.end()), b.end());
            if (b.size() < 2) continue;  // singleton branches are implicit
            merged_.push_back(b);
        }
        std::sort(merged_.begin(), merged_.end());
        for (auto& b : merged_) {
            for (std::size_t i = 0; i < b.size(); ++i) {
                if (!rep_.emplace(b[i], b[0]).second)
                    throw PreconditionError("branch sets overlap at v" + std::to_string(b[i]));
                if (i > 0) excluded_.push_back(b[i]);
                max_merged_ = std::max(max_merged_, b[i]);
            }
        }
        std::sort(excluded_.begin(), excluded_.end());
    }

    const std::string& name() const { return name_; }
    bool is_identity() const { return merged_.empty() && infinite_branch_notes_.empty(); }
    const std::vector<std::vector<VertexId>>& merged() const { return merged_; }
    VertexId max_merged_index() const { return max_merged_; }

    //! Declare (without enumerating) a branch set that would be infinite.
    void declare_infinite_branch(std::string note) {
        infinite_branch_notes_.push_back(std::move(note));
    }
    bool all_finite() const { return infinite_branch_notes_.empty(); }

    //! Least member of the branch containing v.
    VertexId representative(VertexId v) const {
        auto it = rep_.find(v);
        return it == rep_.end() ? v : it->second;
    }

    std::vector<VertexId> branch_members(VertexId rep) const {
        for (auto& b : merged_)
            if (b.front() == rep) return b;
        return {rep};
    }

    //! Contracted index of the branch containing host vertex v.
    VertexId rank_of(VertexId v) const {
        VertexId r = representative(v);
        auto cut = std::lower_bound(excluded_.begin(), excluded_.end(), r);
        return r - (VertexId)(cut - excluded_.begin());
    }

    //! Host representative of contracted index n (n-th non-excluded vertex).
    VertexId rep_of_rank(VertexId n) const {
        VertexId r = n;
        for (VertexId e : excluded_) {
            if (e <= r)
                ++r;
            else
                break;
        }
        return r;
    }

  private:
    std::string name_;
    std::vector<std::vector<VertexId>> merged_;
    std::unordered_map<VertexId, VertexId> rep_;
    std::vector<VertexId> excluded_;  // non-representative merged members, sorted
    VertexId max_merged_ = 0;
    std::vector<std::string> infinite_branch_notes_;
};

//! Breadth-first spanning tree of a finite branch set inside the host.
inline RootedTree branch_spanning_tree(const GraphOracle& g,
                                       const std::vector<VertexId>& members) {
    if (members.empty()) throw PreconditionError("empty branch set");
    RootedTree t(g, members.front());
    std::vector<VertexId> frontier{members.front()};
    while (!frontier.empty()) {
        std::vector<VertexId> next;
        for (VertexId v : frontier)
            for (VertexId w : members)
                if (!t.contains(w) && g.adjacent(v, w)) {
                    t.attach_leaf(w, v);
                    next.push_back(w);
                }
        frontier = std::move(next);
    }
    if (t.size() != members.size())
        throw PreconditionError("branch set does not induce a connected subgraph");
    return t;
}

/**
 * The contraction minor: vertices are branch ranks (re-enumerated so that
 * index n is the n-th branch by representative), adjacency is host adjacency
 * between branch sets. Neighbor streams stay increasing: neighbors at host
 * index <= max merged index are precomputed per vertex (their branch ranks
 * can shuffle downward), the rest are singletons mapped monotonically.
 */
class ContractedOracle : public GraphOracle {
  public:
    ContractedOracle(const GraphOracle& host, BranchPartition part,
                     bool transfer_registry = true)
        : host_(&host), part_(std::move(part)) {
        for (auto& b : part_.merged()) {
            for (VertexId v : b)
                if (!host.has_vertex(v))
                    throw PreconditionError("branch member v" + std::to_string(v) +
                                            " is not a host vertex");
            branch_spanning_tree(host, b);  // throws when disconnected
        }
        if (transfer_registry) {
            if (!part_.all_finite())
                throw PreconditionError(
                    "end-registry transfer requested for a partition with an "
                    "infinite branch set");
            derive_registry();
        }
    }

    const GraphOracle& host() const { return *host_; }
    const BranchPartition& partition() const { return part_; }

    std::string name() const override { return host_->name() + "/" + part_.name(); }

    std::optional<VertexId> neighbor_at(VertexId v, std::size_t i) const override {
        std::lock_guard<std::mutex> lock(mu_);
        Stream& s = stream(v);
        while (s.known.size() <= i && pull(v, s)) {}
        if (i < s.known.size()) return s.known[i];
        return std::nullopt;
    }

    bool adjacent(VertexId u, VertexId v) const override {
        if (u == v) return false;
        auto a = part_.branch_members(part_.rep_of_rank(u));
        auto b = part_.branch_members(part_.rep_of_rank(v));
        for (VertexId x : a)
            for (VertexId y : b)
                if (host_->adjacent(x, y)) return true;
        return false;
    }

    std::string label(VertexId v) const override {
        auto members = part_.branch_members(part_.rep_of_rank(v));
        if (members.size() == 1) return host_->label(members.front());
        std::string out = "[";
        for (std::size_t i = 0; i < members.size(); ++i) {
            if (i) out += "+";
            out += host_->label(members[i]);
        }
        return out + "]";
    }

    std::optional<std::uint64_t> vertex_count() const override {
        auto n = host_->vertex_count();
        if (!n) return std::nullopt;
        std::uint64_t dropped = 0;
        for (auto& b : part_.merged()) dropped += b.size() - 1;
        return *n - dropped;
    }

    const EndRegistry& ends() const override { return registry_; }

    //! Spanning tree of the branch behind contracted vertex v (rayless: finite).
    RootedTree branch_tree(VertexId v) const {
        return branch_spanning_tree(*host_, part_.branch_members(part_.rep_of_rank(v)));
    }

  private:
    struct Stream {
        bool primed = false;
        std::vector<VertexId> known;                 // contracted ranks, increasing
        std::vector<VertexId> members;               // host branch members
        std::vector<std::size_t> tail_pos;           // per-member host stream position
        std::vector<std::optional<VertexId>> ahead;  // per-member next host value > M
    };

    Stream& stream(VertexId v) const {
        Stream& s = streams_[v];
        if (s.primed) return s;
        s.primed = true;
        const VertexId m = part_.max_merged_index();
        s.members = part_.branch_members(part_.rep_of_rank(v));
        std::vector<VertexId> low;
        for (VertexId b : s.members) {
            auto below = host_->neighbors_below(b, m + 1);
            s.tail_pos.push_back(below.size());
            for (VertexId u : below) {
                VertexId r = part_.rank_of(u);
                if (r != v) low.push_back(r);
            }
        }
        std::sort(low.begin(), low.end());
        low.erase(std::unique(low.begin(), low.end()), low.end());
        s.known = std::move(low);
        for (std::size_t i = 0; i < s.members.size(); ++i)
            s.ahead.push_back(host_->neighbor_at(s.members[i], s.tail_pos[i]));
        return s;
    }

    // pull the next contracted neighbor from the members' tail streams
    bool pull(VertexId v, Stream& s) const {
        std::optional<VertexId> least;
        for (auto& a : s.ahead)
            if (a && (!least || *a < *least)) least = *a;
        if (!least) return false;
        for (std::size_t i = 0; i < s.members.size(); ++i)
            if (s.ahead[i] && *s.ahead[i] == *least)
                s.ahead[i] = host_->neighbor_at(s.members[i], ++s.tail_pos[i]);
        // host values beyond the merged zone are their own representatives
        VertexId r = part_.rank_of(*least);
        if (r != v && (s.known.empty() || s.known.back() != r)) {
            s.known.push_back(r);
            return true;
        }
        return pull(v, s);
    }

    void derive_registry() {
        const EndRegistry& h = host_->ends();
        registry_.exhaustive = h.exhaustive;
        registry_.all_ends_dominated = h.all_ends_dominated;
        for (const EndDescriptor& e : h.ends) {
            EndDescriptor d;
            d.id = e.id;
            d.dominated = e.dominated;
            d.note = e.note.empty() ? "contracted" : e.note + " (contracted)";

            // loop-erased image of the ray while it can meet merged branches
            const VertexId m = part_.max_merged_index();
            auto prefix = std::make_shared<std::vector<VertexId>>();
            std::size_t j = 0;
            for (; e.ray(j) <= m; ++j) {
                VertexId r = part_.rank_of(e.ray(j));
                auto seen = std::find(prefix->begin(), prefix->end(), r);
                if (seen != prefix->end())
                    prefix->erase(seen + 1, prefix->end());
                else
                    prefix->push_back(r);
            }
            auto part = part_;
            auto host_ray = e.ray;
            std::size_t tail_start = j;
            d.ray = [prefix, part, host_ray, tail_start](std::size_t i) {
                if (i < prefix->size()) return (*prefix)[i];
                return part.rank_of(host_ray(tail_start + (i - prefix->size())));
            };

            struct DomState {
                std::vector<VertexId> out;
                std::unordered_set<VertexId> seen;
                std::size_t host_pos = 0;
                bool done = false;
            };
            auto st = std::make_shared<DomState>();
            auto host_dom = e.dominators;
            d.dominators = [st, part, host_dom](std::size_t i) -> std::optional<VertexId> {
                while (st->out.size() <= i && !st->done) {
                    auto next = host_dom(st->host_pos++);
                    if (!next) {
                        st->done = true;
                        break;
                    }
                    VertexId r = part.rank_of(*next);
                    if (st->seen.insert(r).second) st->out.push_back(r);
                }
                if (i < st->out.size()) return st->out[i];
                return std::nullopt;
            };
            registry_.ends.push_back(std::move(d));
        }
    }

    const GraphOracle* host_;
    BranchPartition part_;
    EndRegistry registry_;
    mutable std::mutex mu_;
    mutable std::unordered_map<VertexId, Stream> streams_;
};

inline std::shared_ptr<ContractedOracle> contract(const GraphOracle& g, BranchPartition p,
                                                  bool transfer_registry = true) {
    return std::make_shared<ContractedOracle>(g, std::move(p), transfer_registry);
}

//! A finite subgraph presented explicitly, the shape pass_on consumes.
struct SubgraphSnapshot {
    std::vector<VertexId> vertices;
    std::vector<std::pair<VertexId, VertexId>> edges;

    static SubgraphSnapshot of_tree(const RootedTree& t) {
        SubgraphSnapshot s;
        s.vertices = t.sorted_vertices();
        for (VertexId v : s.vertices)
            if (auto p = t.parent(v))
                s.edges.emplace_back(std::min(v, *p), std::max(v, *p));
        std::sort(s.edges.begin(), s.edges.end());
        return s;
    }
};

//! Image of a subgraph in the contraction, plus the meets-once verdict.
struct PassedOnSubgraph {
    std::vector<VertexId> vertices;
    std::vector<std::pair<VertexId, VertexId>> edges;
    bool properly = true;  // every branch in the image meets the input exactly once
};

inline PassedOnSubgraph pass_on(const SubgraphSnapshot& sub, const BranchPartition& part) {
    PassedOnSubgraph out;
    std::map<VertexId, int> hits;
    for (VertexId v : sub.vertices) ++hits[part.rank_of(v)];
    for (auto& [v, n] : hits) {
        out.vertices.push_back(v);
        if (n != 1) out.properly = false;
    }
    std::set<std::pair<VertexId, VertexId>> es;
    for (auto& [a, b] : sub.edges) {
        VertexId u = part.rank_of(a), w = part.rank_of(b);
        if (u == w) continue;
        es.emplace(std::min(u, w), std::max(u, w));
    }
    out.edges.assign(es.begin(), es.end());
    return out;
}

/**
 * Rebuild a properly passed-on tree as a rooted tree in the contraction
 * (the image is isomorphic to the input, so parent links carry over).
 * Returns nothing when some branch meets the tree more than once.
 */
inline std::optional<RootedTree> passed_on_tree(const RootedTree& t,
                                                const ContractedOracle& h) {
    const BranchPartition& part = h.partition();
    std::map<VertexId, int> hits;
    for (VertexId v : t.order()) ++hits[part.rank_of(v)];
    for (auto& [v, n] : hits)
        if (n != 1) return std::nullopt;
    RootedTree out(h, part.rank_of(t.root()));
    for (VertexId v : t.order()) {
        auto p = t.parent(v);
        if (!p) continue;
        out.attach_leaf(part.rank_of(v), part.rank_of(*p));
    }
    return out;
}

/**
 * Transfer a fan through the contraction: map every path, loop-erase inside
 * the image, and keep the paths that stay disjoint outside the dominator.
 * The waste (paths dropped) is bounded by the total size of merged branches,
 * which is how the finite-branch case analysis is certified here.
 */
struct FanTransfer {
    FanCertificate fan;
    int waste = 0;
};

inline FanTransfer transfer_fan(const FanCertificate& f, const ContractedOracle& h) {
    const BranchPartition& part = h.partition();
    FanTransfer out;
    out.fan.dominator = part.rank_of(f.dominator);
    out.fan.end_id = f.end_id;
    std::unordered_set<VertexId> used;  // vertices of kept paths, except dominator
    for (const auto& p : f.paths) {
        std::vector<VertexId> img;
        for (VertexId v : p) {
            VertexId r = part.rank_of(v);
            auto seen = std::find(img.begin(), img.end(), r);
            if (seen != img.end())
                img.erase(seen + 1, img.end());
            else
                img.push_back(r);
        }
        bool keep = img.size() >= 2 && img.front() == out.fan.dominator;
        for (std::size_t i = 1; keep && i < img.size(); ++i)
            if (used.count(img[i]) || img[i] == out.fan.dominator) keep = false;
        if (!keep) {
            ++out.waste;
            continue;
        }
        for (std::size_t i = 1; i < img.size(); ++i) used.insert(img[i]);
        out.fan.paths.push_back(std::move(img));
    }
    return out;
}

}  // namespace combforge
