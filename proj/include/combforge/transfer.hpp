#pragma once

#include "combforge/contraction.hpp"
#include "combforge/rayless.hpp"

namespace combforge {

namespace detail {

//! Union of the branch sets of contracted indices [0, scale).
inline std::set<VertexId> branch_prefix_union(const BranchPartition& part,
                                              std::size_t scale) {
    std::set<VertexId> out;
    for (std::size_t r = 0; r < scale; ++r)
        for (VertexId v : part.branch_members(part.rep_of_rank(r))) out.insert(v);
    return out;
}

inline std::vector<VertexId> members_of_rank(const BranchPartition& part, VertexId rank) {
    return part.branch_members(part.rep_of_rank(rank));
}

}  // namespace detail

/**
 * Direction transfer under contraction with finite branch sets: for each
 * registry end and each deleted contracted prefix X = [0, scale), the tail of
 * the mapped ray picks one component of H - X, and that component corresponds
 * to the component picked beyond the branch union of X in the host. Distinct
 * ends must part ways at some tested scale.
 */
struct DirectionTransferReport {
    struct Row {
        int end_id = -1;
        std::size_t scale = 0;
        bool well_defined = false;  // tail samples land in one component of H - X
        bool matches_host = false;  // no contradiction with the host component
        bool clipped = false;       // a budget wall softened a containment check
    };
    struct Separation {
        int end_a = -1;
        int end_b = -1;
        std::optional<std::size_t> scale;  // least tested scale telling them apart
    };
    std::vector<Row> rows;
    std::vector<Separation> separations;
    bool identity = false;
    bool ok = true;
};

inline DirectionTransferReport direction_transfer_check(const GraphOracle& g,
                                                        const BranchPartition& part,
                                                        const std::vector<std::size_t>& scales,
                                                        const Budget& budget) {
    auto h = contract(g, part, true);
    const BranchPartition& p = h->partition();
    DirectionTransferReport rep;
    rep.identity = p.is_identity();
    const std::size_t cap = std::min<std::size_t>(budget.cap, 20000);
    const int d = budget.depth;

    // component of H - [0, scale) holding the mapped tail, per end and scale
    std::map<std::pair<int, std::size_t>, std::vector<VertexId>> comp_cache;
    std::map<std::pair<int, std::size_t>, VertexId> tail_cache;

    for (const EndDescriptor& he : h->ends().ends) {
        const EndDescriptor* ge = g.ends().find(he.id);
        if (!ge) continue;
        for (std::size_t s : scales) {
            DirectionTransferReport::Row row;
            row.end_id = he.id;
            row.scale = s;

            std::vector<VertexId> xh;
            for (VertexId r = 0; r < s; ++r) xh.push_back(r);

            // tail start: first ray index whose next stretch stays clear of X
            std::size_t j0 = 0;
            const std::size_t probe = (std::size_t)d + 4;
            for (std::size_t j = 0; j < 4 * s + probe + 4; ++j) {
                bool clear = true;
                for (std::size_t i = 0; i <= probe; ++i)
                    if (he.ray(j + i) < s) { clear = false; break; }
                if (clear) { j0 = j; break; }
            }
            VertexId t0 = he.ray(j0);
            VertexId t1 = he.ray(j0 + (std::size_t)d / 2);
            VertexId t2 = he.ray(j0 + (std::size_t)d);

            auto comp_h = component_after_deletion(*h, xh, t0, d + 1, cap, false);
            row.well_defined = comp_h.contains(t1) && comp_h.contains(t2);
            if (!row.well_defined && !comp_h.complete) row.clipped = true;

            // host side: component beyond the branch union of X
            std::set<VertexId> xg = detail::branch_prefix_union(p, s);
            std::vector<VertexId> xgv(xg.begin(), xg.end());
            VertexId m = xgv.empty() ? 0 : xgv.back();
            std::size_t gj = 0;
            while (ge->ray(gj) <= m && gj < 100000) ++gj;
            VertexId tg = ge->ray(gj);
            auto comp_g = component_after_deletion(g, xgv, tg, 3 * d + 4, cap, false);

            row.matches_host = true;
            VertexId tg_rank = p.rank_of(tg);
            if (!comp_h.contains(tg_rank)) {
                if (comp_h.complete)
                    row.matches_host = false;
                else
                    row.clipped = true;
            }
            std::size_t sampled = 0;
            for (VertexId hv : comp_h.vertices) {
                if (sampled++ >= 32) break;
                bool found = false;
                for (VertexId z : detail::members_of_rank(p, hv))
                    if (comp_g.contains(z)) { found = true; break; }
                if (!found) {
                    if (comp_g.complete)
                        row.matches_host = false;
                    else
                        row.clipped = true;
                }
            }

            comp_cache[{he.id, s}] = std::move(comp_h.vertices);  // sorted
            tail_cache[{he.id, s}] = t0;
            if (!row.well_defined || !row.matches_host) rep.ok = false;
            rep.rows.push_back(std::move(row));
        }
    }

    const auto& ends = h->ends().ends;
    for (std::size_t i = 0; i < ends.size(); ++i)
        for (std::size_t j = i + 1; j < ends.size(); ++j) {
            DirectionTransferReport::Separation sep;
            sep.end_a = ends[i].id;
            sep.end_b = ends[j].id;
            for (std::size_t s : scales) {
                auto a = comp_cache.find({ends[i].id, s});
                auto b = comp_cache.find({ends[j].id, s});
                if (a == comp_cache.end() || b == comp_cache.end()) continue;
                auto has = [](const std::vector<VertexId>& vs, VertexId v) {
                    return std::binary_search(vs.begin(), vs.end(), v);
                };
                if (!has(a->second, tail_cache[{ends[i].id, s}]) ||
                    !has(b->second, tail_cache[{ends[j].id, s}]))
                    continue;
                bool disjoint = true;
                for (VertexId v : a->second)
                    if (has(b->second, v)) { disjoint = false; break; }
                if (disjoint) { sep.scale = s; break; }
            }
            if (!sep.scale) rep.ok = false;
            rep.separations.push_back(std::move(sep));
        }
    return rep;
}

/**
 * Closure and domination transfer: an end lies in the closure of U exactly
 * when its image lies in the closure of [U], and is dominated exactly when
 * its image is. Dominated ends carry a fan both sides plus the certified
 * transfer of the host fan; undominated ends carry, per low contracted
 * candidate, a union of per-member fan separators exhibited as one finite
 * set whose deletion strands the candidate away from the tail in both graphs.
 */
struct ClosureDominationTransferReport {
    struct Row {
        int end_id = -1;
        bool g_in_closure = false;
        bool h_in_closure = false;
        bool closure_agrees = false;
        bool declared_dominated = false;
        // dominated case
        bool g_fan = false;
        bool h_fan = false;
        bool transferred_fan = false;
        // undominated case
        std::size_t candidates = 0;
        std::size_t separated = 0;
        std::size_t witness_union_size = 0;
        bool domination_agrees = false;
        bool clipped = false;
    };
    std::vector<Row> rows;
    bool ok = true;
};

inline ClosureDominationTransferReport closure_domination_transfer_check(
    const GraphOracle& g, const BranchPartition& part, const USet& u,
    const std::vector<VertexId>& scales, const Budget& budget) {
    auto h = contract(g, part, true);
    const BranchPartition& p = h->partition();
    ClosureDominationTransferReport rep;
    const std::size_t cap = std::min<std::size_t>(budget.cap, 20000);
    const int d = budget.depth;

    auto in_u_h = [&](VertexId rank) {
        for (VertexId z : detail::members_of_rank(p, rank))
            if (u.member(z)) return true;
        return false;
    };

    for (const EndDescriptor& he : h->ends().ends) {
        const EndDescriptor* ge = g.ends().find(he.id);
        if (!ge) continue;
        ClosureDominationTransferReport::Row row;
        row.end_id = he.id;
        row.declared_dominated = ge->dominated;

        auto ev_g = meets_closure_evidence(g, *ge, u.member, scales, d, cap);
        auto ev_h = meets_closure_evidence(*h, he, in_u_h, scales, d, cap);
        row.g_in_closure = ev_g.in_closure;
        row.h_in_closure = ev_h.in_closure;
        row.closure_agrees = (ev_g.in_closure == ev_h.in_closure);

        if (ge->dominated) {
            auto dg = ge->dominators(0);
            auto dh = he.dominators(0);
            if (dg) {
                auto idx = direct_fan_indices(g, *dg, *ge, budget.k);
                row.g_fan = idx.has_value();
                if (idx) {
                    FanCertificate f;
                    f.dominator = *dg;
                    f.end_id = ge->id;
                    for (std::size_t j : *idx) f.paths.push_back({*dg, ge->ray(j)});
                    auto tr = transfer_fan(f, *h);
                    row.transferred_fan =
                        (int)tr.fan.paths.size() >= budget.k - tr.waste &&
                        verify_fan(*h, tr.fan).accepted();
                }
            }
            if (dh) row.h_fan = direct_fan_indices(*h, *dh, he, budget.k).has_value();
            row.domination_agrees = row.g_fan && row.h_fan && row.transferred_fan;
        } else {
            // contrapositive at finite scale: per candidate [v], one separator
            // per member, their union strands [v] from the tail in both graphs
            const std::size_t trunc_n = std::min<std::size_t>(budget.horizon, 512);
            Truncation tg = truncate_first_n(g, trunc_n);
            std::size_t n_candidates = std::min<std::size_t>(4, h->vertex_count().value_or(4));
            for (VertexId c = 0; c < n_candidates; ++c) {
                row.candidates++;
                std::set<VertexId> x;
                bool all_bounded = true;
                for (VertexId z : detail::members_of_rank(p, c)) {
                    auto fs = fan_separator_at_truncation(g, tg, z, *ge, budget.k);
                    if (!fs.bounded) { all_bounded = false; break; }
                    for (VertexId w : fs.cut) x.insert(w);
                }
                if (!all_bounded) continue;
                // candidate swallowed by its own separator union: vacuously strands
                std::set<VertexId> xh;
                bool swallowed = false;
                for (VertexId w : x) {
                    VertexId r = p.rank_of(w);
                    xh.insert(r);
                    if (r == c) swallowed = true;
                }
                if (swallowed) { row.separated++; continue; }

                std::vector<VertexId> xv(x.begin(), x.end());
                VertexId m = xv.empty() ? 0 : xv.back();
                std::size_t gj = 0;
                while (ge->ray(gj) <= m && gj < 100000) ++gj;
                auto comp_g = component_after_deletion(g, xv, ge->ray(gj), d, cap, false);
                bool g_strands = true;
                for (VertexId z : detail::members_of_rank(p, c))
                    if (comp_g.contains(z)) g_strands = false;

                std::size_t hj = 0;
                const std::size_t probe = 4;
                for (std::size_t j = 0; j < 100000; ++j) {
                    bool clear = true;
                    for (std::size_t i = 0; i <= probe; ++i)
                        if (xh.count(he.ray(j + i)) || he.ray(j + i) == c) {
                            clear = false;
                            break;
                        }
                    if (clear) { hj = j; break; }
                }
                std::vector<VertexId> xhv(xh.begin(), xh.end());
                auto comp_h = component_after_deletion(*h, xhv, he.ray(hj), d, cap, false);
                bool h_strands = !comp_h.contains(c);
                if (!comp_g.complete || !comp_h.complete) row.clipped = true;
                if (g_strands && h_strands) row.separated++;
                row.witness_union_size = std::max(row.witness_union_size, x.size());
            }
            row.domination_agrees = (row.separated == row.candidates);
        }
        if (!row.closure_agrees || !row.domination_agrees) rep.ok = false;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

/**
 * Normal spanning transfer: the image of a dispersed cover stays piecewise
 * dispersed, witnessed by star outcomes persisting on both sides for each
 * tested piece.
 */
struct CoverTransferReport {
    DispersedCover mapped;
    struct Row {
        std::size_t piece = 0;
        std::size_t size = 0;
        std::size_t mapped_size = 0;
        bool g_star = false;
        bool h_star = false;
        bool star_persists = false;
        std::string note;
    };
    std::vector<Row> rows;
    bool ok = true;
};

inline CoverTransferReport normally_spanned_transfer_check(const GraphOracle& g,
                                                           const BranchPartition& part,
                                                           const DispersedCover& cover,
                                                           const Budget& budget,
                                                           std::size_t pieces = 3) {
    auto h = contract(g, part, true);
    CoverTransferReport rep;
    rep.mapped = map_cover(cover, h->partition());
    for (std::size_t i = 0; i < pieces; ++i) {
        auto pg = cover.piece(i);
        if (!pg) break;
        CoverTransferReport::Row row;
        row.piece = i;
        if (!pg->finite) {
            row.note = "piece not materializable";
            rep.rows.push_back(std::move(row));
            continue;
        }
        auto members = pg->members();
        auto mapped_piece = rep.mapped.piece(i);
        auto mapped_members = mapped_piece->members();
        row.size = members.size();
        row.mapped_size = mapped_members.size();

        std::set<VertexId> gs(members.begin(), members.end());
        std::set<VertexId> hs(mapped_members.begin(), mapped_members.end());
        USet ug{"piece " + std::to_string(i),
                [gs](VertexId v) { return gs.count(v) > 0; },
                false,
                {}};
        USet uh{"piece " + std::to_string(i) + " image",
                [hs](VertexId v) { return hs.count(v) > 0; },
                false,
                {}};
        auto sg = star_comb(g, ug, budget);
        auto sh = star_comb(*h, uh, budget);
        row.g_star = is_star(sg);
        row.h_star = is_star(sh);
        row.star_persists = row.g_star && row.h_star;
        if (!row.star_persists) rep.ok = false;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace combforge
