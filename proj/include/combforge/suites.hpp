#pragma once

#include "combforge/families.hpp"
#include "combforge/reflecting.hpp"
#include "combforge/transfer.hpp"

#include <iomanip>
#include <sstream>

namespace combforge {

struct SuiteRow {
    std::string family;
    std::string item;
    std::string check;
    bool pass = false;
    std::string detail;
};

struct SuiteResult {
    std::string name;
    std::vector<SuiteRow> rows;

    bool pass() const {
        for (const auto& r : rows)
            if (!r.pass) return false;
        return true;
    }
};

inline std::string format_table(const SuiteResult& s) {
    std::size_t wf = 6, wi = 4, wc = 5;
    for (const auto& r : s.rows) {
        wf = std::max(wf, r.family.size());
        wi = std::max(wi, r.item.size());
        wc = std::max(wc, r.check.size());
    }
    std::ostringstream os;
    os << "suite " << s.name << "\n";
    for (const auto& r : s.rows)
        os << "  " << std::left << std::setw((int)wf) << r.family << "  "
           << std::setw((int)wi) << r.item << "  " << std::setw((int)wc) << r.check
           << "  " << (r.pass ? "PASS" : "FAIL")
           << (r.detail.empty() ? "" : "  " + r.detail) << "\n";
    os << "  => " << (s.pass() ? "PASS" : "FAIL") << " (" << s.rows.size() << " rows)\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// duality: per preset, exactly one of undominated comb / audited star
// decomposition

struct DualityOutcome {
    bool comb_hit = false;
    bool structure_hit = false;
    std::string detail;
    std::optional<CombCertificate> comb;
    std::optional<StarDecomposition> stardec;
};

inline DualityOutcome duality_probe(const FamilySpec& fam, const Preset& preset,
                                    const Budget& budget) {
    const GraphOracle& g = *fam.oracle;
    DualityOutcome out;

    HatClosure closure = hat_closure(g, preset.u, budget);
    if (closure.undominated_id) {
        const EndDescriptor* end = g.ends().find(*closure.undominated_id);
        auto c = comb_along_end(g, *end, preset.u, budget);
        if (ok(c) && verify_comb(g, value(c), preset.u.member).accepted() &&
            value(c).undominated) {
            out.comb_hit = true;
            out.comb = value(c);
            out.detail = "comb along end " + std::to_string(end->id);
        } else {
            out.detail = "undominated closure end but comb extraction failed";
        }
    }

    try {
        auto dd = fam.decomposition((int)std::min(budget.depth, 15));
        StarDecomposition sd = star_decomposition(g, preset.u, dd, budget);
        auto sound = decomposition_soundness(g, sd.star, std::min(budget.depth, 10),
                                             std::min<std::size_t>(budget.cap, 2000));
        bool tracked = true;
        for (const EndDescriptor& e : g.ends().ends)
            if (!e.dominated && !sd.leaf_of_end.count(e.id)) tracked = false;
        bool u_central = true;
        std::size_t seen = 0;
        const auto& central = sd.star.nodes[0].part;
        for (VertexId v = 0; v < budget.horizon && seen < 64; ++v) {
            if (!g.has_vertex(v)) break;
            if (!preset.u.member(v)) continue;
            ++seen;
            if (!central(v)) u_central = false;
        }
        if (sound.pass() && tracked && u_central) {
            out.structure_hit = true;
            out.stardec = std::move(sd);
            if (!out.detail.empty()) out.detail += "; ";
            out.detail += "star decomposition audited";
        } else {
            if (!out.detail.empty()) out.detail += "; ";
            out.detail += "star decomposition failed audit (" + sound.detail + ")";
        }
    } catch (const PreconditionError& e) {
        if (!out.detail.empty()) out.detail += "; ";
        out.detail += std::string("star decomposition refused: ") + e.what();
    }
    return out;
}

inline SuiteResult run_duality_suite(std::optional<Budget> override_budget = {}) {
    SuiteResult s{"duality", {}};
    for (const FamilySpec& fam : list_families()) {
        if (fam.doc_only) continue;
        for (const Preset& preset : fam.presets) {
            Budget b = override_budget ? *override_budget : fam.default_budget;
            b.k = std::min(b.k, 8);
            b.depth = std::min(b.depth, 40);
            DualityOutcome out = duality_probe(fam, preset, b);
            SuiteRow row{fam.name, preset.name, "exclusive", false, out.detail};
            row.pass = out.comb_hit != out.structure_hit;
            if (out.comb_hit && out.structure_hit) row.detail = "double hit; " + row.detail;
            if (!out.comb_hit && !out.structure_hit) row.detail = "miss; " + row.detail;
            s.rows.push_back(std::move(row));
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// contraction: the transfer lemmas on the three standard partitions

inline SuiteResult run_contraction_suite() {
    SuiteResult s{"contraction", {}};
    const std::vector<std::size_t> scales{1, 2, 4, 8};
    const std::vector<VertexId> vscales{2, 4, 8};

    struct Case {
        const char* family;
        const char* partition;
        std::vector<std::vector<VertexId>> merged;
        std::vector<const char*> u_presets;
    };
    const std::vector<Case> cases{
        {"fan", "identity", {}, {"all"}},
        {"fan", "apex-merge", {{0, 1}}, {"all", "ray-vertices"}},
        {"grid", "block-merge", {{0, 1, 2, 6}}, {"all", "east-axis"}},
        {"binary-tree", "identity", {}, {"all"}},
    };
    for (const Case& c : cases) {
        const FamilySpec& fam = family_spec(c.family);
        const GraphOracle& g = *fam.oracle;
        Budget b = fam.default_budget;
        b.k = 16;
        b.depth = std::min(b.depth, 12);
        BranchPartition part(c.partition, c.merged);

        auto dir = direction_transfer_check(g, part, scales, b);
        s.rows.push_back({fam.name, c.partition, "directions", dir.ok, ""});

        for (const char* pname : c.u_presets) {
            const Preset* p = fam.preset(pname);
            auto cd = closure_domination_transfer_check(g, part, p->u, vscales, b);
            s.rows.push_back({fam.name, std::string(c.partition) + " U=" + pname,
                              "closure+domination", cd.ok, ""});
        }
        const Preset* all = fam.preset("all");
        if (all->cover) {
            auto cov = normally_spanned_transfer_check(g, part, *all->cover, b, 3);
            s.rows.push_back({fam.name, c.partition, "cover", cov.ok, ""});
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// decomposition: soundness, display, star decompositions, dominated subgraph

//! First preset with no declared-undominated end in its closure: the side of
//! the duality where a star decomposition must exist.
inline const Preset* structure_side_preset(const FamilySpec& fam) {
    for (const Preset& p : fam.presets) {
        bool clean = true;
        for (int id : p.u.closure_end_ids) {
            const EndDescriptor* e = fam.oracle->ends().find(id);
            if (e && !e->dominated) clean = false;
        }
        if (clean) return &p;
    }
    return nullptr;
}

inline SuiteResult run_decomposition_suite() {
    SuiteResult s{"decomposition", {}};
    for (const FamilySpec& fam : list_families()) {
        if (fam.doc_only) continue;
        const GraphOracle& g = *fam.oracle;
        Budget b = fam.default_budget;
        auto dd = fam.decomposition(15);

        for (int depth : {5, 10, 15}) {
            auto r = decomposition_soundness(g, dd.dec, depth,
                                             std::min<std::size_t>(b.cap, 2000));
            s.rows.push_back({fam.name, "depth " + std::to_string(depth), "soundness",
                              r.pass(), r.pass() ? "" : r.detail});
        }
        auto disp = display_check(g, dd, b);
        s.rows.push_back({fam.name, "tau", "display", disp.pass,
                          disp.notes.empty() ? "" : disp.notes.front()});

        const Preset* p = structure_side_preset(fam);
        if (!p) continue;
        try {
            StarDecomposition sd = star_decomposition(g, p->u, dd, b);
            bool all_depths = true;
            std::string why;
            for (int depth : {5, 10, 15}) {
                auto r = decomposition_soundness(g, sd.star, depth,
                                                 std::min<std::size_t>(b.cap, 2000));
                if (!r.pass()) {
                    all_depths = false;
                    why = "depth " + std::to_string(depth) + ": " + r.detail;
                }
            }
            bool tracked = true;
            for (const EndDescriptor& e : g.ends().ends)
                if (!e.dominated && !sd.leaf_of_end.count(e.id)) tracked = false;
            s.rows.push_back({fam.name, std::string("U=") + p->name, "star-dec",
                              all_depths && tracked,
                              tracked ? why : "undominated end not in a leaf"});

            auto audit = dominated_subgraph(g, p->u, sd, b);
            s.rows.push_back({fam.name, std::string("U=") + p->name, "dominated-subgraph",
                              audit.pass, audit.pass ? "" : audit.detail});
        } catch (const PreconditionError& e) {
            s.rows.push_back(
                {fam.name, std::string("U=") + p->name, "star-dec", false, e.what()});
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// cuts: fundamental-cut samples and the finite-cut consistency report

inline SuiteResult run_cuts_suite() {
    SuiteResult s{"cuts", {}};
    for (const FamilySpec& fam : list_families()) {
        if (fam.doc_only) continue;
        const GraphOracle& g = *fam.oracle;
        Budget b = fam.default_budget;
        b.cap = 10000;
        for (const AuditTree& at : fam.audit_trees) {
            auto rep = theorem39_consistency(g, at.rule, fam.finitely_separable, b,
                                             at.sample_children);
            s.rows.push_back({fam.name, at.rule.name, "theorem39", rep.consistent,
                              rep.attribution});
        }
    }

    // ladder interior rungs: size exactly 3, stable across truncation caps
    {
        const FamilySpec& fam = family_spec("one-way-ladder");
        const GraphOracle& g = *fam.oracle;
        const AuditTree& at = fam.audit_trees.front();
        bool pass = true;
        std::string why;
        for (VertexId child : {3ull, 5ull, 7ull}) {
            Budget b30 = fam.default_budget;
            b30.cap = 30;
            Budget b60 = fam.default_budget;
            b60.cap = 60;
            auto c30 = fundamental_cut(g, at.rule, child, b30);
            auto c60 = fundamental_cut(g, at.rule, child, b60);
            if (!c30.finite_verdict || !c60.finite_verdict || c30.count != 3 ||
                c30.edges != c60.edges) {
                pass = false;
                why = "rung child " + std::to_string(child) + " count " +
                      std::to_string(c30.count) + "/" + std::to_string(c60.count);
            }
        }
        s.rows.push_back({fam.name, "interior rungs", "cut=3 stable", pass, why});
    }

    // fan: ray tree blows every budget at the apex edge, star tree stays finite
    {
        const FamilySpec& fam = family_spec("fan");
        const GraphOracle& g = *fam.oracle;
        const AuditTree* star_tree = nullptr;
        const AuditTree* ray_tree = nullptr;
        for (const AuditTree& at : fam.audit_trees) {
            if (at.rule.name.find("star") != std::string::npos) star_tree = &at;
            if (at.rule.name.find("ray") != std::string::npos) ray_tree = &at;
        }
        bool pass = star_tree && ray_tree;
        std::string why = pass ? "" : "audit trees missing";
        if (pass) {
            for (std::size_t cap : {100ull, 1000ull, 10000ull}) {
                Budget b = fam.default_budget;
                b.cap = cap;
                auto c = fundamental_cut(g, ray_tree->rule, 1, b);
                if (c.finite_verdict) {
                    pass = false;
                    why = "apex edge cut reported finite at cap " + std::to_string(cap);
                }
            }
            for (VertexId child : star_tree->sample_children) {
                Budget b = fam.default_budget;
                b.cap = 10000;
                auto c = fundamental_cut(g, star_tree->rule, child, b);
                if (!c.finite_verdict) {
                    pass = false;
                    why = "star tree cut not finite at child " + std::to_string(child);
                }
            }
        }
        s.rows.push_back({fam.name, "ray vs star tree", "cut verdicts", pass, why});
    }
    return s;
}

inline std::vector<SuiteResult> run_suites(const std::string& name) {
    if (name == "duality") return {run_duality_suite()};
    if (name == "contraction") return {run_contraction_suite()};
    if (name == "decomposition") return {run_decomposition_suite()};
    if (name == "cuts") return {run_cuts_suite()};
    if (name == "all")
        return {run_duality_suite(), run_contraction_suite(), run_decomposition_suite(),
                run_cuts_suite()};
    throw PreconditionError("unknown suite: " + name);
}

}  // namespace combforge
