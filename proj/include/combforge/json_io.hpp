#pragma once

#include "combforge/decomposition.hpp"
#include "combforge/verify.hpp"

#include "json.hpp"

namespace combforge {

// std::map-backed json keeps keys sorted, so serialized bytes are stable
using Json = nlohmann::json;

inline Json vertex_ref(const GraphOracle& g, VertexId v) {
    return Json{{"index", v}, {"label", g.label(v)}};
}

inline Json path_refs(const GraphOracle& g, const std::vector<VertexId>& p) {
    Json out = Json::array();
    for (VertexId v : p) out.push_back(vertex_ref(g, v));
    return out;
}

inline Json budget_json(const Budget& b) {
    return Json{{"k", b.k},
                {"depth", b.depth},
                {"steps", b.steps},
                {"horizon", b.horizon},
                {"cap", b.cap}};
}

inline Json star_json(const GraphOracle& g, const StarCertificate& s) {
    Json paths = Json::array();
    for (const auto& p : s.paths) paths.push_back(path_refs(g, p));
    return Json{{"center", vertex_ref(g, s.center)},
                {"paths", paths},
                {"degenerate", s.degenerate},
                {"u_exhausted", s.u_exhausted}};
}

inline Json comb_json(const GraphOracle& g, const CombCertificate& c) {
    Json teeth = Json::array();
    for (const auto& p : c.tooth_paths) teeth.push_back(path_refs(g, p));
    Json anchor{{"kind", c.anchor.kind == SpineAnchor::registry_end ? "registry-end"
                                                                    : "extension-rule"}};
    if (c.anchor.kind == SpineAnchor::registry_end)
        anchor["end_id"] = c.anchor.end_id;
    else
        anchor["rule"] = c.anchor.rule;
    return Json{{"spine", path_refs(g, c.spine)},
                {"tooth_paths", teeth},
                {"anchor", anchor},
                {"undominated", c.undominated}};
}

inline Json fan_json(const GraphOracle& g, const FanCertificate& f) {
    Json paths = Json::array();
    for (const auto& p : f.paths) paths.push_back(path_refs(g, p));
    return Json{{"dominator", vertex_ref(g, f.dominator)},
                {"end_id", f.end_id},
                {"paths", paths}};
}

//! Attach-event log plus root: enough to replay the build against the oracle.
inline Json tree_json(const GraphOracle& g, const RootedTree& t) {
    Json events = Json::array();
    for (const AttachEvent& e : t.log())
        events.push_back(Json{{"step", e.step},
                              {"attach_height", e.attach_height},
                              {"path", path_refs(g, e.path)}});
    return Json{{"root", vertex_ref(g, t.root())},
                {"size", t.size()},
                {"radius", t.radius()},
                {"events", events}};
}

inline Json truncation_json(const GraphOracle& g, const Truncation& t) {
    Json verts = Json::array();
    for (VertexId v : t.vertices) verts.push_back(vertex_ref(g, v));
    Json edges = Json::array();
    for (auto [u, v] : t.edges) edges.push_back(Json::array({u, v}));
    return Json{{"vertices", verts},
                {"edges", edges},
                {"complete", t.complete},
                {"mode", t.mode}};
}

inline Json decomposition_json(const GraphOracle& g, const TreeDecomposition& dec,
                               std::size_t sample = 12) {
    Json nodes = Json::array();
    for (const auto& n : dec.nodes) {
        Json part = Json::array();
        std::size_t m = 0;
        if (n.part_finite) {
            for (VertexId v : n.finite_part) {
                if (m++ >= sample) break;
                part.push_back(vertex_ref(g, v));
            }
        } else {
            for (VertexId v = 0; v < 100000 && m < sample; ++v) {
                if (!g.has_vertex(v)) break;
                if (n.part(v)) {
                    part.push_back(vertex_ref(g, v));
                    ++m;
                }
            }
        }
        nodes.push_back(Json{{"id", n.id},
                             {"parent", n.parent},
                             {"label", n.label},
                             {"part_finite", n.part_finite},
                             {"part_sample", part},
                             {"separator", path_refs(g, n.separator)}});
    }
    return Json{{"name", dec.name},
                {"nodes", nodes},
                {"separators_connected", dec.separators_connected},
                {"separators_pairwise_disjoint", dec.separators_pairwise_disjoint},
                {"upwards_disjoint", dec.upwards_disjoint},
                {"star_shaped", dec.star_shaped}};
}

inline Json displaying_json(const GraphOracle& g, const DisplayingDecomposition& dd,
                            std::size_t sample = 12, std::size_t tau_scales = 3) {
    Json tau = Json::object();
    for (const auto& [id, tgt] : dd.tau) {
        Json t{{"to_tree_end", tgt.to_tree_end}};
        if (tgt.to_tree_end) {
            Json ray = Json::array();
            for (std::size_t s = 1, i = 0; i < tau_scales; s *= 2, ++i)
                ray.push_back(tgt.dray(s));
            t["dray"] = ray;
        } else {
            t["node"] = tgt.node;
        }
        tau[std::to_string(id)] = t;
    }
    return Json{{"decomposition", decomposition_json(g, dd.dec, sample)},
                {"displayed", dd.displayed},
                {"tau", tau}};
}

inline Json star_decomposition_json(const GraphOracle& g, const StarDecomposition& sd,
                                    std::size_t sample = 12) {
    Json leaves = Json::object();
    for (auto [end, node] : sd.leaf_of_end) leaves[std::to_string(end)] = node;
    return Json{{"star", decomposition_json(g, sd.star, sample)},
                {"core_nodes", sd.core_nodes},
                {"leaf_of_end", leaves}};
}

inline Json cut_json(const GraphOracle& g, const CutReport& r) {
    Json edges = Json::array();
    for (auto [u, v] : r.edges) edges.push_back(Json::array({u, v}));
    return Json{{"child", vertex_ref(g, r.child)},
                {"parent", vertex_ref(g, r.parent)},
                {"edges", edges},
                {"finite", r.finite_verdict},
                {"count", r.count},
                {"detail", r.detail}};
}

inline Json subgraph_json(const GraphOracle& g, const SubgraphAudit& a,
                          std::size_t sample = 24) {
    Json rows = Json::array();
    for (const auto& r : a.rows) {
        Json row{{"end", r.end_id},
                 {"ray_inside", r.ray_inside},
                 {"fan_paths", r.fan_paths}};
        row["dominator"] =
            r.dominator_inside ? Json(vertex_ref(g, *r.dominator_inside)) : Json(nullptr);
        rows.push_back(std::move(row));
    }
    Json sam = Json::array();
    for (std::size_t i = 0; i < a.sample.size() && i < sample; ++i)
        sam.push_back(vertex_ref(g, a.sample[i]));
    return Json{{"central_sample", sam},
                {"central_is_everything", a.central_is_everything},
                {"connected", a.connected},
                {"contains_u", a.contains_u},
                {"ends", rows},
                {"pass", a.pass},
                {"detail", a.detail}};
}

inline Json envelope(const std::string& kind, const std::string& family,
                     const Budget& budget, Json payload, Json audit = Json::object()) {
    return Json{{"kind", kind},
                {"family", family},
                {"budgets", budget_json(budget)},
                {"payload", std::move(payload)},
                {"audit", std::move(audit)}};
}

// ---------------------------------------------------------------------------
// parsing, for the independent verifier

inline Budget parse_budget(const Json& j) {
    Budget b;
    b.k = j.value("k", b.k);
    b.depth = j.value("depth", b.depth);
    b.steps = j.value("steps", b.steps);
    b.horizon = j.value("horizon", b.horizon);
    b.cap = j.value("cap", b.cap);
    return b;
}

inline VertexId parse_ref(const Json& j) {
    if (j.is_object()) return j.at("index").get<VertexId>();
    return j.get<VertexId>();
}

inline std::vector<VertexId> parse_path(const Json& j) {
    std::vector<VertexId> out;
    for (const auto& e : j) out.push_back(parse_ref(e));
    return out;
}

inline StarCertificate parse_star(const Json& j) {
    StarCertificate s;
    s.center = parse_ref(j.at("center"));
    for (const auto& p : j.at("paths")) s.paths.push_back(parse_path(p));
    s.degenerate = j.value("degenerate", false);
    s.u_exhausted = j.value("u_exhausted", false);
    return s;
}

inline CombCertificate parse_comb(const Json& j) {
    CombCertificate c;
    c.spine = parse_path(j.at("spine"));
    for (const auto& p : j.at("tooth_paths")) c.tooth_paths.push_back(parse_path(p));
    const Json& a = j.at("anchor");
    if (a.at("kind") == "registry-end") {
        c.anchor.kind = SpineAnchor::registry_end;
        c.anchor.end_id = a.at("end_id").get<int>();
    } else {
        c.anchor.kind = SpineAnchor::extension_rule;
        c.anchor.rule = a.value("rule", "");
    }
    c.undominated = j.value("undominated", false);
    return c;
}

inline FanCertificate parse_fan(const Json& j) {
    FanCertificate f;
    f.dominator = parse_ref(j.at("dominator"));
    f.end_id = j.at("end_id").get<int>();
    for (const auto& p : j.at("paths")) f.paths.push_back(parse_path(p));
    return f;
}

struct TreeLog {
    VertexId root = 0;
    std::vector<AttachEvent> events;
};

inline TreeLog parse_tree_log(const Json& j) {
    TreeLog t;
    t.root = parse_ref(j.at("root"));
    for (const auto& e : j.at("events")) {
        AttachEvent ev;
        ev.step = e.at("step").get<int>();
        ev.attach_height = e.at("attach_height").get<int>();
        ev.path = parse_path(e.at("path"));
        t.events.push_back(std::move(ev));
    }
    return t;
}

//! Replay a serialized build log against the oracle; every attach re-checks
//! host edges and freshness, so acceptance means the tree is a genuine
//! subgraph snapshot.
inline VerifyReport verify_tree_log(const GraphOracle& g, const TreeLog& log) {
    try {
        RootedTree t(g, log.root);
        for (const AttachEvent& e : log.events) t.attach_path(e.path, e.step);
        return verify_tree_subgraph(g, t);
    } catch (const InvariantError& e) {
        std::string msg = e.what();
        if (msg.find("already in tree") != std::string::npos)
            return VerifyReport::fail(Violation::tree_cyclic, msg);
        return VerifyReport::fail(Violation::tree_not_subgraph, msg);
    } catch (const PreconditionError& e) {
        return VerifyReport::fail(Violation::tree_not_subgraph, e.what());
    }
}

}  // namespace combforge
