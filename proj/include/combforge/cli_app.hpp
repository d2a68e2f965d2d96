#pragma once

#include "combforge/dot_io.hpp"
#include "combforge/families.hpp"
#include "combforge/json_io.hpp"
#include "combforge/reflecting.hpp"
#include "combforge/suites.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace combforge {
namespace cli {

// exit codes: a bit-exact contract for CI consumers
constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_budget = 2;
constexpr int exit_invariant = 3;
constexpr int exit_precondition = 4;

struct RunConfig {
    std::string family;
    std::optional<std::string> preset;
    std::string op;
    std::string suite;
    std::string what;
    std::string in;
    std::string out;
    std::string format = "dot";
    bool as_json = false;
    std::optional<int> scale;
    std::optional<int> k;
    std::optional<int> depth;
    std::optional<int> steps;
    std::optional<VertexId> horizon;
    std::optional<std::size_t> cap;
};

//! Family default, then COMBFORGE_DEPTH_DEFAULT, then explicit flags.
inline Budget resolve_budget(const RunConfig& cfg, const Budget& base) {
    Budget b = base;
    if (const char* env = std::getenv("COMBFORGE_DEPTH_DEFAULT")) {
        try {
            b.depth = std::stoi(env);
        } catch (...) {
            throw PreconditionError("COMBFORGE_DEPTH_DEFAULT is not an integer");
        }
    }
    if (cfg.k) b.k = *cfg.k;
    if (cfg.depth) b.depth = *cfg.depth;
    if (cfg.steps) b.steps = *cfg.steps;
    if (cfg.horizon) b.horizon = *cfg.horizon;
    if (cfg.cap) b.cap = *cfg.cap;
    if (b.k <= 0 || b.depth <= 0 || b.steps <= 0 || b.horizon == 0 || b.cap == 0)
        throw PreconditionError("budgets must be positive");
    return b;
}

//! Decomposition factories are exponential in scale for the trees, so the
//! snapshot scale is the depth budget clamped to a desk-sized bound.
inline int decomposition_scale(const RunConfig& cfg, const Budget& b) {
    if (cfg.scale) {
        if (*cfg.scale <= 0 || *cfg.scale > 20)
            throw PreconditionError("scale must be in 1..20");
        return *cfg.scale;
    }
    return std::min(b.depth, 15);
}

inline void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw PreconditionError("cannot open output file: " + cfg.out);
    f << text;
}

inline void emit_json(const RunConfig& cfg, const Json& j) { emit(cfg, j.dump(2) + "\n"); }

inline int report_exhausted(const RunConfig& cfg, const Exhausted& e) {
    emit_json(cfg, Json{{"error", Json{{"class", "budget-exhausted"},
                                       {"stage", e.stage},
                                       {"detail", e.detail}}}});
    return exit_budget;
}

//! A freshly extracted certificate failing its own verifier is a bug, not a
//! bad input.
inline void require_accepted(const VerifyReport& r, const std::string& what) {
    if (!r.accepted())
        throw InvariantError("extracted " + what + " failed verification: " +
                             violation_name(r.violation) + ": " + r.detail);
}

// ---------------------------------------------------------------------------
// families

inline Json preset_json(const Preset& p) {
    Json j{{"name", p.name},
           {"u_infinite", p.u.infinite},
           {"closure_end_ids", p.u.closure_end_ids},
           {"has_cover", p.cover.has_value()}};
    if (p.normally_spanned)
        j["normally_spanned"] = *p.normally_spanned;
    else
        j["normally_spanned"] = nullptr;
    return j;
}

inline Json family_json(const FamilySpec& f) {
    Json j{{"name", f.name}, {"summary", f.summary}, {"doc_only", f.doc_only}};
    if (f.doc_only) {
        j["note"] = f.doc_note;
        return j;
    }
    j["finitely_separable"] = f.finitely_separable;
    const EndRegistry& reg = f.oracle->ends();
    Json ends = Json::array();
    for (const EndDescriptor& e : reg.ends)
        ends.push_back(Json{{"id", e.id}, {"dominated", e.dominated}, {"note", e.note}});
    j["ends"] = ends;
    j["ends_exhaustive"] = reg.exhaustive;
    j["all_ends_dominated"] = reg.all_ends_dominated;
    Json ps = Json::array();
    for (const Preset& p : f.presets) ps.push_back(preset_json(p));
    j["presets"] = ps;
    Json trees = Json::array();
    for (const AuditTree& t : f.audit_trees) trees.push_back(t.rule.name);
    j["audit_trees"] = trees;
    j["default_budget"] = budget_json(f.default_budget);
    Json ka = Json::object();
    for (const auto& [key, val] : f.known_answers) ka[key.first + "/" + key.second] = val;
    j["known_answers"] = ka;
    return j;
}

inline Json catalog_json() {
    Json arr = Json::array();
    for (const FamilySpec& f : list_families()) arr.push_back(family_json(f));
    return arr;
}

inline int cmd_families(const RunConfig& cfg) {
    if (cfg.as_json) {
        emit_json(cfg, catalog_json());
        return exit_ok;
    }
    std::size_t width = 0;
    for (const FamilySpec& f : list_families()) width = std::max(width, f.name.size());
    std::ostringstream os;
    for (const FamilySpec& f : list_families()) {
        os << f.name << std::string(width - f.name.size() + 2, ' ');
        if (f.doc_only) {
            os << "(documentation only) " << f.summary << "\n";
            continue;
        }
        os << f.summary << "\n" << std::string(width + 2, ' ') << "presets:";
        for (const Preset& p : f.presets) os << " " << p.name;
        os << "\n";
    }
    emit(cfg, os.str());
    return exit_ok;
}

// ---------------------------------------------------------------------------
// extract

inline const Preset& resolve_preset(const FamilySpec& fam, const std::string& name) {
    const Preset* p = fam.preset(name);
    if (!p)
        throw PreconditionError("unknown preset " + name + " for family " + fam.name);
    return *p;
}

inline int cmd_extract(const RunConfig& cfg) {
    const FamilySpec& fam = family_spec(cfg.family);
    std::shared_ptr<GraphOracle> gp = family_oracle(cfg.family);
    const GraphOracle& g = *gp;
    const Preset& preset = resolve_preset(fam, cfg.preset.value_or("all"));
    Budget budget = resolve_budget(cfg, fam.default_budget);
    Json audit{{"preset", preset.name}};

    if (cfg.op == "star-comb") {
        auto r = star_comb(g, preset.u, budget);
        if (!ok(r)) return report_exhausted(cfg, exhausted(r));
        if (value(r).index() == 0) {
            const StarCertificate& s = std::get<0>(value(r));
            require_accepted(verify_star(g, s, preset.u.member), "star");
            emit_json(cfg, envelope("star", fam.name, budget, star_json(g, s), audit));
        } else {
            const CombCertificate& c = std::get<1>(value(r));
            require_accepted(verify_comb(g, c, preset.u.member), "comb");
            emit_json(cfg, envelope("comb", fam.name, budget, comb_json(g, c), audit));
        }
        return exit_ok;
    }

    if (cfg.op == "theorem1") {
        Theorem1Result r = theorem1_driver(g, preset.u, preset.cover, budget);
        audit["route"] = r.route;
        if (r.closure.undominated_id)
            audit["undominated_closure_end"] = *r.closure.undominated_id;
        if (r.route == "comb") {
            require_accepted(verify_comb(g, *r.comb, preset.u.member), "comb");
            emit_json(cfg, envelope("comb", fam.name, budget, comb_json(g, *r.comb), audit));
            return exit_ok;
        }
        const RootedTree& t = r.route == "direct" ? r.direct_build->tree : *r.lifted;
        if (r.route == "direct") {
            audit["u_exhausted"] = r.direct_build->u_exhausted;
            audit["search_clipped"] = r.direct_build->search_clipped;
        } else {
            audit["contracted_stars"] = r.stars->partition.merged().size();
        }
        require_accepted(verify_tree_subgraph(g, t), "rayless tree");
        emit_json(cfg, envelope("rayless-tree", fam.name, budget, tree_json(g, t), audit));
        return exit_ok;
    }

    // theorem3 / theorem4: comb or star decomposition (plus the dominated
    // central subgraph for theorem4)
    HatClosure closure = hat_closure(g, preset.u, budget);
    if (closure.undominated_id) {
        const EndDescriptor* e = g.ends().find(*closure.undominated_id);
        auto c = comb_along_end(g, *e, preset.u, budget);
        if (!ok(c)) return report_exhausted(cfg, exhausted(c));
        require_accepted(verify_comb(g, value(c), preset.u.member), "comb");
        audit["route"] = "comb";
        audit["undominated_closure_end"] = e->id;
        emit_json(cfg, envelope("comb", fam.name, budget, comb_json(g, value(c)), audit));
        return exit_ok;
    }
    int scale = decomposition_scale(cfg, budget);
    DisplayingDecomposition dd = fam.decomposition(scale);
    StarDecomposition sd = star_decomposition(g, preset.u, dd, budget);
    auto sound = decomposition_soundness(g, sd.star, std::min(budget.depth, 10),
                                         std::min<std::size_t>(budget.cap, 2000));
    if (!sound.pass())
        throw InvariantError("star decomposition failed the soundness audit: " +
                             sound.detail);
    audit["scale"] = scale;
    audit["soundness_depth"] = sound.depth;
    if (cfg.op == "theorem3") {
        audit["route"] = "star-decomposition";
        emit_json(cfg, envelope("star-decomposition", fam.name, budget,
                                star_decomposition_json(g, sd), audit));
        return exit_ok;
    }
    SubgraphAudit a = dominated_subgraph(g, preset.u, sd, budget);
    if (!a.pass)
        throw InvariantError("central subgraph failed the domination audit: " + a.detail);
    audit["route"] = "dominated-subgraph";
    emit_json(cfg,
              envelope("dominated-subgraph", fam.name, budget, subgraph_json(g, a), audit));
    return exit_ok;
}

// ---------------------------------------------------------------------------
// verify

inline Json read_json_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw PreconditionError("cannot open file: " + path);
    Json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw PreconditionError(std::string("malformed JSON: ") + e.what());
    }
    return j;
}

//! Serialized decompositions carry finite samples of infinite parts, so the
//! verifier re-derives the decomposition from the catalog at the recorded
//! budgets, audits it independently, and requires byte-identical payloads.
inline VerifyReport verify_decomposition_doc(const FamilySpec& fam, const GraphOracle& g,
                                             const Preset& preset, const Json& doc) {
    Budget b = parse_budget(doc.value("budgets", Json::object()));
    int scale = doc.value("audit", Json::object()).value("scale", std::min(b.depth, 15));
    if (scale <= 0 || scale > 20)
        return VerifyReport::fail(Violation::decomposition_mismatch,
                                  "recorded scale out of range");
    std::optional<StarDecomposition> sd;
    try {
        sd = star_decomposition(g, preset.u, fam.decomposition(scale), b);
    } catch (const PreconditionError& e) {
        return VerifyReport::fail(Violation::decomposition_mismatch,
                                  std::string("no such decomposition: ") + e.what());
    }
    auto sound = decomposition_soundness(g, sd->star, std::min(b.depth, 10),
                                         std::min<std::size_t>(b.cap, 2000));
    if (!sound.pass())
        return VerifyReport::fail(Violation::decomposition_mismatch,
                                  "soundness audit: " + sound.detail);
    const std::string kind = doc.value("kind", "");
    Json expected;
    if (kind == "star-decomposition") {
        expected = star_decomposition_json(g, *sd);
    } else {
        SubgraphAudit a = dominated_subgraph(g, preset.u, *sd, b);
        if (!a.pass)
            return VerifyReport::fail(Violation::decomposition_mismatch,
                                      "domination audit: " + a.detail);
        expected = subgraph_json(g, a);
    }
    if (expected != doc.value("payload", Json::object()))
        return VerifyReport::fail(Violation::decomposition_mismatch,
                                  "payload does not match the re-derived structure");
    return VerifyReport::pass();
}

inline int cmd_verify(const RunConfig& cfg) {
    Json doc = read_json_file(cfg.in);
    if (!doc.is_object() || !doc.contains("kind") || !doc.contains("payload"))
        throw PreconditionError("not a certificate envelope (kind/payload missing)");
    std::string kind = doc.at("kind").get<std::string>();
    std::string fname = !cfg.family.empty() ? cfg.family : doc.value("family", "");
    if (fname.empty()) throw PreconditionError("no family recorded or given");
    const FamilySpec& fam = family_spec(fname);
    std::shared_ptr<GraphOracle> gp = family_oracle(fname);
    const GraphOracle& g = *gp;
    std::string pname = cfg.preset
                            ? *cfg.preset
                            : doc.value("audit", Json::object()).value("preset", "all");
    const Preset& preset = resolve_preset(fam, pname);

    VerifyReport rep;
    try {
        if (kind == "star")
            rep = verify_star(g, parse_star(doc.at("payload")), preset.u.member);
        else if (kind == "comb")
            rep = verify_comb(g, parse_comb(doc.at("payload")), preset.u.member);
        else if (kind == "fan")
            rep = verify_fan(g, parse_fan(doc.at("payload")));
        else if (kind == "rayless-tree" || kind == "tree")
            rep = verify_tree_log(g, parse_tree_log(doc.at("payload")));
        else if (kind == "star-decomposition" || kind == "dominated-subgraph")
            rep = verify_decomposition_doc(fam, g, preset, doc);
        else
            throw PreconditionError("unknown certificate kind: " + kind);
    } catch (const Json::exception& e) {
        throw PreconditionError(std::string("malformed payload: ") + e.what());
    }
    emit_json(cfg, Json{{"violation", violation_name(rep.violation)},
                        {"detail", rep.detail}});
    return rep.accepted() ? exit_ok : exit_invariant;
}

// ---------------------------------------------------------------------------
// suite

inline int cmd_suite(const RunConfig& cfg) {
    std::vector<SuiteResult> results = run_suites(cfg.suite);
    std::ostringstream os;
    bool pass = true;
    for (const SuiteResult& s : results) {
        os << format_table(s);
        pass = pass && s.pass();
    }
    emit(cfg, os.str());
    return pass ? exit_ok : exit_invariant;
}

// ---------------------------------------------------------------------------
// export

inline int cmd_export(const RunConfig& cfg) {
    if (cfg.what == "decomposition") {
        if (cfg.family.empty())
            throw PreconditionError("export decomposition needs --family");
        const FamilySpec& fam = family_spec(cfg.family);
        std::shared_ptr<GraphOracle> gp = family_oracle(cfg.family);
        Budget b = resolve_budget(cfg, fam.default_budget);
        DisplayingDecomposition dd = fam.decomposition(decomposition_scale(cfg, b));
        if (cfg.format == "json")
            emit_json(cfg, displaying_json(*gp, dd));
        else
            emit(cfg, decomposition_dot(*gp, dd.dec));
        return exit_ok;
    }

    // certificate: render an extracted envelope
    Json doc = read_json_file(cfg.in);
    if (!doc.is_object() || !doc.contains("kind") || !doc.contains("payload"))
        throw PreconditionError("not a certificate envelope (kind/payload missing)");
    if (cfg.format == "json") {
        emit_json(cfg, doc);
        return exit_ok;
    }
    std::string kind = doc.at("kind").get<std::string>();
    std::string fname = !cfg.family.empty() ? cfg.family : doc.value("family", "");
    if (fname.empty()) throw PreconditionError("no family recorded or given");
    const FamilySpec& fam = family_spec(fname);
    std::shared_ptr<GraphOracle> gp = family_oracle(fname);
    const GraphOracle& g = *gp;

    try {
        if (kind == "rayless-tree" || kind == "tree") {
            TreeLog log = parse_tree_log(doc.at("payload"));
            VerifyReport rep = verify_tree_log(g, log);
            if (!rep.accepted())
                throw InvariantError(std::string("tree log rejected: ") +
                                     violation_name(rep.violation) + ": " + rep.detail);
            RootedTree t(g, log.root);
            for (const AttachEvent& e : log.events) t.attach_path(e.path, e.step);
            emit(cfg, tree_dot(g, t));
            return exit_ok;
        }
        if (kind == "star") {
            StarCertificate s = parse_star(doc.at("payload"));
            emit(cfg, paths_dot(g, s.paths, {s.center}));
            return exit_ok;
        }
        if (kind == "comb") {
            CombCertificate c = parse_comb(doc.at("payload"));
            emit(cfg, paths_dot(g, c.tooth_paths, c.spine));
            return exit_ok;
        }
        if (kind == "fan") {
            FanCertificate f = parse_fan(doc.at("payload"));
            emit(cfg, paths_dot(g, f.paths, {f.dominator}));
            return exit_ok;
        }
        if (kind == "star-decomposition" || kind == "dominated-subgraph") {
            std::string pname =
                cfg.preset ? *cfg.preset
                           : doc.value("audit", Json::object()).value("preset", "all");
            const Preset& preset = resolve_preset(fam, pname);
            Budget b = parse_budget(doc.value("budgets", Json::object()));
            int scale =
                doc.value("audit", Json::object()).value("scale", std::min(b.depth, 15));
            StarDecomposition sd =
                star_decomposition(g, preset.u, fam.decomposition(scale), b);
            emit(cfg, decomposition_dot(g, sd.star));
            return exit_ok;
        }
    } catch (const Json::exception& e) {
        throw PreconditionError(std::string("malformed payload: ") + e.what());
    }
    throw PreconditionError("no DOT rendering for certificate kind: " + kind);
}

// ---------------------------------------------------------------------------
// entry point

inline int cli_main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"finite certificates for star-comb dualities on infinite graphs",
                 "combforge"};
    app.require_subcommand(1);

    auto add_budgets = [&](CLI::App* c) {
        c->add_option("-k,--teeth", cfg.k, "certificate size (teeth, leaves, fan paths)");
        c->add_option("-d,--depth", cfg.depth, "path and exploration depth bound");
        c->add_option("-s,--steps", cfg.steps, "builder iteration bound");
        c->add_option("--horizon", cfg.horizon, "vertex-index horizon");
        c->add_option("--cap", cfg.cap, "hard cap on discovered vertices");
    };
    auto add_out = [&](CLI::App* c) {
        c->add_option("-o,--out", cfg.out, "write to this file instead of stdout");
    };

    CLI::App* fams = app.add_subcommand("families", "list the family catalog");
    fams->add_flag("--json", cfg.as_json, "emit the machine-readable manifest");
    add_out(fams);

    CLI::App* ext = app.add_subcommand("extract", "run an extraction, write a certificate");
    ext->add_option("op", cfg.op, "operation")
        ->required()
        ->check(CLI::IsMember({"star-comb", "theorem1", "theorem3", "theorem4"}));
    ext->add_option("-f,--family", cfg.family, "family name")->required();
    ext->add_option("-u,--u", cfg.preset, "vertex-set preset (default: all)");
    ext->add_option("--scale", cfg.scale, "decomposition snapshot scale (1..20)");
    add_budgets(ext);
    add_out(ext);

    CLI::App* ver =
        app.add_subcommand("verify", "re-derive a certificate against the oracle");
    ver->add_option("file", cfg.in, "certificate JSON file")->required();
    ver->add_option("-f,--family", cfg.family, "override the envelope's family");
    ver->add_option("-u,--u", cfg.preset, "override the envelope's preset");
    add_out(ver);

    CLI::App* sui = app.add_subcommand("suite", "run a property suite over the catalog");
    sui->add_option("name", cfg.suite, "suite name")
        ->required()
        ->check(CLI::IsMember({"duality", "contraction", "decomposition", "cuts", "all"}));
    add_out(sui);

    CLI::App* exp = app.add_subcommand("export", "render artifacts as DOT or JSON");
    exp->add_option("what", cfg.what, "artifact")
        ->required()
        ->check(CLI::IsMember({"decomposition", "certificate"}));
    exp->add_option("-f,--family", cfg.family, "family name");
    exp->add_option("-u,--u", cfg.preset, "preset override");
    exp->add_option("--in", cfg.in, "certificate file (what = certificate)");
    exp->add_option("--format", cfg.format, "dot | json")
        ->check(CLI::IsMember({"dot", "json"}));
    exp->add_option("--scale", cfg.scale, "decomposition snapshot scale (1..20)");
    add_budgets(exp);
    add_out(exp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (app.got_subcommand(fams)) return cmd_families(cfg);
        if (app.got_subcommand(ext)) return cmd_extract(cfg);
        if (app.got_subcommand(ver)) return cmd_verify(cfg);
        if (app.got_subcommand(sui)) return cmd_suite(cfg);
        if (app.got_subcommand(exp)) {
            if (cfg.what == "certificate" && cfg.in.empty())
                throw PreconditionError("export certificate needs --in");
            return cmd_export(cfg);
        }
        return exit_usage;
    } catch (const PreconditionError& e) {
        emit_json(cfg, Json{{"error", Json{{"class", "precondition-violation"},
                                           {"detail", e.what()}}}});
        return exit_precondition;
    } catch (const BudgetError& e) {
        emit_json(cfg, Json{{"error", Json{{"class", "budget-exhausted"},
                                           {"detail", e.what()}}}});
        return exit_budget;
    } catch (const InvariantError& e) {
        emit_json(cfg, Json{{"error", Json{{"class", "invariant-violation"},
                                           {"detail", e.what()}}}});
        return exit_invariant;
    } catch (const std::exception& e) {
        emit_json(cfg, Json{{"error", Json{{"class", "invariant-violation"},
                                           {"detail", e.what()}}}});
        return exit_invariant;
    }
}

}  // namespace cli
}  // namespace combforge
