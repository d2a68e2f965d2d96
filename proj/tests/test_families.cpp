#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "combforge/cli_app.hpp"
#include "combforge/families.hpp"
#include "combforge/verify.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace combforge;

namespace {

std::vector<const FamilySpec*> runnable() {
    std::vector<const FamilySpec*> out;
    for (const auto& f : list_families())
        if (!f.doc_only) out.push_back(&f);
    return out;
}

}  // namespace

TEST_CASE("catalog shape and documentation-only entries") {
    const auto& cat = list_families();
    REQUIRE(cat.size() == 12);

    const std::vector<std::string> expected = {
        "ray",          "one-way-ladder", "grid",
        "fan",          "complete",       "infinite-star",
        "binary-tree",  "binary-tree-with-tops", "ternary-tree",
        "comb",         "seymour-thomas", "t-aleph1"};
    for (std::size_t i = 0; i < cat.size(); ++i) {
        CHECK(cat[i].name == expected[i]);
        CHECK(!cat[i].summary.empty());
    }

    for (std::size_t i = 0; i < 10; ++i) {
        CAPTURE(cat[i].name);
        CHECK(!cat[i].doc_only);
        REQUIRE(cat[i].oracle != nullptr);
        CHECK(cat[i].oracle->name() == cat[i].name);
        CHECK(!cat[i].presets.empty());
        CHECK(cat[i].decomposition);
    }
    for (std::size_t i = 10; i < 12; ++i) {
        CHECK(cat[i].doc_only);
        CHECK(cat[i].oracle == nullptr);
        CHECK(!cat[i].doc_note.empty());
        CHECK(cat[i].presets.empty());
    }

    CHECK(family_spec("grid").name == "grid");
    CHECK_THROWS_AS((void)family_spec("nosuch"), PreconditionError);
    CHECK_THROWS_AS((void)family_oracle("seymour-thomas"), PreconditionError);
    CHECK_THROWS_AS((void)family_oracle("t-aleph1"), PreconditionError);
    CHECK(family_oracle("ray") != nullptr);

    // only two catalog graphs have vertex pairs joined by infinitely many
    // edge-disjoint paths; the star's hub is cut off from any leaf by one edge
    for (const FamilySpec* f : runnable()) {
        CAPTURE(f->name);
        bool expect = !(f->name == "complete" || f->name == "binary-tree-with-tops");
        CHECK(f->finitely_separable == expect);
    }
}

TEST_CASE("grid indexing matches its coordinate labels") {
    auto g = family_oracle("grid");
    const std::size_t patch = 145;  // rings 0..8, a bit into ring 8

    std::vector<std::pair<long long, long long>> coord(patch);
    std::set<std::pair<long long, long long>> seen;
    for (VertexId v = 0; v < patch; ++v) {
        long long x = 0, y = 0;
        REQUIRE(std::sscanf(g->label(v).c_str(), "(%lld,%lld)", &x, &y) == 2);
        coord[v] = {x, y};
        CHECK(seen.insert({x, y}).second);  // injective on the patch
    }

    for (VertexId u = 0; u < patch; ++u)
        for (VertexId v = u + 1; v < patch; ++v) {
            long long dx = coord[u].first - coord[v].first;
            long long dy = coord[u].second - coord[v].second;
            bool l1 = (dx == 0 && (dy == 1 || dy == -1)) ||
                      (dy == 0 && (dx == 1 || dx == -1));
            CHECK(g->adjacent(u, v) == l1);
        }

    // neighbor streams agree with adjacency and are degree-4 exactly
    for (VertexId v = 0; v < 30; ++v) {
        std::vector<VertexId> nb;
        for (std::size_t i = 0; i < 8; ++i) {
            auto w = g->neighbor_at(v, i);
            if (!w) break;
            nb.push_back(*w);
        }
        REQUIRE(nb.size() == 4);
        for (VertexId w : nb) CHECK(g->adjacent(v, w));
    }
}

TEST_CASE("declared ends: rays are rays and distinct ids") {
    for (const FamilySpec* f : runnable()) {
        CAPTURE(f->name);
        const auto& g = *f->oracle;
        std::set<int> ids;
        for (const EndDescriptor& e : g.ends().ends) {
            CAPTURE(e.id);
            CHECK(ids.insert(e.id).second);
            CHECK(!e.note.empty());

            std::set<VertexId> vs;
            for (std::size_t j = 0; j < 40; ++j) {
                VertexId r = e.ray(j);
                CHECK(vs.insert(r).second);  // injective prefix
                if (j > 0) CHECK(g.adjacent(e.ray(j - 1), r));
            }
        }
        if (g.ends().all_ends_dominated)
            for (const EndDescriptor& e : g.ends().ends) CHECK(e.dominated);
    }
}

TEST_CASE("declared dominators really dominate") {
    for (const FamilySpec* f : runnable()) {
        const auto& g = *f->oracle;
        for (const EndDescriptor& e : g.ends().ends) {
            if (!e.dominated) continue;
            CAPTURE(f->name); CAPTURE(e.id);

            // up to three dominators from the stream (the fan's apex is the
            // only one it has), each with a direct eight-path fan onto the ray
            std::set<VertexId> doms;
            std::size_t pulled = 0;
            for (std::size_t i = 0; i < 3; ++i) {
                auto d = e.dominators(i);
                if (!d) break;
                ++pulled;
                doms.insert(*d);

                auto picks = direct_fan_indices(g, *d, e, 8);
                REQUIRE(picks.has_value());
                FanCertificate fan;
                fan.dominator = *d;
                fan.end_id = e.id;
                for (std::size_t j : *picks) fan.paths.push_back({*d, e.ray(j)});
                CHECK(verify_fan(g, fan).accepted());
            }
            CHECK(pulled >= 1);
            CHECK(doms.size() == pulled);  // stream does not repeat early
        }
    }
}

TEST_CASE("undominated ends: no dominators, bounded fans at growing truncations") {
    for (const FamilySpec* f : runnable()) {
        const auto& g = *f->oracle;
        for (const EndDescriptor& e : g.ends().ends) {
            if (e.dominated) continue;
            CAPTURE(f->name); CAPTURE(e.id);
            CHECK(!e.dominators(0).has_value());

            VertexId src = e.ray(0);
            Truncation t400 = truncate_first_n(g, 400);
            Truncation t800 = truncate_first_n(g, 800);
            int f400 = max_fan_at_truncation(g, t400, src, e, 8);
            int f800 = max_fan_at_truncation(g, t800, src, e, 8);
            CHECK(f400 <= f800);  // flow only grows with the truncation
            CHECK(f800 < 8);      // and stays bounded: no domination
        }
    }
}

TEST_CASE("presets are well-formed against their registries") {
    for (const FamilySpec* f : runnable()) {
        const auto& g = *f->oracle;
        std::set<std::string> names;
        for (const Preset& p : f->presets) {
            CAPTURE(f->name); CAPTURE(p.name);
            CHECK(names.insert(p.name).second);
            CHECK(p.u.name == p.name);
            REQUIRE(p.u.member);

            for (int id : p.u.closure_end_ids) {
                const EndDescriptor* e = g.ends().find(id);
                REQUIRE(e != nullptr);
            }
            if (!p.u.infinite) CHECK(p.u.closure_end_ids.empty());

            if (p.cover) {
                auto pieces = p.cover->pieces(4);
                REQUIRE(!pieces.empty());
                for (const CoverPiece& piece : pieces) {
                    CHECK(piece.finite);
                    auto ms = piece.members(64);
                    REQUIRE(!ms.empty());
                    CHECK(ms.size() < 64);
                    for (VertexId v : ms) CHECK(p.u.member(v));
                }
            }
        }
    }
}

TEST_CASE("known answers use real presets and match end metadata") {
    const std::set<std::string> ops = {"star-comb", "theorem1", "theorem3", "theorem4"};
    const std::set<std::string> shapes = {"star", "comb", "rayless-tree",
                                          "star-decomposition", "dominated-subgraph",
                                          "precondition"};
    for (const FamilySpec* f : runnable()) {
        const auto& g = *f->oracle;
        CHECK(!f->known_answers.empty());
        for (const auto& [key, shape] : f->known_answers) {
            const auto& [op, preset_name] = key;
            CAPTURE(f->name); CAPTURE(op); CAPTURE(preset_name); CAPTURE(shape);
            CHECK(ops.count(op) == 1);
            CHECK(shapes.count(shape) == 1);
            const Preset* p = f->preset(preset_name);
            REQUIRE(p != nullptr);

            bool declared_undominated_in_closure = false;
            for (int id : p->u.closure_end_ids) {
                const EndDescriptor* e = g.ends().find(id);
                if (e && !e->dominated) declared_undominated_in_closure = true;
            }

            if (op == "star-comb") {
                bool comb_side = p->u.infinite && !p->u.closure_end_ids.empty();
                CHECK(shape == (comb_side ? "comb" : "star"));
            } else {
                CHECK(shape != "star");
                if (shape == "comb") {
                    CHECK(declared_undominated_in_closure);
                } else if (shape == "precondition") {
                    // hypothesis failure: no comb available and no cover to
                    // witness "normally spanned"
                    CHECK(op == "theorem1");
                    CHECK(!declared_undominated_in_closure);
                    CHECK(!p->cover.has_value());
                } else {
                    CHECK(!declared_undominated_in_closure);
                    if (op == "theorem1") CHECK(shape == "rayless-tree");
                    if (op == "theorem3") CHECK(shape == "star-decomposition");
                    if (op == "theorem4") CHECK(shape == "dominated-subgraph");
                }
            }
        }
    }
}

TEST_CASE("audit trees: rules are rooted, edges are edges") {
    for (const FamilySpec* f : runnable()) {
        const auto& g = *f->oracle;
        for (const AuditTree& at : f->audit_trees) {
            CAPTURE(f->name); CAPTURE(at.rule.name);
            CHECK(!at.rule.parent(at.rule.root).has_value());
            REQUIRE(!at.sample_children.empty());
            for (VertexId c : at.sample_children) {
                CAPTURE(c);
                CHECK(c != at.rule.root);
                auto p = at.rule.parent(c);
                REQUIRE(p.has_value());
                CHECK(g.adjacent(c, *p));
                auto walk = at.rule.root_path(c, 64);
                CHECK(walk.front() == c);
                CHECK(walk.back() == at.rule.root);
                for (std::size_t i = 0; i + 1 < walk.size(); ++i)
                    CHECK(g.adjacent(walk[i], walk[i + 1]));
            }
        }
        // families whose spanning trees have two infinite sides per edge ship none
        bool has_trees = !f->audit_trees.empty();
        bool expect_trees = !(f->name == "grid" || f->name == "binary-tree" ||
                              f->name == "ternary-tree" ||
                              f->name == "binary-tree-with-tops");
        CHECK(has_trees == expect_trees);
    }
}

TEST_CASE("catalog manifest file matches the generator byte for byte") {
    namespace fs = std::filesystem;
    fs::path here = fs::path(__FILE__).parent_path();  // .../tests
    fs::path manifest = here.empty() ? fs::path("families.json")
                                     : here.parent_path() / "families.json";
    REQUIRE(fs::exists(manifest));

    std::ifstream in(manifest, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == cli::catalog_json().dump(2) + "\n");
}
