#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "combforge/families.hpp"
#include "combforge/star_comb.hpp"
#include "combforge/verify.hpp"

#include <set>

using namespace combforge;

namespace {

std::vector<const FamilySpec*> runnable() {
    std::vector<const FamilySpec*> out;
    for (const auto& f : list_families())
        if (!f.doc_only) out.push_back(&f);
    return out;
}

bool comb_route(const Preset& p) {
    return p.u.infinite && !p.u.closure_end_ids.empty();
}

}  // namespace

TEST_CASE("comb route: k teeth at k up to 32 on every closure preset") {
    for (const FamilySpec* f : runnable()) {
        const auto& g = *f->oracle;
        // families indexing vertices exponentially along their rays need the
        // id-horizon raised with k; polynomial families take the full sweep
        bool exponential = f->name == "binary-tree" ||
                           f->name == "binary-tree-with-tops" ||
                           f->name == "ternary-tree";
        for (const Preset& p : f->presets) {
            if (!comb_route(p)) continue;
            for (int k : exponential ? std::vector<int>{4, 8, 12}
                                     : std::vector<int>{4, 16, 32}) {
                CAPTURE(f->name);
                CAPTURE(p.name);
                CAPTURE(k);
                Budget b = f->default_budget;
                b.k = k;
                if (exponential) {
                    b.horizon = 16384;
                } else {
                    b.depth = std::max(b.depth, 32);
                    b.horizon = std::max<std::size_t>(b.horizon, 4096);
                }

                auto o = star_comb(g, p.u, b);
                REQUIRE(ok(o));
                REQUIRE(is_comb(o));
                const CombCertificate& c = comb_of(o);
                CHECK(verify_comb(g, c, p.u.member).accepted());
                CHECK((int)c.tooth_paths.size() == k);
                CHECK(c.spine.size() >= 2);

                int least = *std::min_element(p.u.closure_end_ids.begin(),
                                              p.u.closure_end_ids.end());
                REQUIRE(c.anchor.kind == SpineAnchor::registry_end);
                CHECK(c.anchor.end_id == least);
                const EndDescriptor* e = g.ends().find(least);
                REQUIRE(e != nullptr);
                CHECK(c.undominated == !e->dominated);

                // teeth are distinct U-vertices; tooth paths start on the spine
                std::set<VertexId> teeth;
                std::set<VertexId> spine(c.spine.begin(), c.spine.end());
                for (const auto& tp : c.tooth_paths) {
                    REQUIRE(!tp.empty());
                    CHECK(spine.count(tp.front()) == 1);
                    CHECK(p.u.member(tp.back()));
                    CHECK(teeth.insert(tp.back()).second);
                }
            }
        }
    }
}

TEST_CASE("star route: finite and closure-free presets yield verified stars") {
    for (const FamilySpec* f : runnable()) {
        const auto& g = *f->oracle;
        for (const Preset& p : f->presets) {
            if (comb_route(p)) continue;
            CAPTURE(f->name);
            CAPTURE(p.name);
            Budget b = f->default_budget;
            b.k = 8;

            auto o = star_comb(g, p.u, b);
            REQUIRE(ok(o));
            REQUIRE(is_star(o));
            const StarCertificate& s = star_of(o);
            CHECK(verify_star(g, s, p.u.member).accepted());
            // a short star is only allowed when U was provably exhausted
            if (s.degenerate) CHECK(s.u_exhausted);
            if (!s.degenerate) CHECK((int)s.paths.size() == b.k);

            auto it = f->known_answers.find({"star-comb", p.name});
            if (it != f->known_answers.end()) CHECK(it->second == "star");
        }
    }
}

TEST_CASE("dynamic outcomes match the recorded star-comb answers") {
    for (const FamilySpec* f : runnable()) {
        const auto& g = *f->oracle;
        for (const auto& [key, shape] : f->known_answers) {
            if (key.first != "star-comb") continue;
            const Preset* p = f->preset(key.second);
            REQUIRE(p != nullptr);
            CAPTURE(f->name);
            CAPTURE(p->name);
            auto o = star_comb(g, p->u, f->default_budget);
            REQUIRE(ok(o));
            CHECK((shape == "comb") == is_comb(o));
            CHECK((shape == "star") == is_star(o));
        }
    }
}

TEST_CASE("stars on dispersed cover pieces: finite pieces exhaust honestly") {
    for (const FamilySpec* f : runnable()) {
        const auto& g = *f->oracle;
        for (const Preset& p : f->presets) {
            if (!p.cover) continue;
            auto pieces = p.cover->pieces(2);
            for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
                CAPTURE(f->name);
                CAPTURE(p.name);
                CAPTURE(pi);
                auto ms = pieces[pi].members(64);
                REQUIRE(!ms.empty());
                std::set<VertexId> mset(ms.begin(), ms.end());
                USet pu{p.name + "/piece", [mset](VertexId v) { return mset.count(v) == 1; },
                        false, {}};

                Budget b = f->default_budget;
                b.k = 32;
                auto o = star_comb(g, pu, b);
                REQUIRE(ok(o));
                REQUIRE(is_star(o));
                const StarCertificate& s = star_of(o);
                CHECK(verify_star(g, s, pu.member).accepted());
                CHECK(s.u_exhausted);
                for (VertexId leaf : s.leaves()) CHECK(mset.count(leaf) == 1);
            }
        }
    }
}

TEST_CASE("star inside a rayless tree by tree order alone") {
    auto star_g = family_oracle("infinite-star");
    RootedTree t(*star_g, 0);
    for (VertexId leaf = 1; leaf <= 20; ++leaf) t.attach_leaf(leaf, 0);

    auto odd = [](VertexId v) { return v % 2 == 1; };
    auto s = star_in_rayless_tree(t, odd, 8);
    REQUIRE(s.has_value());
    CHECK(s->center == 0);
    CHECK(s->paths.size() == 8);
    CHECK(!s->degenerate);
    CHECK(verify_star(*star_g, *s, odd).accepted());
    for (VertexId leaf : s->leaves()) CHECK(odd(leaf));

    // no U in the tree at all
    auto none = star_in_rayless_tree(t, [](VertexId) { return false; }, 4);
    CHECK(!none.has_value());

    // path-shaped tree: no branching center, best spread reported degenerate
    auto ray_g = family_oracle("ray");
    RootedTree path(*ray_g, 0);
    for (VertexId v = 1; v <= 9; ++v) path.attach_leaf(v, v - 1);
    auto in_u = [](VertexId v) { return v == 9; };
    auto one = star_in_rayless_tree(path, in_u, 1);
    REQUIRE(one.has_value());
    CHECK(one->center == 8);
    REQUIRE(one->paths.size() == 1);
    CHECK(one->paths[0] == std::vector<VertexId>{8, 9});

    auto two = star_in_rayless_tree(path, [](VertexId v) { return v == 4 || v == 9; }, 2);
    REQUIRE(two.has_value());
    CHECK(two->degenerate);
    CHECK(verify_star(*ray_g, *two,
                      [](VertexId v) { return v == 4 || v == 9; })
              .accepted());
}

TEST_CASE("budget exhaustion is reported, not papered over") {
    auto comb_g = family_oracle("comb");
    const FamilySpec& cf = family_spec("comb");
    const Preset* teeth = cf.preset("teeth");
    REQUIRE(teeth != nullptr);

    Budget tight = cf.default_budget;
    tight.k = 12;
    tight.horizon = 10;  // tooth vertices beyond id 10 are out of reach
    auto o = star_comb(*comb_g, teeth->u, tight);
    REQUIRE(!ok(o));
    CHECK(exhausted(o).stage == "comb");
    CHECK(exhausted(o).detail.find("teeth") != std::string::npos);

    // star route: U declared infinite but nothing below the horizon
    auto ray_g = family_oracle("ray");
    USet far{"far", [](VertexId v) { return v >= 100000; }, true, {}};
    Budget b = family_spec("ray").default_budget;
    auto far_o = star_comb(*ray_g, far, b);
    REQUIRE(!ok(far_o));
    CHECK(exhausted(far_o).stage == "star");

    // star route: U alive but too spread out to center within the budget
    auto grid = family_oracle("grid");
    std::set<VertexId> axis;
    for (long long j = 0; j < 200; ++j)
        axis.insert(families::grid_oracle::axis_index(j));
    USet sparse{"east-axis", [axis](VertexId v) { return axis.count(v) == 1; }, true, {}};
    Budget gb = family_spec("grid").default_budget;
    gb.k = 8;
    auto sparse_o = star_comb(*grid, sparse, gb);
    REQUIRE(!ok(sparse_o));
    CHECK(exhausted(sparse_o).stage == "star");
}
