#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "combforge/families.hpp"
#include "combforge/normal_tree.hpp"

#include <set>

using namespace combforge;

TEST_CASE("normal trees grow from catalog covers and verify as normal") {
    for (const char* name : {"ray", "grid", "fan", "complete"}) {
        CAPTURE(name);
        const FamilySpec& f = family_spec(name);
        const Preset* all = f.preset("all");
        REQUIRE(all != nullptr);
        REQUIRE(all->cover.has_value());

        Budget b = f.default_budget;
        b.steps = 200;
        auto built = build_normal_tree(*f.oracle, *all->cover, b);
        CHECK(built.steps_taken == 200);
        CHECK(!built.u_exhausted);
        CHECK(built.skipped.empty());
        CHECK(built.tree.size() == 200);

        auto rep = check_normal(*f.oracle, built.tree, 260);
        CHECK(rep.normal);
        CHECK(rep.complete);
        CHECK(!rep.counterexample.has_value());
    }
}

TEST_CASE("a tree violating normality is caught with a witness") {
    auto g = family_oracle("grid");
    // ids on the grid's diamond enumeration: 0=(0,0), 1=(1,0), 2=(0,1), 6=(1,1)
    REQUIRE(g->label(1) == "(1,0)");
    REQUIRE(g->label(2) == "(0,1)");
    REQUIRE(g->label(6) == "(1,1)");

    SUBCASE("direct edge between incomparable tree vertices") {
        RootedTree t(*g, 0);
        t.attach_leaf(1, 0);
        t.attach_leaf(2, 0);
        t.attach_leaf(6, 2);
        auto rep = check_normal(*g, t, 100);
        CHECK(!rep.normal);
        REQUIRE(rep.counterexample.has_value());
        std::set<VertexId> xy{rep.counterexample->x, rep.counterexample->y};
        CHECK(xy == std::set<VertexId>{1, 6});
        CHECK(rep.counterexample->path.size() == 2);
    }

    SUBCASE("incomparable boundary of an outside component") {
        RootedTree t(*g, 0);
        t.attach_leaf(1, 0);
        t.attach_leaf(2, 0);
        auto rep = check_normal(*g, t, 100);
        CHECK(!rep.normal);
        REQUIRE(rep.counterexample.has_value());
        std::set<VertexId> xy{rep.counterexample->x, rep.counterexample->y};
        CHECK(xy == std::set<VertexId>{1, 2});
        // witness path runs through the outside vertex (1,1)
        REQUIRE(rep.counterexample->path.size() == 3);
        CHECK(rep.counterexample->path[1] == 6);
        CHECK(!t.contains(6));
    }
}

TEST_CASE("down-closure intersections separate, and violations surface") {
    const FamilySpec& f = family_spec("grid");
    Budget b = f.default_budget;
    b.steps = 120;
    auto built = build_normal_tree(*f.oracle, *f.preset("all")->cover, b);
    const RootedTree& t = built.tree;

    // find an incomparable pair among the deeper vertices
    std::optional<std::pair<VertexId, VertexId>> pair;
    auto vs = t.sorted_vertices();
    for (std::size_t i = 0; i < vs.size() && !pair; ++i)
        for (std::size_t j = i + 1; j < vs.size() && !pair; ++j)
            if (!t.comparable(vs[i], vs[j]) && t.height(vs[i]) >= 3 && t.height(vs[j]) >= 3)
                pair = {vs[i], vs[j]};
    REQUIRE(pair.has_value());

    auto rep = separation_check(*f.oracle, t, pair->first, pair->second, 400);
    CHECK(rep.separated);
    CHECK(rep.violating_path.empty());

    // the separator is exactly the down-closure intersection
    auto dx = t.down_closure(pair->first);
    auto dy = t.down_closure(pair->second);
    std::set<VertexId> sx(dx.begin(), dx.end()), sy(dy.begin(), dy.end()), want;
    for (VertexId v : sx)
        if (sy.count(v)) want.insert(v);
    CHECK(std::set<VertexId>(rep.separator.begin(), rep.separator.end()) == want);

    CHECK_THROWS_AS((void)separation_check(*f.oracle, t, pair->first, 1000000, 400),
                    PreconditionError);

    // the non-normal toy tree fails the separation property too
    auto g = family_oracle("grid");
    RootedTree bad(*g, 0);
    bad.attach_leaf(1, 0);
    bad.attach_leaf(2, 0);
    auto violated = separation_check(*g, bad, 1, 2, 100);
    CHECK(!violated.separated);
    CHECK(violated.separator == std::vector<VertexId>{0});
    REQUIRE(violated.violating_path.size() >= 3);
    CHECK(violated.violating_path.front() == 1);
    CHECK(violated.violating_path.back() == 2);
    for (std::size_t i = 1; i + 1 < violated.violating_path.size(); ++i)
        CHECK(!bad.contains(violated.violating_path[i]));
}

TEST_CASE("tree branches track the declared closure ends") {
    SUBCASE("ray: the single branch follows the single end uniquely") {
        const FamilySpec& f = family_spec("ray");
        Budget b = f.default_budget;
        b.steps = 200;
        auto built = build_normal_tree(*f.oracle, *f.preset("all")->cover, b);
        b.depth = 400;
        auto rows = normal_ray_end_check(*f.oracle, built.tree, {0}, {2, 5, 10}, b);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].end_id == 0);
        CHECK(rows[0].in_closure_of_tree);
        CHECK(rows[0].unique_for_largest_scale);
        for (const auto& [scale, hits] : rows[0].tracked_branches)
            CHECK(hits.size() == 1);
    }

    SUBCASE("grid: the end stays in the closure at every scale") {
        const FamilySpec& f = family_spec("grid");
        Budget b = f.default_budget;
        b.steps = 200;
        auto built = build_normal_tree(*f.oracle, *f.preset("all")->cover, b);
        b.depth = 400;
        auto rows = normal_ray_end_check(*f.oracle, built.tree, {0}, {2, 4}, b);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].in_closure_of_tree);
        for (const auto& [scale, hits] : rows[0].tracked_branches)
            CHECK(!hits.empty());
    }

    SUBCASE("unknown end id is a precondition failure") {
        const FamilySpec& f = family_spec("ray");
        Budget b = f.default_budget;
        b.steps = 20;
        auto built = build_normal_tree(*f.oracle, *f.preset("all")->cover, b);
        CHECK_THROWS_AS(
            (void)normal_ray_end_check(*f.oracle, built.tree, {7}, {2}, b),
            PreconditionError);
    }
}

TEST_CASE("covers that lie are rejected") {
    auto g = family_oracle("ray");
    Budget b = family_spec("ray").default_budget;

    DispersedCover empty{[](std::size_t) -> std::optional<CoverPiece> { return std::nullopt; }};
    CHECK_THROWS_AS((void)build_normal_tree(*g, empty, b), PreconditionError);

    // a piece declared infinite that runs dry is an invariant violation
    DispersedCover lying{[](std::size_t i) -> std::optional<CoverPiece> {
        if (i > 0) return std::nullopt;
        CoverPiece p;
        p.finite = false;
        p.at = [](std::size_t j) -> std::optional<VertexId> {
            if (j < 5) return (VertexId)j;
            return std::nullopt;
        };
        return p;
    }};
    Budget small = b;
    small.steps = 20;
    CHECK_THROWS_AS((void)build_normal_tree(*g, lying, small), InvariantError);
}
