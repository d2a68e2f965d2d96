#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "combforge/families.hpp"
#include "combforge/tree.hpp"

using namespace combforge;

TEST_CASE("neighbor streams are strictly increasing and match adjacency") {
    for (const FamilySpec& f : list_families()) {
        if (f.doc_only) continue;
        const GraphOracle& g = *f.oracle;
        CAPTURE(f.name);
        for (VertexId v : {VertexId(0), VertexId(1), VertexId(7), VertexId(40)}) {
            if (!g.has_vertex(v)) continue;
            std::optional<VertexId> prev;
            for (std::size_t i = 0; i < 64; ++i) {
                auto w = g.neighbor_at(v, i);
                if (!w) break;
                if (prev) CHECK(*w > *prev);
                prev = w;
                CHECK(g.adjacent(*w, v));
                CHECK(g.adjacent(v, *w));
                CHECK(*w != v);
            }
            // negative probes: vertices absent from the stream are not adjacent
            auto below = g.neighbors_below(v, 30);
            for (VertexId w = 0; w < 30; ++w) {
                if (!g.has_vertex(w) || w == v) continue;
                bool streamed =
                    std::binary_search(below.begin(), below.end(), w);
                CHECK(streamed == g.adjacent(w, v));
            }
        }
    }
}

TEST_CASE("infinite-degree vertices stream lazily") {
    const GraphOracle& complete = *family_spec("complete").oracle;
    const GraphOracle& fan = *family_spec("fan").oracle;
    const GraphOracle& star = *family_spec("infinite-star").oracle;
    // pulling the first 5000 neighbors must terminate even though streams
    // never exhaust
    for (const GraphOracle* g : {&complete, &fan, &star}) {
        VertexId hub = g == &fan ? 1 : 0;  // fan apex is vertex 1
        NeighborCursor c = g->neighbors(hub);
        std::optional<VertexId> last;
        for (int i = 0; i < 5000; ++i) {
            last = c.next();
            REQUIRE(last.has_value());
        }
        CHECK(*last >= 4999);
    }
}

TEST_CASE("truncations are deterministic and well-formed") {
    const GraphOracle& g = *family_spec("grid").oracle;
    Truncation a = truncate_first_n(g, 60);
    Truncation b = truncate_first_n(g, 60);
    CHECK(a.vertices == b.vertices);
    CHECK(a.edges == b.edges);
    CHECK(std::is_sorted(a.vertices.begin(), a.vertices.end()));
    CHECK(std::is_sorted(a.edges.begin(), a.edges.end()));
    for (auto [u, v] : a.edges) {
        CHECK(u < v);
        CHECK(g.adjacent(u, v));
        CHECK(a.contains(u));
        CHECK(a.contains(v));
    }
    // every induced edge is present: brute-force over the vertex set
    for (VertexId u : a.vertices)
        for (VertexId v : a.vertices)
            if (u < v && g.adjacent(u, v))
                CHECK(std::binary_search(a.edges.begin(), a.edges.end(),
                                         std::make_pair(u, v)));
}

TEST_CASE("balls respect radius") {
    const GraphOracle& g = *family_spec("grid").oracle;
    Truncation ball = truncate_ball(g, 0, 3, 100000);
    CHECK(ball.complete);
    // grid enumerated by L1 diamonds: ball of radius 3 around the origin is
    // exactly the diamond with 1+4+8+12 = 25 vertices
    CHECK(ball.size() == 25);
    Truncation ray_ball = truncate_ball(*family_spec("ray").oracle, 5, 2, 100000);
    std::vector<VertexId> expect{3, 4, 5, 6, 7};
    CHECK(ray_ball.vertices == expect);
}

TEST_CASE("component after deletion separates exactly") {
    const GraphOracle& ray = *family_spec("ray").oracle;
    // deleting v5 cuts the path: the tail component from v8 misses v0..v5
    Truncation tail = component_after_deletion(ray, {5}, 8, 50, 100000, true);
    CHECK(!tail.contains(0));
    CHECK(!tail.contains(5));
    CHECK(tail.contains(6));
    CHECK(tail.contains(8));

    const GraphOracle& grid = *family_spec("grid").oracle;
    // the grid stays connected after one deletion
    Truncation comp = component_after_deletion(grid, {0}, 1, 6, 100000, false);
    CHECK(comp.contains(2));
    CHECK(!comp.contains(0));
    CHECK(comp.size() > 20);
}

TEST_CASE("bfs_within honors depth, horizon and avoid sets") {
    const GraphOracle& g = *family_spec("ray").oracle;
    BfsTree t = bfs_within(g, 4, 3, 1000, 100000);
    CHECK(t.contains(1));
    CHECK(t.contains(7));
    CHECK(!t.contains(0));  // depth 4 away
    CHECK(!t.contains(8));
    std::unordered_set<VertexId> avoid{3};
    BfsTree s = bfs_within(g, 4, 30, 1000, 100000, &avoid);
    CHECK(!s.contains(3));
    CHECK(!s.contains(2));  // behind the avoided vertex
    CHECK(s.contains(20));
    auto p = s.path_to_root(9);
    CHECK(p.front() == 9);
    CHECK(p.back() == 4);
    CHECK(p.size() == 6);
}

TEST_CASE("rooted tree attach rules") {
    const GraphOracle& g = *family_spec("ray").oracle;
    RootedTree t(g, 0);
    t.attach_path({2, 1, 0});
    CHECK(t.size() == 3);
    CHECK(t.height(2) == 2);
    CHECK(t.parent(1) == VertexId(0));
    CHECK(t.tree_le(0, 2));
    CHECK(t.comparable(1, 2));
    CHECK_THROWS_AS(t.attach_path({1, 0}), InvariantError);     // already in tree
    CHECK_THROWS_AS(t.attach_path({5, 3}), InvariantError);     // endpoint absent
    CHECK_THROWS_AS(t.attach_path({9, 3, 2}), InvariantError);  // non-edge 9-3
    t.attach_path({4, 3, 2});
    CHECK(t.radius() == 4);
    CHECK(t.log().size() == 2);
    CHECK(t.log()[1].attach_height == 2);
}

TEST_CASE("finite graphs behave like oracles") {
    FiniteGraph fg("triangle-plus-tail", 5, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}});
    CHECK(fg.adjacent(0, 2));
    CHECK(!fg.adjacent(0, 3));
    CHECK(!fg.has_vertex(5));
    CHECK(fg.neighbors_below(2, 5) == std::vector<VertexId>{0, 1, 3});
    Truncation t = truncate_first_n(fg, 10);
    CHECK(t.size() == 5);
    CHECK(t.edges.size() == 5);
}

TEST_CASE("closure evidence distinguishes tail from origin") {
    const GraphOracle& ray = *family_spec("ray").oracle;
    const EndDescriptor& e = ray.ends().ends.front();
    auto all = [](VertexId) { return true; };
    auto only_origin = [](VertexId v) { return v == 0; };
    ClosureEvidence yes = meets_closure_evidence(ray, e, all, {2, 4, 8}, 30);
    CHECK(yes.in_closure);
    // deleting the prefix [0, s) strands the origin on a path
    ClosureEvidence no = meets_closure_evidence(ray, e, only_origin, {2, 4, 8}, 30);
    CHECK(!no.in_closure);
}
