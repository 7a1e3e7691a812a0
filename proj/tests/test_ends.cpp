#include <catch_amalgamated.hpp>

#include <amalg/build.hpp>
#include <amalg/ends.hpp>
#include <amalg/fixtures.hpp>

using namespace amalg;

TEST_CASE("tight separators of a path are its interior vertices") {
    TightSeparatorList seps = tight_separators(path_graph(5), 1);
    REQUIRE(seps.separators.size() == 3);
    CHECK(seps.separators[0].vertices == std::vector<int>{1});
    CHECK(seps.separators[1].vertices == std::vector<int>{2});
    CHECK(seps.separators[2].vertices == std::vector<int>{3});
    CHECK(!seps.truncated);
    for (const TightSeparator& s : seps.separators) CHECK(s.sides.size() == 2);
}

TEST_CASE("cycles have no small tight separators") {
    CHECK(tight_separators(cycle_graph(6), 1).separators.empty());

    TightSeparatorList pairs = tight_separators(cycle_graph(6), 2);
    std::vector<std::vector<int>> expect{{0, 2}, {0, 3}, {0, 4}, {1, 3}, {1, 4}, {1, 5}, {2, 4}, {2, 5}, {3, 5}};
    REQUIRE(pairs.separators.size() == expect.size());
    for (size_t i = 0; i < expect.size(); ++i) CHECK(pairs.separators[i].vertices == expect[i]);
}

TEST_CASE("forbidden vertices never enter separators") {
    std::vector<char> forbidden{0, 1, 0, 0, 0};
    TightSeparatorList seps = tight_separators(path_graph(5), 1, 100000, forbidden);
    REQUIRE(seps.separators.size() == 2);
    CHECK(seps.separators[0].vertices == std::vector<int>{2});
    CHECK(seps.separators[1].vertices == std::vector<int>{3});
}

TEST_CASE("the enumeration cap is reported") {
    TightSeparatorList seps = tight_separators(grid_graph(4, 4), 4, 5);
    CHECK(seps.truncated);
}

TEST_CASE("an interior cut of a truncated double ray reaches the fringe twice") {
    fixtures::Fixture f = fixtures::double_ray();
    BuildResult b = build_amalgam(f.spec, build_tree_patch(f.spec, 4, 1));
    REQUIRE(b.patch.graph.n == 10);

    int cut = -1;
    GeodesicDag fromRoot = shortest_path_data(b.patch.graph, b.rootVertex);
    for (int v = 0; v < b.patch.graph.n; ++v)
        if (!b.patch.is_boundary(v) && fromRoot.dist[static_cast<size_t>(v)] == 1) cut = v;
    REQUIRE(cut >= 0);

    std::vector<EndRegion> regions = ends_at_scale(b.patch, {cut});
    CHECK(regions.size() == 2);
    CHECK(boundary_reaching_count(regions) == 2);
    for (const EndRegion& r : regions) {
        CHECK(r.reachesBoundary);
        CHECK(end_degree_estimate(b.patch, r, {cut}) == 1);
    }
}

TEST_CASE("whole graphs have no fringe to reach") {
    Patch p = Patch::whole_graph(path_graph(7), 3);
    std::vector<EndRegion> regions = ends_at_scale(p, {3});
    CHECK(regions.size() == 2);
    CHECK(boundary_reaching_count(regions) == 0);
}

TEST_CASE("end degree tracks the adhesion width") {
    fixtures::Fixture f = fixtures::grid_chain();
    BuildResult b = build_amalgam(f.spec, build_tree_patch(f.spec, 2, 1));
    // Separate along one glued column: the region behind it reaches the fringe
    // through at most five disjoint rays.
    std::vector<int> column;
    for (int local : {4, 9, 14, 19, 24}) column.push_back(b.classOf[0][static_cast<size_t>(local)]);
    std::sort(column.begin(), column.end());
    std::vector<EndRegion> regions = ends_at_scale(b.patch, column);
    CHECK(boundary_reaching_count(regions) >= 1);
    for (const EndRegion& r : regions) {
        int deg = end_degree_estimate(b.patch, r, column);
        CHECK(deg <= 5);
        if (r.reachesBoundary) CHECK(deg >= 1);
    }
}
