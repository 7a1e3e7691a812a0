#include <catch_amalgamated.hpp>

#include <amalg/fixtures.hpp>
#include <amalg/hyperbolicity.hpp>

#include "oracles.hpp"

using namespace amalg;
using oracles::delta_oracle;

TEST_CASE("paths and trees are zero thin") {
    CHECK(delta_thin(path_graph(6)).delta == 0);
    CHECK(delta_thin(path_graph(2)).delta == 0);
    std::mt19937 rng(11);
    FiniteGraph tree = fixtures::random_connected_graph(12, 0, rng);
    REQUIRE(tree.edge_count() == 11);
    CHECK(delta_thin(tree).delta == 0);
}

TEST_CASE("the square cycle is exactly one thin") {
    DeltaReport rep = delta_thin(cycle_graph(4));
    CHECK(rep.delta == 1);
    CHECK(rep.delta == delta_oracle(cycle_graph(4)));
    CHECK(rep.vertex >= 0);
}

TEST_CASE("thinness agrees with the oracle on small graphs") {
    std::vector<FiniteGraph> zoo{path_graph(5),     cycle_graph(4), cycle_graph(5), cycle_graph(6),
                                 cycle_graph(7),    complete_graph(4), complete_graph(5),
                                 grid_graph(2, 3),  grid_graph(3, 3),
                                 FiniteGraph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}})};
    std::mt19937 rng(5);
    zoo.push_back(fixtures::random_connected_graph(8, 3, rng));
    zoo.push_back(fixtures::random_connected_graph(9, 5, rng));
    for (size_t i = 0; i < zoo.size(); ++i) {
        INFO("zoo graph " << i);
        CHECK(delta_thin(zoo[i]).delta == delta_oracle(zoo[i]));
    }
}

TEST_CASE("thinness rejects unusable inputs") {
    CHECK_THROWS_AS(delta_thin(FiniteGraph::from_edges(0, {})), InputError);
    CHECK_THROWS_AS(delta_thin(FiniteGraph::from_edges(4, {{0, 1}, {2, 3}})), InputError);
}

TEST_CASE("quasi geodesic certificates") {
    FiniteGraph c6 = cycle_graph(6);
    QuasiGeodesicReport exact = quasi_geodesic_check(c6, {0, 1, 2, 3}, 1.0, 0.0);
    CHECK(exact.ok);
    CHECK(exact.pairs == 6);

    // A walk that returns to its start violates any multiplicative bound.
    QuasiGeodesicReport detour = quasi_geodesic_check(c6, {0, 1, 0}, 1.0, 0.0);
    CHECK(!detour.ok);
    CHECK(detour.worstSlack > 0.0);
    CHECK(quasi_geodesic_check(c6, {0, 1, 0}, 1.0, 2.0).ok);

    // The long way around the cycle stretches one distance-1 pair to 5 steps.
    QuasiGeodesicReport longway = quasi_geodesic_check(c6, {0, 5, 4, 3, 2, 1}, 4.9, 0.0);
    CHECK(!longway.ok);
    CHECK(longway.worstFrom == 0);
    CHECK(longway.worstTo == 5);
    CHECK(quasi_geodesic_check(c6, {0, 5, 4, 3, 2, 1}, 5.0, 0.0).ok);

    CHECK_THROWS_AS(quasi_geodesic_check(c6, {0, 2}, 1.0, 0.0), InputError);
}

TEST_CASE("routed walks through the double ray are geodesics") {
    fixtures::Fixture f = fixtures::double_ray();
    BuildResult b = build_amalgam(f.spec, build_tree_patch(f.spec, 4, 1));
    GeodesicDag fromRoot = shortest_path_data(b.patch.graph, b.rootVertex);
    for (int v = 0; v < b.patch.graph.n; ++v) {
        auto walk = tree_route_walk(b, b.rootVertex, v);
        REQUIRE(walk.has_value());
        CHECK(static_cast<int>(walk->size()) - 1 == fromRoot.dist[static_cast<size_t>(v)]);
        CHECK(quasi_geodesic_check(b.patch.graph, *walk, 1.0, 0.0).ok);
    }
}

TEST_CASE("the experiment reports a flat interior for the double ray") {
    fixtures::Fixture f = fixtures::double_ray();
    HyperbolicityExperiment rep = amalgam_hyperbolicity_experiment(f.spec, 4);
    CHECK(rep.adhesionSpread == 0);
    CHECK(rep.gamma == 1.0);
    CHECK(rep.delta.delta == 0);
    CHECK(rep.violations == 0);
    CHECK(rep.pairsTested > 0);
}

TEST_CASE("the experiment covers two-vertex adhesion sets") {
    fixtures::Fixture f = fixtures::hexagon_pair();
    HyperbolicityExperiment rep = amalgam_hyperbolicity_experiment(f.spec, 3);
    CHECK(rep.adhesionSpread == 3);
    CHECK(rep.gamma == 1.5);
    CHECK(rep.violations == 0);
}
