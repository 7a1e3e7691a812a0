#include <catch_amalgamated.hpp>

#include <amalg/treedecomp.hpp>

using namespace amalg;

namespace {

TreeDecomposition path_decomp(int n) {
    // Parts {i, i+1} along a path graph.
    TreeDecomposition td;
    std::vector<std::pair<int, int>> treeEdges;
    for (int i = 0; i + 1 < n; ++i) {
        td.parts.push_back({i, i + 1});
        if (i > 0) treeEdges.emplace_back(i - 1, i);
    }
    td.tree = FiniteGraph::from_edges(n - 1, treeEdges);
    return td;
}

TreeDecomposition c6_two_parts() {
    TreeDecomposition td;
    td.tree = FiniteGraph::from_edges(2, {{0, 1}});
    td.parts = {{0, 1, 2, 3}, {0, 3, 4, 5}};
    return td;
}

}  // namespace

TEST_CASE("path decompositions verify") {
    FiniteGraph p5 = path_graph(5);
    TreeDecomposition td = path_decomp(5);
    CHECK(verify_td(p5, td).ok());
    CHECK(adhesion_set(td, 1, 2) == std::vector<int>{2});
}

TEST_CASE("verification catches each axiom separately") {
    FiniteGraph p4 = path_graph(4);

    TreeDecomposition missingVertex;
    missingVertex.tree = FiniteGraph::from_edges(2, {{0, 1}});
    missingVertex.parts = {{0, 1}, {1, 2}};
    CHECK(!verify_td(p4, missingVertex).ok());

    TreeDecomposition missingEdge;
    missingEdge.tree = FiniteGraph::from_edges(2, {{0, 1}});
    missingEdge.parts = {{0, 1}, {2, 3}};
    CHECK(!verify_td(p4, missingEdge).ok());

    TreeDecomposition brokenSubtree;
    brokenSubtree.tree = FiniteGraph::from_edges(3, {{0, 1}, {1, 2}});
    brokenSubtree.parts = {{0, 1}, {2, 3}, {1, 2}};
    CHECK(!verify_td(p4, brokenSubtree).ok());

    // A non-tree is malformed input, not an axiom violation.
    TreeDecomposition notATree;
    notATree.tree = cycle_graph(3);
    notATree.parts = {{0, 1}, {1, 2}, {2, 3}};
    CHECK_THROWS_AS(verify_td(p4, notATree), InputError);
}

TEST_CASE("tree paths walk through the unique route") {
    FiniteGraph star = FiniteGraph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
    CHECK(tree_path(star, 1, 3) == std::vector<int>{1, 0, 3});
    CHECK(tree_path(star, 2, 2) == std::vector<int>{2});
    CHECK(is_tree(star));
    CHECK(!is_tree(cycle_graph(3)));
}

TEST_CASE("geodesic closure completes hexagon parts") {
    FiniteGraph c6 = cycle_graph(6);
    TreeDecomposition td = c6_two_parts();
    REQUIRE(verify_td(c6, td).ok());

    // Adhesion {0,3} spans the whole cycle once geodesics are added.
    TreeDecomposition closed = geodesic_closure(c6, td);
    CHECK(closed.parts[0] == std::vector<int>{0, 1, 2, 3, 4, 5});
    CHECK(closed.parts[1] == std::vector<int>{0, 1, 2, 3, 4, 5});
    CHECK(verify_td(c6, closed).ok());

    ConnectedPartsReport rep = check_connected_parts(c6, closed);
    CHECK(rep.allAdhesionsConnected);
    CHECK(rep.allPartsConnected);
    CHECK(rep.implicationHolds);

    // Applying the closure again changes nothing.
    TreeDecomposition twice = geodesic_closure(c6, closed);
    CHECK(twice.parts == closed.parts);
}

TEST_CASE("closure preserves containment and axioms on a grid") {
    FiniteGraph g = grid_graph(3, 4);
    TreeDecomposition td;
    td.tree = FiniteGraph::from_edges(3, {{0, 1}, {1, 2}});
    td.parts = {{0, 1, 4, 5, 8, 9}, {1, 2, 5, 6, 9, 10}, {2, 3, 6, 7, 10, 11}};
    REQUIRE(verify_td(g, td).ok());

    TreeDecomposition closed = geodesic_closure(g, td);
    for (size_t t = 0; t < td.parts.size(); ++t)
        CHECK(std::includes(closed.parts[t].begin(), closed.parts[t].end(), td.parts[t].begin(), td.parts[t].end()));
    CHECK(verify_td(g, closed).ok());
    CHECK(check_connected_parts(g, closed).allAdhesionsConnected);
}

TEST_CASE("contracting tree edges merges parts") {
    TreeDecomposition td = path_decomp(5);  // 4 nodes
    ContractResult res = contract_edges(td, {{1, 2}});
    CHECK(res.td.tree.n == 2);
    CHECK(res.nodeMap[0] == res.nodeMap[1]);
    CHECK(res.td.parts[static_cast<size_t>(res.nodeMap[1])] == std::vector<int>{0, 1, 2});
    CHECK(res.td.parts[static_cast<size_t>(res.nodeMap[2])] == std::vector<int>{2, 3, 4});
    CHECK(adhesion_set(res.td, res.nodeMap[1], res.nodeMap[2]) == std::vector<int>{2});
    CHECK(res.adhesionsPreserved);
    CHECK_THROWS_AS(contract_edges(td, {{0, 3}}), InputError);
}

TEST_CASE("adhesion subtree diameters") {
    TreeDecomposition td = path_decomp(5);
    for (const AdhesionSubtree& a : adhesion_subtree_diameters(td)) {
        CHECK(a.diameter <= 1);
        CHECK(!a.exceedsTwo);
    }

    TreeDecomposition shared;
    shared.tree = FiniteGraph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
    shared.parts = {{0, 1}, {0, 1, 2}, {0, 1, 3}, {0, 1, 4}};
    std::vector<AdhesionSubtree> diams = adhesion_subtree_diameters(shared);
    REQUIRE(diams.size() == 1);
    CHECK(diams[0].set == std::vector<int>{0, 1});
    CHECK(diams[0].diameter == 3);
    CHECK(diams[0].exceedsTwo);
}

TEST_CASE("node maps induced by host symmetries") {
    TreeDecomposition td = c6_two_parts();

    NodeMapResult swap = induced_node_map(td, PartialMap({3, 4, 5, 0, 1, 2}));
    CHECK(!swap.failure.has_value());
    CHECK(swap.nodeMap(0) == 1);
    CHECK(swap.nodeMap(1) == 0);

    // Rotation by one does not permute the parts.
    NodeMapResult rot = induced_node_map(td, PartialMap({1, 2, 3, 4, 5, 0}));
    CHECK(rot.failure.has_value());

    // Partially defined host maps leave nodes undefined without failing.
    PartialMap partial({kUndef, 1, 2, 3, 4, 5});
    NodeMapResult part = induced_node_map(td, partial);
    CHECK(!part.failure.has_value());
    CHECK(!part.nodeMap.defined(0));
}

TEST_CASE("duplicate parts resolve to the lowest node id") {
    TreeDecomposition td;
    td.tree = FiniteGraph::from_edges(3, {{0, 1}, {1, 2}});
    td.parts = {{0, 1}, {1, 2}, {0, 1}};
    NodeMapResult r = induced_node_map(td, PartialMap::identity(3));
    CHECK(!r.failure.has_value());
    CHECK(r.nodeMap(0) == 0);
    CHECK(r.nodeMap(2) == 0);
    CHECK(!r.ambiguities.empty());
}
