#pragma once

// Ready-made amalgamation data shared by the examples, the command line tool,
// and the tests, plus seeded random generators for stress runs. Each fixture
// carries factor symmetry generators that respect its bonding data (possibly
// none, leaving only the identity).

#include <random>
#include <string>
#include <vector>

#include "amalgam_spec.hpp"
#include "graph.hpp"
#include "perm.hpp"
#include "treedecomp.hpp"

namespace amalg {
namespace fixtures {

struct Fixture {
    AmalgamationSpec spec;
    Action side1Group;
    Action side2Group;  // ignored for one-sided data
};

// Two single-edge factors chained end to end; the amalgam is a double ray.
inline Fixture double_ray() {
    Fixture f;
    f.spec.name = "double-ray";
    f.spec.g1 = path_graph(2);
    f.spec.g2 = path_graph(2);
    f.spec.sets1 = {{0}, {1}};
    f.spec.sets2 = {{0}, {1}};
    for (int k : {0, 1})
        for (int l : {0, 1}) f.spec.bondingImages[{k, l}] = {l};
    f.side1Group = Action::from_perms({{1, 0}}, "edge-swap");
    f.side2Group = Action::from_perms({{1, 0}}, "edge-swap");
    return f;
}

// One single-edge factor glued to itself; same double ray, one-sided data.
inline Fixture one_sided_ray() {
    Fixture f;
    f.spec.name = "one-sided-ray";
    f.spec.type2 = true;
    f.spec.g1 = path_graph(2);
    f.spec.sets1 = {{0}, {1}};
    f.spec.jSet = {0};
    f.spec.bondingImages[{0, 1}] = {1};
    f.side1Group = Action{{}, "trivial"};
    f.side2Group = Action{{}, "trivial"};
    return f;
}

// Triangles glued at single vertices: a triangle cactus.
inline Fixture triangle_cactus() {
    Fixture f;
    f.spec.name = "triangle-cactus";
    f.spec.g1 = cycle_graph(3);
    f.spec.g2 = cycle_graph(3);
    f.spec.sets1 = {{0}, {1}, {2}};
    f.spec.sets2 = {{0}, {1}, {2}};
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) f.spec.bondingImages[{k, l}] = {l};
    f.side1Group = Action::from_perms({{1, 2, 0}, {0, 2, 1}}, "triangle-symmetries");
    f.side2Group = f.side1Group;
    return f;
}

// Squares glued at single vertices: the thinness constant of the build is 1.
inline Fixture square_cactus() {
    Fixture f;
    f.spec.name = "square-cactus";
    f.spec.g1 = cycle_graph(4);
    f.spec.g2 = cycle_graph(4);
    for (int k = 0; k < 4; ++k) {
        f.spec.sets1.push_back({k});
        f.spec.sets2.push_back({k});
    }
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) f.spec.bondingImages[{k, l}] = {l};
    f.side1Group = Action::from_perms({{1, 2, 3, 0}, {0, 3, 2, 1}}, "square-symmetries");
    f.side2Group = f.side1Group;
    return f;
}

// Hexagons glued along two antipodal vertex pairs; the reflection i -> 1-i
// respects the data with the label swap as its induced permutation.
inline Fixture hexagon_pair() {
    Fixture f;
    f.spec.name = "hexagon-pair";
    f.spec.g1 = cycle_graph(6);
    f.spec.g2 = cycle_graph(6);
    f.spec.sets1 = {{0, 3}, {1, 4}};
    f.spec.sets2 = {{0, 3}, {1, 4}};
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) f.spec.bondingImages[{k, l}] = {l, l + 3};
    f.side1Group = Action::from_perms({{1, 0, 5, 4, 3, 2}}, "mirror");
    f.side2Group = f.side1Group;
    return f;
}

// A point factor meeting an edge factor four times: the 4-regular tree.
inline Fixture four_regular_tree() {
    Fixture f;
    f.spec.name = "four-regular-tree";
    f.spec.g1 = FiniteGraph::from_edges(1, {});
    f.spec.g2 = path_graph(2);
    f.spec.sets1 = {{0}, {0}, {0}, {0}};
    f.spec.sets2 = {{0}, {1}};
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 2; ++l) f.spec.bondingImages[{k, l}] = {l};
    f.side1Group = Action{{}, "trivial"};
    f.side2Group = Action::from_perms({{1, 0}}, "edge-swap");
    return f;
}

// 5x5 grids chained along opposite columns, rows kept aligned; the bottom row
// is marked as factor boundary, standing in for an ambient graph that keeps
// growing below the strip.
inline Fixture grid_chain() {
    Fixture f;
    f.spec.name = "grid-chain";
    f.spec.type2 = true;
    f.spec.g1 = grid_graph(5, 5);
    f.spec.sets1 = {{0, 5, 10, 15, 20}, {4, 9, 14, 19, 24}};
    f.spec.jSet = {0};
    f.spec.bondingImages[{0, 1}] = {4, 9, 14, 19, 24};
    f.spec.boundary1.assign(25, 0);
    for (int v : {20, 21, 22, 23, 24}) f.spec.boundary1[static_cast<size_t>(v)] = 1;
    f.side1Group = Action{{}, "trivial"};
    f.side2Group = Action{{}, "trivial"};
    return f;
}

inline std::vector<Fixture> all_fixtures() {
    return {double_ray(),  one_sided_ray(),     triangle_cactus(), square_cactus(),
            hexagon_pair(), four_regular_tree(), grid_chain()};
}

inline Fixture by_name(const std::string& name) {
    for (Fixture& f : all_fixtures())
        if (f.spec.name == name) return f;
    throw InputError("unknown fixture: " + name);
}

// Connected graph on n vertices: a random attachment tree plus extra edges.
inline FiniteGraph random_connected_graph(int n, int extraEdges, std::mt19937& rng) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < n; ++v) edges.emplace_back(static_cast<int>(rng() % static_cast<unsigned>(v)), v);
    std::set<std::pair<int, int>> have(edges.begin(), edges.end());
    for (int tries = 0; tries < 4 * extraEdges && static_cast<int>(edges.size()) < n - 1 + extraEdges; ++tries) {
        int u = static_cast<int>(rng() % static_cast<unsigned>(n));
        int v = static_cast<int>(rng() % static_cast<unsigned>(n));
        if (u == v) continue;
        std::pair<int, int> e{std::min(u, v), std::max(u, v)};
        if (have.count(e)) continue;
        have.insert(e);
        edges.push_back(e);
    }
    return FiniteGraph::from_edges(n, edges);
}

// Valid decomposition from a random elimination ordering: the part for each
// vertex is the vertex plus its later neighbours in the fill-in graph, linked
// to the part of its earliest later neighbour.
inline TreeDecomposition random_td(const FiniteGraph& g, std::mt19937& rng) {
    int n = g.n;
    if (n == 0) throw InputError("empty graph");
    std::vector<int> order(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> pos(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) pos[static_cast<size_t>(order[static_cast<size_t>(i)])] = i;

    std::vector<std::set<int>> fill(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v)
        for (int u : g.adj[static_cast<size_t>(v)]) fill[static_cast<size_t>(v)].insert(u);

    TreeDecomposition td;
    std::vector<std::pair<int, int>> treeEdges;
    std::vector<int> nodeOf(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        int v = order[static_cast<size_t>(i)];
        std::vector<int> later;
        for (int u : fill[static_cast<size_t>(v)])
            if (pos[static_cast<size_t>(u)] > i) later.push_back(u);
        for (size_t a = 0; a < later.size(); ++a)
            for (size_t b = a + 1; b < later.size(); ++b) {
                fill[static_cast<size_t>(later[a])].insert(later[b]);
                fill[static_cast<size_t>(later[b])].insert(later[a]);
            }
        std::vector<int> part = later;
        part.push_back(v);
        std::sort(part.begin(), part.end());
        nodeOf[static_cast<size_t>(v)] = static_cast<int>(td.parts.size());
        td.parts.push_back(part);
        if (!later.empty()) {
            int next = later.front();
            for (int u : later)
                if (pos[static_cast<size_t>(u)] < pos[static_cast<size_t>(next)]) next = u;
            treeEdges.emplace_back(nodeOf[static_cast<size_t>(v)], -1 - next);  // resolve once all nodes exist
        }
    }
    for (auto& [a, b] : treeEdges) b = nodeOf[static_cast<size_t>(-1 - b)];
    td.tree = FiniteGraph::from_edges(static_cast<int>(td.parts.size()), treeEdges);
    return td;
}

// Structurally valid random amalgamation data: factors up to 8 vertices,
// up to 3 labels per side, shared adhesion cardinality, random bijections.
inline AmalgamationSpec random_spec(std::uint32_t seed) {
    std::mt19937 rng(seed);
    auto pick = [&rng](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1)); };
    AmalgamationSpec spec;
    spec.name = "random-" + std::to_string(seed);
    spec.type2 = pick(0, 1) == 1;

    int n1 = pick(2, 8);
    spec.g1 = random_connected_graph(n1, pick(0, n1 / 2), rng);
    int n2 = n1;
    if (!spec.type2) {
        n2 = pick(2, 8);
        spec.g2 = random_connected_graph(n2, pick(0, n2 / 2), rng);
    }
    int card = pick(1, std::min({3, n1, n2}));
    auto randomSet = [&](int n) {
        std::vector<int> all(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) all[static_cast<size_t>(i)] = i;
        std::shuffle(all.begin(), all.end(), rng);
        std::vector<int> s(all.begin(), all.begin() + card);
        std::sort(s.begin(), s.end());
        return s;
    };

    if (spec.type2) {
        int m = pick(2, 3);
        for (int k = 0; k < m; ++k) spec.sets1.push_back(randomSet(n1));
        int jSize = pick(1, m - 1);
        std::vector<int> labels(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) labels[static_cast<size_t>(i)] = i;
        std::shuffle(labels.begin(), labels.end(), rng);
        spec.jSet.assign(labels.begin(), labels.begin() + jSize);
        std::sort(spec.jSet.begin(), spec.jSet.end());
    } else {
        int m1 = pick(1, 3), m2 = pick(1, 3);
        for (int k = 0; k < m1; ++k) spec.sets1.push_back(randomSet(n1));
        for (int l = 0; l < m2; ++l) spec.sets2.push_back(randomSet(n2));
    }
    for (auto [k, l] : spec.required_pairs()) {
        std::vector<int> image = spec.type2 ? spec.sets1[static_cast<size_t>(l)] : spec.sets2[static_cast<size_t>(l)];
        std::shuffle(image.begin(), image.end(), rng);
        spec.bondingImages[{k, l}] = image;
    }
    return spec;
}

}  // namespace fixtures
}  // namespace amalg
