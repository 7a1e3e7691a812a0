#pragma once

// A Patch is a finite window onto a possibly infinite graph: a graph together
// with the set of vertices whose neighbourhood may be truncated. Everything
// inside the boundary is exact; comparisons and symmetry checks tolerate
// disagreement only where truncation can explain it.

#include <optional>
#include <vector>

#include "graph.hpp"
#include "perm.hpp"

namespace amalg {

struct Patch {
    FiniteGraph graph;
    std::vector<char> boundary;  // size n; 1 where the neighbourhood may be incomplete
    int innerRadius = 0;         // ball of this radius around root avoids the boundary
    int root = 0;

    bool is_boundary(int v) const { return boundary[static_cast<size_t>(v)] != 0; }

    static Patch whole_graph(FiniteGraph g, int root = 0) {
        Patch p;
        p.boundary.assign(static_cast<size_t>(g.n), 0);
        p.innerRadius = g.n;  // nothing is truncated
        p.root = root;
        p.graph = std::move(g);
        return p;
    }
};

// Largest r such that the r-ball around the root contains no boundary vertex.
inline int computed_inner_radius(const FiniteGraph& g, const std::vector<char>& boundary, int root) {
    GeodesicDag dag = shortest_path_data(g, root);
    int nearest = g.n + 1;
    for (int v = 0; v < g.n; ++v)
        if (boundary[static_cast<size_t>(v)] && dag.dist[static_cast<size_t>(v)] >= 0)
            nearest = std::min(nearest, dag.dist[static_cast<size_t>(v)]);
    return nearest - 1;
}

// Root-respecting isomorphism between the depth-balls around the two roots.
// Returns the vertex map (ball of a -> ball of b, host ids) or nothing.
// Exhaustive backtracking; distance-from-root and in-ball degree prune.
inline std::optional<std::vector<std::pair<int, int>>> boundary_tolerant_isomorphic(const Patch& a,
                                                                                    const Patch& b,
                                                                                    int depth) {
    if (depth < 0) throw InputError("depth must be non-negative");
    if (depth > a.innerRadius || depth > b.innerRadius)
        throw InputError("depth exceeds inner radius; comparison would see truncated vertices");

    InducedSubgraph ga = induced_subgraph(a.graph, ball(a.graph, a.root, depth));
    InducedSubgraph gb = induced_subgraph(b.graph, ball(b.graph, b.root, depth));
    if (ga.graph.n != gb.graph.n || ga.graph.edge_count() != gb.graph.edge_count()) return std::nullopt;

    int ra = ga.from_host.at(a.root);
    int rb = gb.from_host.at(b.root);
    GeodesicDag da = shortest_path_data(ga.graph, ra);
    GeodesicDag db = shortest_path_data(gb.graph, rb);

    // Assign in BFS order from the root so every new vertex has a mapped anchor.
    std::vector<int> order;
    for (int d = 0; d <= depth; ++d)
        for (int v = 0; v < ga.graph.n; ++v)
            if (da.dist[static_cast<size_t>(v)] == d) order.push_back(v);
    if (static_cast<int>(order.size()) != ga.graph.n) return std::nullopt;  // ball not connected to root

    std::vector<int> match(static_cast<size_t>(ga.graph.n), -1);
    std::vector<char> used(static_cast<size_t>(gb.graph.n), 0);

    auto consistent = [&](int u, int w) {
        if (da.dist[static_cast<size_t>(u)] != db.dist[static_cast<size_t>(w)]) return false;
        if (ga.graph.degree(u) != gb.graph.degree(w)) return false;
        for (int x : ga.graph.adj[static_cast<size_t>(u)]) {
            if (match[static_cast<size_t>(x)] < 0) continue;
            if (!gb.graph.has_edge(w, match[static_cast<size_t>(x)])) return false;
        }
        // Mapped non-neighbours must stay non-neighbours; mapped images of
        // neighbours were checked above, so count suffices.
        int mappedNb = 0;
        for (int x : ga.graph.adj[static_cast<size_t>(u)])
            if (match[static_cast<size_t>(x)] >= 0) ++mappedNb;
        int wMappedNb = 0;
        for (int y : gb.graph.adj[static_cast<size_t>(w)])
            if (used[static_cast<size_t>(y)]) ++wMappedNb;
        return mappedNb == wMappedNb;
    };

    auto solve = [&](auto&& self, size_t idx) -> bool {
        if (idx == order.size()) return true;
        int u = order[idx];
        for (int w = 0; w < gb.graph.n; ++w) {
            if (used[static_cast<size_t>(w)]) continue;
            if (idx == 0 && w != rb) continue;  // roots correspond
            if (!consistent(u, w)) continue;
            match[static_cast<size_t>(u)] = w;
            used[static_cast<size_t>(w)] = 1;
            if (self(self, idx + 1)) return true;
            match[static_cast<size_t>(u)] = -1;
            used[static_cast<size_t>(w)] = 0;
        }
        return false;
    };
    if (!solve(solve, 0)) return std::nullopt;

    std::vector<std::pair<int, int>> out;
    for (int v = 0; v < ga.graph.n; ++v)
        out.emplace_back(ga.to_host[static_cast<size_t>(v)], gb.to_host[static_cast<size_t>(match[static_cast<size_t>(v)])]);
    return out;
}

// Validity of a partial map as a symmetry of a patch. Adjacency must be
// preserved both ways except across pairs that sit entirely on the boundary
// (on either side of the map), where truncation can hide edges.
inline std::optional<AutomorphismWitness> check_patch_morphism(const Patch& p, const PartialMap& m) {
    if (m.size() != p.graph.n) throw InputError("map size disagrees with patch graph");
    if (!m.injective()) return AutomorphismWitness{-1, -1, "map is not injective"};
    for (int u = 0; u < p.graph.n; ++u) {
        if (!m.defined(u)) continue;
        for (int v = u + 1; v < p.graph.n; ++v) {
            if (!m.defined(v)) continue;
            bool exemptSrc = p.is_boundary(u) && p.is_boundary(v);
            bool exemptDst = p.is_boundary(m(u)) && p.is_boundary(m(v));
            if (exemptSrc || exemptDst) continue;
            bool e = p.graph.has_edge(u, v);
            bool fe = p.graph.has_edge(m(u), m(v));
            if (e != fe)
                return AutomorphismWitness{u, v, e ? "edge mapped to non-edge" : "non-edge mapped to edge"};
        }
    }
    return std::nullopt;
}

}  // namespace amalg
