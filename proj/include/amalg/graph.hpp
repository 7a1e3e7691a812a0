#pragma once

// Finite simple graphs with sorted neighbour lists, BFS geodesic data,
// geodesic enumeration and small structural helpers. Everything downstream
// (tree decompositions, amalgam builds, separators) sits on this file.

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace amalg {

// Thrown for malformed inputs (bad vertex ids, non-simple edge lists,
// disconnected pairs where a path is required). Analysis failures are not
// exceptions; they come back as report structs.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

struct FiniteGraph {
    int n = 0;
    // adj[v] is strictly increasing; no loops, no parallel edges.
    std::vector<std::vector<int>> adj;
    std::map<int, std::string> labels;

    static FiniteGraph from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
        if (n < 0) throw InputError("vertex count must be non-negative");
        FiniteGraph g;
        g.n = n;
        g.adj.assign(static_cast<size_t>(n), {});
        for (auto [u, v] : edges) {
            if (u < 0 || u >= n || v < 0 || v >= n)
                throw InputError("edge endpoint out of range: (" + std::to_string(u) + "," + std::to_string(v) + ")");
            if (u == v) throw InputError("loop at vertex " + std::to_string(u));
            g.adj[static_cast<size_t>(u)].push_back(v);
            g.adj[static_cast<size_t>(v)].push_back(u);
        }
        for (auto& nb : g.adj) {
            std::sort(nb.begin(), nb.end());
            if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
                throw InputError("parallel edge in edge list");
        }
        return g;
    }

    bool has_edge(int u, int v) const {
        if (u < 0 || u >= n || v < 0 || v >= n) return false;
        const auto& nb = adj[static_cast<size_t>(u)];
        return std::binary_search(nb.begin(), nb.end(), v);
    }

    int degree(int v) const { return static_cast<int>(adj[static_cast<size_t>(v)].size()); }

    // Each edge once, u < v, lexicographic.
    std::vector<std::pair<int, int>> edge_list() const {
        std::vector<std::pair<int, int>> out;
        for (int u = 0; u < n; ++u)
            for (int v : adj[static_cast<size_t>(u)])
                if (u < v) out.emplace_back(u, v);
        return out;
    }

    int edge_count() const {
        size_t total = 0;
        for (const auto& nb : adj) total += nb.size();
        return static_cast<int>(total / 2);
    }

    bool operator==(const FiniteGraph& o) const { return n == o.n && adj == o.adj; }
};

struct Violation {
    std::string kind;  // "asymmetric", "loop", "parallel", "unsorted", "range"
    std::string message;
    int u = -1;
    int v = -1;
};

struct ValidationReport {
    std::vector<Violation> items;
    bool ok() const { return items.empty(); }
};

// Structural audit of an adjacency structure that may have been built by hand
// or parsed from a file. from_edges enforces most of this; parsers call this
// on anything they accept.
inline ValidationReport validate_graph(const FiniteGraph& g) {
    ValidationReport rep;
    if (static_cast<int>(g.adj.size()) != g.n) {
        rep.items.push_back({"range", "adjacency size disagrees with n", -1, -1});
        return rep;
    }
    for (int u = 0; u < g.n; ++u) {
        const auto& nb = g.adj[static_cast<size_t>(u)];
        for (size_t i = 0; i < nb.size(); ++i) {
            int v = nb[i];
            if (v < 0 || v >= g.n) {
                rep.items.push_back({"range", "neighbour out of range", u, v});
                continue;
            }
            if (v == u) rep.items.push_back({"loop", "loop at vertex", u, u});
            if (i + 1 < nb.size() && nb[i + 1] == v)
                rep.items.push_back({"parallel", "duplicate neighbour entry", u, v});
            if (i + 1 < nb.size() && nb[i + 1] < v)
                rep.items.push_back({"unsorted", "neighbour list not sorted", u, nb[i + 1]});
            if (v != u && v >= 0 && v < g.n && !g.has_edge(v, u))
                rep.items.push_back({"asymmetric", "edge missing reverse entry", u, v});
        }
    }
    return rep;
}

// BFS layering from one source. preds[v] holds the neighbours of v that lie
// one layer closer to the source, so every u-v geodesic is a path in this DAG.
struct GeodesicDag {
    int source = 0;
    std::vector<int> dist;  // -1 where unreachable
    std::vector<std::vector<int>> preds;

    bool reachable(int v) const { return dist[static_cast<size_t>(v)] >= 0; }
};

inline GeodesicDag shortest_path_data(const FiniteGraph& g, int source) {
    if (source < 0 || source >= g.n) throw InputError("BFS source out of range");
    GeodesicDag dag;
    dag.source = source;
    dag.dist.assign(static_cast<size_t>(g.n), -1);
    dag.preds.assign(static_cast<size_t>(g.n), {});
    std::queue<int> q;
    dag.dist[static_cast<size_t>(source)] = 0;
    q.push(source);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : g.adj[static_cast<size_t>(u)]) {
            if (dag.dist[static_cast<size_t>(v)] < 0) {
                dag.dist[static_cast<size_t>(v)] = dag.dist[static_cast<size_t>(u)] + 1;
                q.push(v);
            }
            if (dag.dist[static_cast<size_t>(v)] == dag.dist[static_cast<size_t>(u)] + 1)
                dag.preds[static_cast<size_t>(v)].push_back(u);
        }
    }
    return dag;
}

struct GeodesicList {
    std::vector<std::vector<int>> paths;  // lexicographic
    bool truncated = false;               // hit the cap before exhausting
};

// All u-v geodesics, lexicographic as vertex sequences, stopping at cap.
inline GeodesicList all_geodesics(const FiniteGraph& g, int u, int v, size_t cap = 10000) {
    if (u < 0 || u >= g.n || v < 0 || v >= g.n) throw InputError("geodesic endpoint out of range");
    GeodesicDag from_u = shortest_path_data(g, u);
    if (!from_u.reachable(v)) throw InputError("no path between requested vertices");
    GeodesicDag from_v = shortest_path_data(g, v);
    int d = from_u.dist[static_cast<size_t>(v)];

    GeodesicList out;
    std::vector<int> path{u};
    // Forward DFS; neighbour lists are sorted, so paths come out lexicographic.
    auto walk = [&](auto&& self, int at) -> void {
        if (out.truncated) return;
        if (at == v) {
            if (out.paths.size() == cap) {
                out.truncated = true;
                return;
            }
            out.paths.push_back(path);
            return;
        }
        int du = from_u.dist[static_cast<size_t>(at)];
        for (int w : g.adj[static_cast<size_t>(at)]) {
            if (from_u.dist[static_cast<size_t>(w)] != du + 1) continue;
            if (from_v.dist[static_cast<size_t>(w)] != d - du - 1) continue;
            path.push_back(w);
            self(self, w);
            path.pop_back();
            if (out.truncated) return;
        }
    };
    walk(walk, u);
    return out;
}

// Vertices lying on at least one u-v geodesic. Equals {w : d(u,w)+d(w,v) = d(u,v)}.
inline std::vector<int> interval(const GeodesicDag& from_u, const GeodesicDag& from_v, int u, int v) {
    (void)u;
    std::vector<int> out;
    int d = from_u.dist[static_cast<size_t>(v)];
    if (d < 0) throw InputError("no path between requested vertices");
    for (int w = 0; w < static_cast<int>(from_u.dist.size()); ++w) {
        int a = from_u.dist[static_cast<size_t>(w)];
        int b = from_v.dist[static_cast<size_t>(w)];
        if (a >= 0 && b >= 0 && a + b == d) out.push_back(w);
    }
    return out;
}

inline std::vector<int> interval(const FiniteGraph& g, int u, int v) {
    GeodesicDag a = shortest_path_data(g, u);
    GeodesicDag b = shortest_path_data(g, v);
    return interval(a, b, u, v);
}

// Component ids, 0-based, in order of first vertex discovered.
inline std::vector<int> components(const FiniteGraph& g) {
    std::vector<int> comp(static_cast<size_t>(g.n), -1);
    int next = 0;
    for (int s = 0; s < g.n; ++s) {
        if (comp[static_cast<size_t>(s)] >= 0) continue;
        std::queue<int> q;
        comp[static_cast<size_t>(s)] = next;
        q.push(s);
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            for (int y : g.adj[static_cast<size_t>(x)])
                if (comp[static_cast<size_t>(y)] < 0) {
                    comp[static_cast<size_t>(y)] = next;
                    q.push(y);
                }
        }
        ++next;
    }
    return comp;
}

inline bool connected(const FiniteGraph& g) {
    if (g.n == 0) return true;
    auto comp = components(g);
    return *std::max_element(comp.begin(), comp.end()) == 0;
}

// Components of g with the vertices in `removed` deleted. Removed vertices get -1.
inline std::vector<int> components_without(const FiniteGraph& g, const std::vector<int>& removed) {
    std::vector<char> dead(static_cast<size_t>(g.n), 0);
    for (int v : removed) {
        if (v < 0 || v >= g.n) throw InputError("removed vertex out of range");
        dead[static_cast<size_t>(v)] = 1;
    }
    std::vector<int> comp(static_cast<size_t>(g.n), -1);
    int next = 0;
    for (int s = 0; s < g.n; ++s) {
        if (dead[static_cast<size_t>(s)] || comp[static_cast<size_t>(s)] >= 0) continue;
        std::queue<int> q;
        comp[static_cast<size_t>(s)] = next;
        q.push(s);
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            for (int y : g.adj[static_cast<size_t>(x)])
                if (!dead[static_cast<size_t>(y)] && comp[static_cast<size_t>(y)] < 0) {
                    comp[static_cast<size_t>(y)] = next;
                    q.push(y);
                }
        }
        ++next;
    }
    return comp;
}

struct InducedSubgraph {
    FiniteGraph graph;
    std::vector<int> to_host;            // new id -> host id, increasing
    std::map<int, int> from_host;        // host id -> new id
};

inline InducedSubgraph induced_subgraph(const FiniteGraph& g, std::vector<int> verts) {
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    InducedSubgraph out;
    out.to_host = verts;
    for (size_t i = 0; i < verts.size(); ++i) {
        if (verts[i] < 0 || verts[i] >= g.n) throw InputError("induced subgraph vertex out of range");
        out.from_host[verts[i]] = static_cast<int>(i);
    }
    std::vector<std::pair<int, int>> edges;
    for (size_t i = 0; i < verts.size(); ++i)
        for (int w : g.adj[static_cast<size_t>(verts[i])]) {
            auto it = out.from_host.find(w);
            if (it != out.from_host.end() && static_cast<int>(i) < it->second)
                edges.emplace_back(static_cast<int>(i), it->second);
        }
    out.graph = FiniteGraph::from_edges(static_cast<int>(verts.size()), edges);
    for (size_t i = 0; i < verts.size(); ++i) {
        auto it = g.labels.find(verts[i]);
        if (it != g.labels.end()) out.graph.labels[static_cast<int>(i)] = it->second;
    }
    return out;
}

inline std::vector<int> ball(const FiniteGraph& g, int center, int radius) {
    GeodesicDag dag = shortest_path_data(g, center);
    std::vector<int> out;
    for (int v = 0; v < g.n; ++v)
        if (dag.dist[static_cast<size_t>(v)] >= 0 && dag.dist[static_cast<size_t>(v)] <= radius) out.push_back(v);
    return out;
}

// -1 on disconnected graphs.
inline int diameter(const FiniteGraph& g) {
    int best = 0;
    for (int v = 0; v < g.n; ++v) {
        GeodesicDag dag = shortest_path_data(g, v);
        for (int w = 0; w < g.n; ++w) {
            if (dag.dist[static_cast<size_t>(w)] < 0) return -1;
            best = std::max(best, dag.dist[static_cast<size_t>(w)]);
        }
    }
    return best;
}

// Common small graphs used throughout the tests and fixtures.
inline FiniteGraph path_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return FiniteGraph::from_edges(n, e);
}

inline FiniteGraph cycle_graph(int n) {
    if (n < 3) throw InputError("cycle needs at least 3 vertices");
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return FiniteGraph::from_edges(n, e);
}

inline FiniteGraph complete_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return FiniteGraph::from_edges(n, e);
}

inline FiniteGraph grid_graph(int rows, int cols) {
    std::vector<std::pair<int, int>> e;
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) e.emplace_back(id(r, c), id(r, c + 1));
            if (r + 1 < rows) e.emplace_back(id(r, c), id(r + 1, c));
        }
    return FiniteGraph::from_edges(rows * cols, e);
}

}  // namespace amalg
