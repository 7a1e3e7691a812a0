#pragma once

// Thin-triangle measurements. delta_thin is exact over every choice of all
// three triangle sides: for a base side u-w and a vertex v on it, the two
// other sides are chosen independently, so the worst distance from v to their
// union is min over the two of the max over geodesic choices; that inner max
// is a bottleneck value over the geodesic dag. The experiment routes walks
// through the parts of a build and checks them against a quasi-geodesic bound
// derived from the adhesion spread inside the factors.

#include <array>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "build.hpp"
#include "graph.hpp"
#include "treedecomp.hpp"

namespace amalg {

struct DeltaReport {
    int delta = 0;
    std::array<int, 3> triple{-1, -1, -1};  // corners of a worst triangle
    int vertex = -1;                        // point on the base side realizing delta
};

// Exact worst-case thinness over all geodesic triangles, all side choices.
inline DeltaReport delta_thin(const FiniteGraph& g) {
    if (g.n == 0) throw InputError("empty graph");
    if (!connected(g)) throw InputError("thinness needs a connected graph");
    int n = g.n;

    std::vector<std::vector<int>> dist(static_cast<size_t>(n));
    std::vector<std::vector<int>> order(static_cast<size_t>(n));  // vertices by distance from a
    std::vector<GeodesicDag> dags;
    dags.reserve(static_cast<size_t>(n));
    for (int a = 0; a < n; ++a) {
        dags.push_back(shortest_path_data(g, a));
        dist[static_cast<size_t>(a)] = dags.back().dist;
        std::vector<int> ord(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) ord[static_cast<size_t>(i)] = i;
        std::sort(ord.begin(), ord.end(), [&](int x, int y) {
            int dx = dags.back().dist[static_cast<size_t>(x)], dy = dags.back().dist[static_cast<size_t>(y)];
            return dx != dy ? dx < dy : x < y;
        });
        order[static_cast<size_t>(a)] = std::move(ord);
    }

    // M[v][a][b]: over geodesics P from a to b, the largest min-distance from
    // v to P. One bottleneck pass over the dag of a per (v, a) covers all b.
    std::vector<int> M(static_cast<size_t>(n) * static_cast<size_t>(n) * static_cast<size_t>(n), 0);
    auto at = [n, &M](int v, int a, int b) -> int& {
        return M[(static_cast<size_t>(v) * static_cast<size_t>(n) + static_cast<size_t>(a)) * static_cast<size_t>(n) +
                 static_cast<size_t>(b)];
    };
    std::vector<int> f(static_cast<size_t>(n));
    for (int a = 0; a < n; ++a)
        for (int v = 0; v < n; ++v) {
            for (int p : order[static_cast<size_t>(a)]) {
                int best = -1;
                for (int q : dags[static_cast<size_t>(a)].preds[static_cast<size_t>(p)])
                    best = std::max(best, f[static_cast<size_t>(q)]);
                int dv = dist[static_cast<size_t>(v)][static_cast<size_t>(p)];
                f[static_cast<size_t>(p)] = p == a ? dv : std::min(dv, best);
                at(v, a, p) = f[static_cast<size_t>(p)];
            }
        }

    DeltaReport rep;
    for (int x1 = 0; x1 < n; ++x1)
        for (int x2 = x1; x2 < n; ++x2) {
            int d12 = dist[static_cast<size_t>(x1)][static_cast<size_t>(x2)];
            for (int v = 0; v < n; ++v) {
                if (dist[static_cast<size_t>(x1)][static_cast<size_t>(v)] +
                        dist[static_cast<size_t>(x2)][static_cast<size_t>(v)] !=
                    d12)
                    continue;
                for (int x3 = 0; x3 < n; ++x3) {
                    int m = std::min(at(v, x1, x3), at(v, x2, x3));
                    if (m > rep.delta) {
                        rep.delta = m;
                        rep.triple = {x1, x2, x3};
                        rep.vertex = v;
                    }
                }
            }
        }
    return rep;
}

struct QuasiGeodesicReport {
    bool ok = true;
    double gamma = 1.0;
    double c = 0.0;
    int pairs = 0;
    int worstFrom = -1, worstTo = -1;  // walk indices of the worst pair
    double worstSlack = -std::numeric_limits<double>::infinity();
};

// Walk index pairs must satisfy (j - i) <= gamma * d(w_i, w_j) + c.
inline QuasiGeodesicReport quasi_geodesic_check(const FiniteGraph& g, const std::vector<int>& walk, double gamma,
                                                double c) {
    if (walk.empty()) throw InputError("empty walk");
    for (size_t i = 0; i < walk.size(); ++i) {
        int v = walk[i];
        if (v < 0 || v >= g.n) throw InputError("walk vertex out of range");
        if (i > 0 && walk[i - 1] != v && !g.has_edge(walk[i - 1], v))
            throw InputError("walk steps between non-adjacent vertices");
    }
    QuasiGeodesicReport rep;
    rep.gamma = gamma;
    rep.c = c;
    std::map<int, std::vector<int>> distFrom;
    for (int v : walk)
        if (!distFrom.count(v)) distFrom[v] = shortest_path_data(g, v).dist;
    for (size_t i = 0; i < walk.size(); ++i)
        for (size_t j = i + 1; j < walk.size(); ++j) {
            int d = distFrom[walk[i]][static_cast<size_t>(walk[j])];
            if (d < 0) throw InputError("walk endpoints disconnected");
            double slack = static_cast<double>(j - i) - gamma * d - c;
            ++rep.pairs;
            if (slack > rep.worstSlack) {
                rep.worstSlack = slack;
                rep.worstFrom = static_cast<int>(i);
                rep.worstTo = static_cast<int>(j);
            }
        }
    if (rep.worstSlack > 1e-9) rep.ok = false;
    return rep;
}

namespace detail {

// Lexicographically lowest geodesic from the dag source to v.
inline std::vector<int> lex_geodesic(const GeodesicDag& dag, int v) {
    std::vector<int> rev{v};
    int cur = v;
    while (cur != dag.source) {
        int best = dag.preds[static_cast<size_t>(cur)].front();
        for (int q : dag.preds[static_cast<size_t>(cur)])
            best = std::min(best, q);
        rev.push_back(best);
        cur = best;
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
}

}  // namespace detail

// Walk from u to v routed along the decomposition: geodesic hops inside each
// part, crossing each adhesion set at the vertex that keeps part-distance
// plus remaining host-distance smallest. Empty when a part is disconnected.
inline std::optional<std::vector<int>> tree_route_walk(const BuildResult& build, int u, int v) {
    const FiniteGraph& host = build.patch.graph;
    const TreeDecomposition& td = build.inducedTd;
    auto nodeOf = [&](int h) { return build.provenance[static_cast<size_t>(h)].front().first; };
    int tu = nodeOf(u), tv = nodeOf(v);
    std::vector<int> path = tree_path(td.tree, tu, tv);
    std::vector<int> distV = shortest_path_data(host, v).dist;

    std::vector<int> walk{u};
    int w = u;
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        int a = path[i], b = path[i + 1];
        std::vector<int> X = adhesion_set(td, a, b);
        InducedSubgraph part = induced_subgraph(host, td.part(a));
        GeodesicDag dag = shortest_path_data(part.graph, part.from_host.at(w));
        int bestX = -1;
        long bestScore = 0;
        for (int x : X) {
            int lx = part.from_host.at(x);
            if (dag.dist[static_cast<size_t>(lx)] < 0) continue;
            long score = static_cast<long>(dag.dist[static_cast<size_t>(lx)]) + distV[static_cast<size_t>(x)];
            if (bestX < 0 || score < bestScore || (score == bestScore && x < bestX)) {
                bestX = x;
                bestScore = score;
            }
        }
        if (bestX < 0) return std::nullopt;
        for (int lv : detail::lex_geodesic(dag, part.from_host.at(bestX)))
            if (part.to_host[static_cast<size_t>(lv)] != w) walk.push_back(part.to_host[static_cast<size_t>(lv)]);
        w = bestX;
    }
    InducedSubgraph last = induced_subgraph(host, td.part(path.back()));
    GeodesicDag dag = shortest_path_data(last.graph, last.from_host.at(w));
    if (dag.dist[static_cast<size_t>(last.from_host.at(v))] < 0) return std::nullopt;
    for (int lv : detail::lex_geodesic(dag, last.from_host.at(v)))
        if (last.to_host[static_cast<size_t>(lv)] != w) walk.push_back(last.to_host[static_cast<size_t>(lv)]);
    return walk;
}

struct HyperbolicityExperiment {
    int radius = 0;
    int innerRadius = 0;
    int adhesionSpread = 0;   // largest in-factor adhesion-set diameter
    double gamma = 1.0;       // quasi-geodesic constant used: max(1, spread / 2)
    int sampleRadius = 0;     // ball radius the pairs are drawn from
    int sampleSize = 0;       // vertices in that ball
    DeltaReport delta;        // thinness of the sampled ball, corners in host ids
    int pairsTested = 0;
    int violations = 0;
    double worstSlack = -std::numeric_limits<double>::infinity();
    std::array<int, 2> worstPair{-1, -1};
    std::string note;
};

// Builds at the given radius, measures the thinness constant of the deep
// interior and tests decomposition-routed walks between interior pairs
// against the quasi-geodesic bound with gamma = max(1, spread/2), c = 0.
inline HyperbolicityExperiment amalgam_hyperbolicity_experiment(const AmalgamationSpec& spec, int radius,
                                                                std::uint32_t seed = 1, int pairCap = 2000) {
    HyperbolicityExperiment rep;
    rep.radius = radius;
    BuildResult build = build_amalgam(spec, build_tree_patch(spec, radius, seed));
    rep.innerRadius = build.patch.innerRadius;

    int spread = 0;
    auto measure = [&](const FiniteGraph& g, const std::vector<std::vector<int>>& fam) {
        for (const auto& s : fam)
            for (size_t i = 0; i < s.size(); ++i) {
                GeodesicDag dag = shortest_path_data(g, s[i]);
                for (size_t j = i + 1; j < s.size(); ++j) {
                    int d = dag.dist[static_cast<size_t>(s[j])];
                    spread = std::max(spread, d < 0 ? g.n : d);
                }
            }
    };
    measure(spec.g1, spec.sets1);
    if (!spec.type2) measure(spec.g2, spec.sets2);
    rep.adhesionSpread = spread;
    rep.gamma = std::max(1.0, spread / 2.0);

    rep.sampleRadius = std::max(0, rep.innerRadius - spread);
    std::vector<int> region = ball(build.patch.graph, build.rootVertex, rep.sampleRadius);
    rep.sampleSize = static_cast<int>(region.size());
    InducedSubgraph inner = induced_subgraph(build.patch.graph, region);
    rep.delta = delta_thin(inner.graph);
    if (rep.delta.vertex >= 0) {
        for (int& corner : rep.delta.triple) corner = inner.to_host[static_cast<size_t>(corner)];
        rep.delta.vertex = inner.to_host[static_cast<size_t>(rep.delta.vertex)];
    }

    long totalPairs = static_cast<long>(region.size()) * (static_cast<long>(region.size()) - 1) / 2;
    long stride = std::max(1L, (totalPairs + pairCap - 1) / pairCap);
    long counter = 0;
    for (size_t i = 0; i < region.size(); ++i)
        for (size_t j = i + 1; j < region.size(); ++j) {
            if (counter++ % stride != 0) continue;
            int u = region[i], v = region[j];
            std::optional<std::vector<int>> walk = tree_route_walk(build, u, v);
            if (!walk) {
                ++rep.pairsTested;
                ++rep.violations;
                rep.note = "routing failed for a pair";
                continue;
            }
            QuasiGeodesicReport qg = quasi_geodesic_check(build.patch.graph, *walk, rep.gamma, 0.0);
            ++rep.pairsTested;
            if (!qg.ok) ++rep.violations;
            if (qg.worstSlack > rep.worstSlack) {
                rep.worstSlack = qg.worstSlack;
                rep.worstPair = {u, v};
            }
        }
    return rep;
}

}  // namespace amalg
