#pragma once

// Desk-scale stand-ins for ends: tight separators, the regions a separator
// cuts off inside a patch, and Menger-style degree estimates for those
// regions. A region "reaches boundary" when it still touches the truncation
// fringe, which is the finite-window evidence for an end behind it.

#include <vector>

#include "graph.hpp"
#include "patch.hpp"

namespace amalg {

struct TightSeparator {
    std::vector<int> vertices;
    // Components of g - vertices witnessing tightness: every separator vertex
    // has a neighbour in each of these. At least two entries.
    std::vector<std::vector<int>> sides;
};

struct TightSeparatorList {
    std::vector<TightSeparator> separators;  // size ascending, then lexicographic
    bool truncated = false;                  // enumeration cap hit
};

// All tight separators of size <= k: S such that g - S has at least two
// components in each of which every vertex of S has a neighbour. Vertices in
// `forbidden` never enter a separator (callers pass patch boundaries so that
// truncation artifacts cannot witness splits).
inline TightSeparatorList tight_separators(const FiniteGraph& g, int k, size_t cap = 100000,
                                           const std::vector<char>& forbidden = {}) {
    if (k < 0) throw InputError("separator size bound must be non-negative");
    if (!forbidden.empty() && static_cast<int>(forbidden.size()) != g.n)
        throw InputError("forbidden mask size disagrees with graph");

    TightSeparatorList out;
    std::vector<int> allowed;
    for (int v = 0; v < g.n; ++v)
        if (forbidden.empty() || !forbidden[static_cast<size_t>(v)]) allowed.push_back(v);

    size_t examined = 0;
    std::vector<int> pick;
    auto test = [&](const std::vector<int>& sep) {
        std::vector<int> comp = components_without(g, sep);
        int nComp = 0;
        for (int c : comp) nComp = std::max(nComp, c + 1);
        if (nComp < 2) return;
        // A component qualifies when every separator vertex has a neighbour in it.
        std::vector<char> qualifies(static_cast<size_t>(nComp), 1);
        for (int s : sep) {
            std::vector<char> touched(static_cast<size_t>(nComp), 0);
            for (int w : g.adj[static_cast<size_t>(s)])
                if (comp[static_cast<size_t>(w)] >= 0) touched[static_cast<size_t>(comp[static_cast<size_t>(w)])] = 1;
            for (int c = 0; c < nComp; ++c)
                if (!touched[static_cast<size_t>(c)]) qualifies[static_cast<size_t>(c)] = 0;
        }
        std::vector<std::vector<int>> sides;
        for (int c = 0; c < nComp; ++c) {
            if (!qualifies[static_cast<size_t>(c)]) continue;
            std::vector<int> side;
            for (int v = 0; v < g.n; ++v)
                if (comp[static_cast<size_t>(v)] == c) side.push_back(v);
            sides.push_back(std::move(side));
        }
        if (sides.size() >= 2) out.separators.push_back({sep, std::move(sides)});
    };

    // Size-ascending lexicographic enumeration over allowed vertices.
    auto choose = [&](auto&& self, size_t start, int remaining) -> void {
        if (out.truncated) return;
        if (remaining == 0) {
            if (examined == cap) {
                out.truncated = true;
                return;
            }
            ++examined;
            test(pick);
            return;
        }
        for (size_t i = start; i < allowed.size(); ++i) {
            pick.push_back(allowed[i]);
            self(self, i + 1, remaining - 1);
            pick.pop_back();
            if (out.truncated) return;
        }
    };
    for (int size = 1; size <= k && !out.truncated; ++size) choose(choose, 0, size);
    return out;
}

struct EndRegion {
    std::vector<int> separator;
    std::vector<int> vertices;
    bool reachesBoundary = false;
};

// Components of patch minus S, each tagged with whether it still touches the
// truncation fringe. Regions that do are the scale-k evidence for ends.
inline std::vector<EndRegion> ends_at_scale(const Patch& p, const std::vector<int>& separator) {
    std::vector<int> comp = components_without(p.graph, separator);
    int nComp = 0;
    for (int c : comp) nComp = std::max(nComp, c + 1);
    std::vector<EndRegion> out(static_cast<size_t>(nComp));
    for (auto& r : out) r.separator = separator;
    for (int v = 0; v < p.graph.n; ++v) {
        int c = comp[static_cast<size_t>(v)];
        if (c < 0) continue;
        out[static_cast<size_t>(c)].vertices.push_back(v);
        if (p.is_boundary(v)) out[static_cast<size_t>(c)].reachesBoundary = true;
    }
    return out;
}

inline int boundary_reaching_count(const std::vector<EndRegion>& regions) {
    int c = 0;
    for (const auto& r : regions)
        if (r.reachesBoundary) ++c;
    return c;
}

// Maximum number of vertex-disjoint paths from the core set to the region's
// boundary vertices, staying inside region + core. Unit vertex capacities via
// vertex splitting; core and the super-terminals are uncapacitated.
inline int end_degree_estimate(const Patch& p, const EndRegion& region, const std::vector<int>& core) {
    std::vector<char> inRegion(static_cast<size_t>(p.graph.n), 0);
    for (int v : region.vertices) inRegion[static_cast<size_t>(v)] = 1;
    std::vector<char> isCore(static_cast<size_t>(p.graph.n), 0);
    for (int v : core) {
        if (v < 0 || v >= p.graph.n) throw InputError("core vertex out of range");
        isCore[static_cast<size_t>(v)] = 1;
    }
    std::vector<int> targets;
    for (int v : region.vertices)
        if (p.is_boundary(v) && !isCore[static_cast<size_t>(v)]) targets.push_back(v);
    if (targets.empty()) return 0;

    // Nodes: 2v = v_in, 2v+1 = v_out, then source S and sink T.
    int S = 2 * p.graph.n, T = 2 * p.graph.n + 1;
    int N = 2 * p.graph.n + 2;
    std::vector<std::vector<int>> capTo(static_cast<size_t>(N), std::vector<int>(static_cast<size_t>(N), 0));
    auto usable = [&](int v) { return inRegion[static_cast<size_t>(v)] || isCore[static_cast<size_t>(v)]; };
    for (int v = 0; v < p.graph.n; ++v) {
        if (!usable(v)) continue;
        capTo[static_cast<size_t>(2 * v)][static_cast<size_t>(2 * v + 1)] = isCore[static_cast<size_t>(v)] ? p.graph.n : 1;
        for (int w : p.graph.adj[static_cast<size_t>(v)])
            if (usable(w)) capTo[static_cast<size_t>(2 * v + 1)][static_cast<size_t>(2 * w)] = p.graph.n;
    }
    for (int v : core)
        capTo[static_cast<size_t>(S)][static_cast<size_t>(2 * v)] = p.graph.n;
    for (int v : targets) capTo[static_cast<size_t>(2 * v + 1)][static_cast<size_t>(T)] = 1;

    // BFS augmenting paths; unit capacities keep the flow value tiny.
    int flow = 0;
    while (true) {
        std::vector<int> prev(static_cast<size_t>(N), -1);
        std::queue<int> q;
        prev[static_cast<size_t>(S)] = S;
        q.push(S);
        while (!q.empty() && prev[static_cast<size_t>(T)] < 0) {
            int x = q.front();
            q.pop();
            for (int y = 0; y < N; ++y)
                if (prev[static_cast<size_t>(y)] < 0 && capTo[static_cast<size_t>(x)][static_cast<size_t>(y)] > 0) {
                    prev[static_cast<size_t>(y)] = x;
                    q.push(y);
                }
        }
        if (prev[static_cast<size_t>(T)] < 0) break;
        for (int y = T; y != S; y = prev[static_cast<size_t>(y)]) {
            int x = prev[static_cast<size_t>(y)];
            --capTo[static_cast<size_t>(x)][static_cast<size_t>(y)];
            ++capTo[static_cast<size_t>(y)][static_cast<size_t>(x)];
        }
        ++flow;
    }
    return flow;
}

}  // namespace amalg
