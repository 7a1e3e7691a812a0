#pragma once

// Tree decompositions: the three axioms plus the separation property, the
// geodesic closure that makes adhesion sets connected, edge contraction along
// a kept set, adhesion subtree diameters, and the desk-scale basicness check
// (finite adhesion, one edge orbit, an adhesion set that splits the patch
// boundary into two or more reachable sides).

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ends.hpp"
#include "graph.hpp"
#include "patch.hpp"
#include "perm.hpp"

namespace amalg {

struct TreeDecomposition {
    FiniteGraph tree;
    std::vector<std::vector<int>> parts;  // parts[t] sorted ascending

    const std::vector<int>& part(int t) const { return parts[static_cast<size_t>(t)]; }
};

inline std::vector<int> sorted_intersection(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline std::vector<int> adhesion_set(const TreeDecomposition& td, int t1, int t2) {
    return sorted_intersection(td.part(t1), td.part(t2));
}

inline bool is_tree(const FiniteGraph& t) {
    if (t.n == 0) return false;
    return t.edge_count() == t.n - 1 && connected(t);
}

// Unique path between two nodes of a tree, endpoints included.
inline std::vector<int> tree_path(const FiniteGraph& tree, int a, int b) {
    GeodesicDag dag = shortest_path_data(tree, a);
    std::vector<int> path{b};
    int cur = b;
    while (cur != a) {
        cur = dag.preds[static_cast<size_t>(cur)].front();
        path.push_back(cur);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

struct TdViolation {
    std::string axiom;  // "T1", "T2", "T3", "separation"
    std::string message;
    std::vector<int> data;  // vertices / nodes involved, meaning depends on axiom
};

struct TdReport {
    std::vector<TdViolation> items;
    bool ok() const { return items.empty(); }
};

// Axioms (union covers the graph, every edge inside a part, parts containing a
// fixed vertex form a subtree) plus the separation property: each adhesion set
// separates the union of its two sides.
inline TdReport verify_td(const FiniteGraph& g, const TreeDecomposition& td) {
    if (!is_tree(td.tree)) throw InputError("decomposition tree is not a tree");
    if (td.parts.size() != static_cast<size_t>(td.tree.n))
        throw InputError("part count disagrees with tree node count");
    for (const auto& p : td.parts) {
        if (!std::is_sorted(p.begin(), p.end())) throw InputError("part vertex list not sorted");
        for (int v : p)
            if (v < 0 || v >= g.n) throw InputError("part vertex out of range");
    }

    TdReport rep;
    std::vector<char> covered(static_cast<size_t>(g.n), 0);
    for (const auto& p : td.parts)
        for (int v : p) covered[static_cast<size_t>(v)] = 1;
    for (int v = 0; v < g.n; ++v)
        if (!covered[static_cast<size_t>(v)])
            rep.items.push_back({"T1", "vertex in no part", {v}});

    for (auto [u, v] : g.edge_list()) {
        bool inside = false;
        for (const auto& p : td.parts)
            if (std::binary_search(p.begin(), p.end(), u) && std::binary_search(p.begin(), p.end(), v)) {
                inside = true;
                break;
            }
        if (!inside) rep.items.push_back({"T2", "edge inside no part", {u, v}});
    }

    // (T3) as the path condition: for every vertex, any node on the tree path
    // between two nodes containing it must contain it too.
    for (int v = 0; v < g.n; ++v) {
        std::vector<int> holders;
        for (int t = 0; t < td.tree.n; ++t)
            if (std::binary_search(td.part(t).begin(), td.part(t).end(), v)) holders.push_back(t);
        if (holders.size() < 2) continue;
        for (size_t i = 1; i < holders.size(); ++i) {
            for (int mid : tree_path(td.tree, holders[0], holders[i])) {
                if (!std::binary_search(td.part(mid).begin(), td.part(mid).end(), v)) {
                    rep.items.push_back({"T3", "vertex missing on connecting path", {v, holders[0], holders[i], mid}});
                    break;
                }
            }
        }
    }

    // Separation: sides of a tree edge may only meet through the adhesion set.
    for (auto [t1, t2] : td.tree.edge_list()) {
        std::vector<int> adh = adhesion_set(td, t1, t2);
        // Split tree nodes by deleting the edge.
        std::vector<char> sideOf(static_cast<size_t>(td.tree.n), 0);
        {
            std::vector<char> seen(static_cast<size_t>(td.tree.n), 0);
            std::queue<int> q;
            q.push(t1);
            seen[static_cast<size_t>(t1)] = 1;
            while (!q.empty()) {
                int x = q.front();
                q.pop();
                for (int y : td.tree.adj[static_cast<size_t>(x)]) {
                    if ((x == t1 && y == t2) || (x == t2 && y == t1)) continue;
                    if (!seen[static_cast<size_t>(y)]) {
                        seen[static_cast<size_t>(y)] = 1;
                        q.push(y);
                    }
                }
            }
            for (int t = 0; t < td.tree.n; ++t) sideOf[static_cast<size_t>(t)] = seen[static_cast<size_t>(t)] ? 1 : 2;
        }
        std::vector<char> inA(static_cast<size_t>(g.n), 0), inB(static_cast<size_t>(g.n), 0), inX(static_cast<size_t>(g.n), 0);
        for (int v : adh) inX[static_cast<size_t>(v)] = 1;
        for (int t = 0; t < td.tree.n; ++t)
            for (int v : td.part(t)) (sideOf[static_cast<size_t>(t)] == 1 ? inA : inB)[static_cast<size_t>(v)] = 1;
        for (auto [u, v] : g.edge_list()) {
            bool uA = inA[static_cast<size_t>(u)] && !inX[static_cast<size_t>(u)];
            bool uB = inB[static_cast<size_t>(u)] && !inX[static_cast<size_t>(u)];
            bool vA = inA[static_cast<size_t>(v)] && !inX[static_cast<size_t>(v)];
            bool vB = inB[static_cast<size_t>(v)] && !inX[static_cast<size_t>(v)];
            if ((uA && vB) || (uB && vA))
                rep.items.push_back({"separation", "edge crosses an adhesion set without meeting it", {u, v, t1, t2}});
        }
    }
    return rep;
}

// Enlarges every part by all geodesics between vertices of any adhesion set
// the part contains. One pass over the original decomposition's adhesion
// sets; on a connected graph the result has connected adhesion sets.
inline TreeDecomposition geodesic_closure(const FiniteGraph& g, const TreeDecomposition& td) {
    if (!connected(g)) throw InputError("geodesic closure needs a connected graph");
    std::set<std::vector<int>> adhesions;
    for (auto [t1, t2] : td.tree.edge_list()) adhesions.insert(adhesion_set(td, t1, t2));

    std::map<int, GeodesicDag> dagCache;
    auto dag_of = [&](int u) -> const GeodesicDag& {
        auto it = dagCache.find(u);
        if (it == dagCache.end()) it = dagCache.emplace(u, shortest_path_data(g, u)).first;
        return it->second;
    };

    TreeDecomposition out;
    out.tree = td.tree;
    out.parts.reserve(td.parts.size());
    for (const auto& p : td.parts) {
        std::set<int> enlarged(p.begin(), p.end());
        for (const auto& X : adhesions) {
            // Containment is judged against the original part, not the growing one.
            if (!std::includes(p.begin(), p.end(), X.begin(), X.end())) continue;
            for (size_t i = 0; i < X.size(); ++i)
                for (size_t j = i + 1; j < X.size(); ++j) {
                    const GeodesicDag& du = dag_of(X[i]);
                    const GeodesicDag& dv = dag_of(X[j]);
                    for (int w : interval(du, dv, X[i], X[j])) enlarged.insert(w);
                }
        }
        out.parts.emplace_back(enlarged.begin(), enlarged.end());
    }
    return out;
}

struct ConnectedPartsReport {
    bool allAdhesionsConnected = true;
    std::vector<int> adhesionWitness;  // a disconnected adhesion set, if any
    bool allPartsConnected = true;
    int partWitness = -1;  // a node with disconnected part, if any
    // If the graph is connected and every adhesion set is connected, every
    // part must be connected; false here means that implication failed.
    bool implicationHolds = true;
};

inline bool induces_connected(const FiniteGraph& g, const std::vector<int>& verts) {
    if (verts.empty()) return true;
    return connected(induced_subgraph(g, verts).graph);
}

inline ConnectedPartsReport check_connected_parts(const FiniteGraph& g, const TreeDecomposition& td) {
    ConnectedPartsReport rep;
    for (auto [t1, t2] : td.tree.edge_list()) {
        std::vector<int> adh = adhesion_set(td, t1, t2);
        if (!induces_connected(g, adh)) {
            rep.allAdhesionsConnected = false;
            rep.adhesionWitness = adh;
            break;
        }
    }
    for (int t = 0; t < td.tree.n; ++t)
        if (!induces_connected(g, td.part(t))) {
            rep.allPartsConnected = false;
            rep.partWitness = t;
            break;
        }
    if (connected(g) && rep.allAdhesionsConnected && !rep.allPartsConnected) rep.implicationHolds = false;
    return rep;
}

struct ContractResult {
    TreeDecomposition td;
    std::vector<int> nodeMap;  // old node -> new node
    bool adhesionsPreserved = true;
};

// Collapses every component of (tree minus kept edges) into one node whose
// part is the union of the collapsed parts. Kept edges survive with their
// adhesion sets unchanged.
inline ContractResult contract_edges(const TreeDecomposition& td, const std::vector<std::pair<int, int>>& keep) {
    std::set<std::pair<int, int>> kept;
    for (auto [a, b] : keep) {
        if (a < 0 || a >= td.tree.n || b < 0 || b >= td.tree.n || !td.tree.has_edge(a, b))
            throw InputError("kept edge is not a tree edge");
        kept.insert({std::min(a, b), std::max(a, b)});
    }
    ContractResult out;
    out.nodeMap.assign(static_cast<size_t>(td.tree.n), -1);
    int next = 0;
    for (int s = 0; s < td.tree.n; ++s) {
        if (out.nodeMap[static_cast<size_t>(s)] >= 0) continue;
        std::queue<int> q;
        out.nodeMap[static_cast<size_t>(s)] = next;
        q.push(s);
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            for (int y : td.tree.adj[static_cast<size_t>(x)]) {
                if (kept.count({std::min(x, y), std::max(x, y)})) continue;
                if (out.nodeMap[static_cast<size_t>(y)] < 0) {
                    out.nodeMap[static_cast<size_t>(y)] = next;
                    q.push(y);
                }
            }
        }
        ++next;
    }
    std::vector<std::set<int>> merged(static_cast<size_t>(next));
    for (int t = 0; t < td.tree.n; ++t)
        merged[static_cast<size_t>(out.nodeMap[static_cast<size_t>(t)])].insert(td.part(t).begin(), td.part(t).end());
    std::vector<std::pair<int, int>> newEdges;
    for (auto [a, b] : kept)
        newEdges.emplace_back(out.nodeMap[static_cast<size_t>(a)], out.nodeMap[static_cast<size_t>(b)]);
    out.td.tree = FiniteGraph::from_edges(next, newEdges);
    out.td.parts.reserve(static_cast<size_t>(next));
    for (auto& s : merged) out.td.parts.emplace_back(s.begin(), s.end());
    for (auto [a, b] : kept) {
        std::vector<int> before = adhesion_set(td, a, b);
        std::vector<int> after =
            adhesion_set(out.td, out.nodeMap[static_cast<size_t>(a)], out.nodeMap[static_cast<size_t>(b)]);
        if (before != after) out.adhesionsPreserved = false;
    }
    return out;
}

struct AdhesionSubtree {
    std::vector<int> set;
    int diameter = 0;  // edges, over the subtree of nodes whose part contains the set
    bool exceedsTwo = false;
};

inline std::vector<AdhesionSubtree> adhesion_subtree_diameters(const TreeDecomposition& td) {
    std::set<std::vector<int>> adhesions;
    for (auto [t1, t2] : td.tree.edge_list()) adhesions.insert(adhesion_set(td, t1, t2));
    std::vector<AdhesionSubtree> out;
    for (const auto& X : adhesions) {
        std::vector<int> holders;
        for (int t = 0; t < td.tree.n; ++t)
            if (std::includes(td.part(t).begin(), td.part(t).end(), X.begin(), X.end())) holders.push_back(t);
        InducedSubgraph sub = induced_subgraph(td.tree, holders);
        int diam = diameter(sub.graph);
        if (diam < 0) diam = td.tree.n;  // disconnected holder set: axiom breakage, flag loudly
        out.push_back({X, diam, diam > 2});
    }
    return out;
}

struct NodeMapResult {
    PartialMap nodeMap;
    // Nodes whose image part matched several parts; lowest id was chosen.
    std::vector<std::vector<int>> ambiguities;  // {node, chosen, alternative...}
    std::optional<TdViolation> failure;         // generator does not permute parts
};

// Tree action induced by a host map: node t goes to the node whose part is
// the exact image of part(t). Nodes with partially mapped parts stay undefined.
inline NodeMapResult induced_node_map(const TreeDecomposition& td, const PartialMap& hostMap) {
    std::map<std::vector<int>, std::vector<int>> byPart;
    for (int t = 0; t < td.tree.n; ++t) byPart[td.part(t)].push_back(t);

    NodeMapResult out;
    out.nodeMap.img.assign(static_cast<size_t>(td.tree.n), kUndef);
    for (int t = 0; t < td.tree.n; ++t) {
        std::vector<int> image;
        bool whole = true;
        for (int v : td.part(t)) {
            if (!hostMap.defined(v)) {
                whole = false;
                break;
            }
            image.push_back(hostMap(v));
        }
        if (!whole) continue;
        std::sort(image.begin(), image.end());
        auto it = byPart.find(image);
        if (it == byPart.end()) {
            out.failure = TdViolation{"action", "part image is not a part", {t}};
            continue;
        }
        out.nodeMap.img[static_cast<size_t>(t)] = it->second.front();
        if (it->second.size() > 1) {
            std::vector<int> amb{t, it->second.front()};
            amb.insert(amb.end(), it->second.begin() + 1, it->second.end());
            out.ambiguities.push_back(std::move(amb));
        }
    }
    return out;
}

struct BasicReport {
    bool partMapsOk = true;
    std::optional<TdViolation> partMapFailure;
    int edgeOrbitCountAtScale = 0;
    bool oneEdgeOrbit = false;
    int maxAdhesionSize = 0;
    // Surrogate for distinguishing two ends: some adhesion set splits the
    // patch into two or more boundary-reaching regions.
    bool endSurrogate = false;
    std::pair<int, int> surrogateEdge{-1, -1};
    bool basicAtScale = false;
};

inline BasicReport is_basic(const Patch& p, const TreeDecomposition& td, const Action& hostAction) {
    BasicReport rep;
    std::vector<PartialMap> nodeMaps;
    for (const auto& gen : hostAction.generators) {
        NodeMapResult r = induced_node_map(td, gen);
        if (r.failure) {
            rep.partMapsOk = false;
            rep.partMapFailure = r.failure;
        }
        nodeMaps.push_back(r.nodeMap);
        nodeMaps.push_back(r.nodeMap.inverse());
    }

    // Orbit closure on tree edges under the induced node maps.
    auto edges = td.tree.edge_list();
    std::map<std::pair<int, int>, int> edgeId;
    for (size_t i = 0; i < edges.size(); ++i) edgeId[edges[i]] = static_cast<int>(i);
    std::vector<int> cls(edges.size());
    for (size_t i = 0; i < edges.size(); ++i) cls[i] = static_cast<int>(i);
    auto find = [&](auto&& self, int x) -> int { return cls[static_cast<size_t>(x)] == x ? x : cls[static_cast<size_t>(x)] = self(self, cls[static_cast<size_t>(x)]); };
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& nm : nodeMaps)
            for (size_t i = 0; i < edges.size(); ++i) {
                auto [a, b] = edges[i];
                if (!nm.defined(a) || !nm.defined(b)) continue;
                int ia = nm(a), ib = nm(b);
                auto it = edgeId.find({std::min(ia, ib), std::max(ia, ib)});
                if (it == edgeId.end()) continue;  // image not a tree edge; part map failure already noted
                int ra = find(find, static_cast<int>(i)), rb = find(find, it->second);
                if (ra != rb) {
                    cls[static_cast<size_t>(ra)] = rb;
                    changed = true;
                }
            }
    }
    std::set<int> roots;
    for (size_t i = 0; i < edges.size(); ++i) roots.insert(find(find, static_cast<int>(i)));
    rep.edgeOrbitCountAtScale = static_cast<int>(roots.size());
    rep.oneEdgeOrbit = roots.size() == 1;

    for (auto [t1, t2] : edges) {
        std::vector<int> adh = adhesion_set(td, t1, t2);
        rep.maxAdhesionSize = std::max(rep.maxAdhesionSize, static_cast<int>(adh.size()));
        if (!rep.endSurrogate && boundary_reaching_count(ends_at_scale(p, adh)) >= 2) {
            rep.endSurrogate = true;
            rep.surrogateEdge = {t1, t2};
        }
    }
    rep.basicAtScale = rep.partMapsOk && rep.oneEdgeOrbit && rep.endSurrogate;
    return rep;
}

}  // namespace amalg
