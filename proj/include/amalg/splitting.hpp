#pragma once

// From a symmetric patch to gluing data and back: orient the edges of a basic
// tree decomposition into two directed orbits, read off factors, adhesion
// sets and bonding maps at a base edge, search for separator orbits that are
// nested and assemble them into a decomposition, and iterate the whole
// pipeline into a terminal factorisation.

#include <array>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "amalgam_spec.hpp"
#include "build.hpp"
#include "ends.hpp"
#include "graph.hpp"
#include "patch.hpp"
#include "perm.hpp"
#include "treedecomp.hpp"

namespace amalg {

namespace detail {

// Distance of every host vertex to the patch boundary; n+1 when there is none.
inline std::vector<int> boundary_distances(const Patch& p) {
    std::vector<int> dist(static_cast<size_t>(p.graph.n), p.graph.n + 1);
    std::queue<int> q;
    for (int v = 0; v < p.graph.n; ++v)
        if (p.is_boundary(v)) {
            dist[static_cast<size_t>(v)] = 0;
            q.push(v);
        }
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int w : p.graph.adj[static_cast<size_t>(u)])
            if (dist[static_cast<size_t>(w)] > dist[static_cast<size_t>(u)] + 1) {
                dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(u)] + 1;
                q.push(w);
            }
    }
    return dist;
}

// Tree edge whose parts sit deepest inside the patch; lowest pair on ties.
inline std::pair<int, int> innermost_edge(const Patch& p, const TreeDecomposition& td) {
    std::vector<int> dist = boundary_distances(p);
    std::pair<int, int> best{-1, -1};
    int bestScore = -1;
    for (auto [a, b] : td.tree.edge_list()) {
        int score = p.graph.n + 1;
        for (int v : td.part(a)) score = std::min(score, dist[static_cast<size_t>(v)]);
        for (int v : td.part(b)) score = std::min(score, dist[static_cast<size_t>(v)]);
        if (score > bestScore) {
            bestScore = score;
            best = {a, b};
        }
    }
    return best;
}

inline std::set<std::pair<int, int>> directed_edge_orbit(const FiniteGraph& tree,
                                                         const std::vector<PartialMap>& nodeMaps,
                                                         std::pair<int, int> start) {
    std::set<std::pair<int, int>> orbit{start};
    std::queue<std::pair<int, int>> q;
    q.push(start);
    while (!q.empty()) {
        auto [a, b] = q.front();
        q.pop();
        for (const PartialMap& nm : nodeMaps) {
            if (!nm.defined(a) || !nm.defined(b)) continue;
            std::pair<int, int> img{nm(a), nm(b)};
            if (!tree.has_edge(img.first, img.second)) continue;
            if (orbit.insert(img).second) q.push(img);
        }
    }
    return orbit;
}

}  // namespace detail

struct OrientationData {
    bool ok = false;
    std::string message;
    int s0 = -1, t0 = -1;
    bool reduced = false;  // direction clash forced a parity-preserving sub-action
    bool type2 = false;
    std::vector<int> kHeads;  // neighbours of s0 across positively oriented edges
    std::vector<int> lHeads;  // neighbours of t0 across negatively oriented edges
    std::vector<int> kWitness;  // index into the closure: fixes s0, moves t0 onto the head
    std::vector<int> lWitness;  // index into the closure: fixes t0, moves s0 onto the head
    int stWitness = -1;         // closure element carrying s0 to t0; type 2 marker
};

// Splits the directed tree edges at scale into a positive orbit (the base
// edge's) and a negative one (its reverse). When one group element maps the
// base edge onto its own reverse, only parity-preserving elements are kept.
// Returns, for both endpoints of the base edge, which incident edges carry
// which orientation and a witness element for each.
inline OrientationData orient_edges(const Patch& p, const TreeDecomposition& td,
                                    const std::vector<PartialMap>& closure,
                                    std::optional<std::pair<int, int>> base = std::nullopt) {
    OrientationData out;
    if (td.tree.edge_count() == 0) {
        out.message = "decomposition tree has no edges";
        return out;
    }
    std::vector<PartialMap> nodeMaps;
    nodeMaps.reserve(closure.size());
    for (const PartialMap& elem : closure) nodeMaps.push_back(induced_node_map(td, elem).nodeMap);

    std::pair<int, int> e0 = base ? *base : detail::innermost_edge(p, td);
    if (!td.tree.has_edge(e0.first, e0.second)) {
        out.message = "base edge is not a tree edge";
        return out;
    }
    out.s0 = e0.first;
    out.t0 = e0.second;

    GeodesicDag treeDist = shortest_path_data(td.tree, out.s0);
    auto parityPreserving = [&](const PartialMap& nm) {
        for (int u = 0; u < nm.size(); ++u) {
            if (!nm.defined(u)) continue;
            int du = treeDist.dist[static_cast<size_t>(u)];
            int dv = treeDist.dist[static_cast<size_t>(nm(u))];
            if (((du + dv) & 1) != 0) return false;
        }
        return true;
    };

    std::vector<int> keptIdx;
    for (size_t i = 0; i < nodeMaps.size(); ++i) keptIdx.push_back(static_cast<int>(i));
    std::vector<PartialMap> kept = nodeMaps;
    auto positive = detail::directed_edge_orbit(td.tree, kept, {out.s0, out.t0});
    if (positive.count({out.t0, out.s0})) {
        out.reduced = true;
        keptIdx.clear();
        kept.clear();
        for (size_t i = 0; i < nodeMaps.size(); ++i)
            if (parityPreserving(nodeMaps[i])) {
                keptIdx.push_back(static_cast<int>(i));
                kept.push_back(nodeMaps[i]);
            }
        positive = detail::directed_edge_orbit(td.tree, kept, {out.s0, out.t0});
        if (positive.count({out.t0, out.s0})) {
            out.message = "directions cannot be separated even after parity reduction";
            return out;
        }
    }
    auto negative = detail::directed_edge_orbit(td.tree, kept, {out.t0, out.s0});

    for (int x : td.tree.adj[static_cast<size_t>(out.s0)]) {
        if (positive.count({out.s0, x}))
            out.kHeads.push_back(x);
        else if (!negative.count({out.s0, x})) {
            out.message = "an edge at the base tail is reached by neither orientation";
            return out;
        }
    }
    for (int y : td.tree.adj[static_cast<size_t>(out.t0)]) {
        if (negative.count({out.t0, y}))
            out.lHeads.push_back(y);
        else if (!positive.count({out.t0, y})) {
            out.message = "an edge at the base head is reached by neither orientation";
            return out;
        }
    }

    for (int i : keptIdx)
        if (nodeMaps[static_cast<size_t>(i)].defined(out.s0) && nodeMaps[static_cast<size_t>(i)](out.s0) == out.t0) {
            out.stWitness = i;
            break;
        }
    out.type2 = out.stWitness >= 0;

    if (!out.type2) {
        // Two-sided data needs every edge at the tail positive and every edge
        // at the head negative.
        if (out.kHeads.size() != td.tree.adj[static_cast<size_t>(out.s0)].size() ||
            out.lHeads.size() != td.tree.adj[static_cast<size_t>(out.t0)].size()) {
            out.message = "orientations mix at a base star without a side-swapping element";
            return out;
        }
    } else {
        if (td.tree.adj[static_cast<size_t>(out.s0)].size() != out.kHeads.size() + out.lHeads.size() ||
            td.tree.adj[static_cast<size_t>(out.t0)].size() != out.kHeads.size() + out.lHeads.size()) {
            out.message = "star degrees disagree with the one-sided label count";
            return out;
        }
    }

    auto findWitness = [&](int fixNode, int moveFrom, int moveTo) -> int {
        for (int i : keptIdx) {
            const PartialMap& nm = nodeMaps[static_cast<size_t>(i)];
            if (nm.defined(fixNode) && nm(fixNode) == fixNode && nm.defined(moveFrom) && nm(moveFrom) == moveTo)
                return i;
        }
        return -1;
    };
    for (int x : out.kHeads) {
        int w = findWitness(out.s0, out.t0, x);
        if (w < 0) {
            out.message = "no witness carries the base edge onto an edge of the tail star";
            return out;
        }
        out.kWitness.push_back(w);
    }
    for (int y : out.lHeads) {
        int w = findWitness(out.t0, out.s0, y);
        if (w < 0) {
            out.message = "no witness carries the reversed base edge onto an edge of the head star";
            return out;
        }
        out.lWitness.push_back(w);
    }
    out.ok = true;
    return out;
}

struct TdAmalgamResult {
    bool ok = false;
    std::string message;
    OrientationData orientation;
    AmalgamationSpec spec;
    std::vector<int> factor1Hosts;  // factor vertex -> host vertex
    std::vector<int> factor2Hosts;  // type 1: second part; type 2: image of the first under the side swap
};

// Reads amalgamation data off a basic decomposition at its innermost edge:
// factors are the two parts, adhesion sets come from the incident tree edges,
// and each bonding map is the witness chain through the base adhesion set.
inline TdAmalgamResult td_to_amalgamation(const Patch& p, const TreeDecomposition& td,
                                          const std::vector<PartialMap>& closure,
                                          std::optional<std::pair<int, int>> base = std::nullopt) {
    TdAmalgamResult out;
    out.orientation = orient_edges(p, td, closure, base);
    if (!out.orientation.ok) {
        out.message = out.orientation.message;
        return out;
    }
    const OrientationData& ori = out.orientation;
    const std::vector<int>& partS = td.part(ori.s0);
    const std::vector<int>& partT = td.part(ori.t0);

    InducedSubgraph f1 = induced_subgraph(p.graph, partS);
    out.factor1Hosts = f1.to_host;

    AmalgamationSpec spec;
    spec.name = "derived";
    spec.g1 = f1.graph;
    spec.type2 = ori.type2;

    auto localSet = [](const InducedSubgraph& f, const std::vector<int>& hosts) {
        std::vector<int> out2;
        for (int h : hosts) out2.push_back(f.from_host.at(h));
        std::sort(out2.begin(), out2.end());
        return out2;
    };
    auto adhesionHosts = [&](int a, int b) { return adhesion_set(td, a, b); };

    const PartialMap* stMap = ori.type2 ? &closure[static_cast<size_t>(ori.stWitness)] : nullptr;

    if (!ori.type2) {
        InducedSubgraph f2 = induced_subgraph(p.graph, partT);
        out.factor2Hosts = f2.to_host;
        spec.g2 = f2.graph;
        for (int x : ori.kHeads) spec.sets1.push_back(localSet(f1, adhesionHosts(ori.s0, x)));
        for (int y : ori.lHeads) spec.sets2.push_back(localSet(f2, adhesionHosts(ori.t0, y)));
        for (size_t k = 0; k < ori.kHeads.size(); ++k)
            for (size_t l = 0; l < ori.lHeads.size(); ++l) {
                const PartialMap gk = closure[static_cast<size_t>(ori.kWitness[k])].inverse();
                const PartialMap& gl = closure[static_cast<size_t>(ori.lWitness[l])];
                std::vector<int> images;
                for (int v : spec.sets1[k]) {
                    int h = f1.to_host[static_cast<size_t>(v)];
                    if (!gk.defined(h) || !gl.defined(gk(h))) {
                        out.message = "witness chain undefined on an adhesion vertex";
                        return out;
                    }
                    images.push_back(f2.from_host.at(gl(gk(h))));
                }
                spec.bondingImages[{static_cast<int>(k), static_cast<int>(l)}] = std::move(images);
            }
        spec.boundary1.assign(static_cast<size_t>(spec.g1.n), 0);
        spec.boundary2.assign(static_cast<size_t>(spec.g2.n), 0);
        for (int v = 0; v < spec.g1.n; ++v)
            spec.boundary1[static_cast<size_t>(v)] = p.boundary[static_cast<size_t>(f1.to_host[static_cast<size_t>(v)])];
        for (int v = 0; v < spec.g2.n; ++v)
            spec.boundary2[static_cast<size_t>(v)] = p.boundary[static_cast<size_t>(f2.to_host[static_cast<size_t>(v)])];
    } else {
        // One factor: the head part is identified with the tail part through
        // the side-swapping witness, and its adhesion sets are pulled back.
        PartialMap stInv = stMap->inverse();
        out.factor2Hosts.clear();
        for (int v = 0; v < spec.g1.n; ++v) {
            int h = f1.to_host[static_cast<size_t>(v)];
            if (!stMap->defined(h)) {
                out.message = "side swap undefined on the tail part";
                return out;
            }
            out.factor2Hosts.push_back((*stMap)(h));
        }
        auto pulledBack = [&](const std::vector<int>& hosts) {
            std::vector<int> loc;
            for (int h : hosts) {
                if (!stInv.defined(h)) return std::vector<int>{};
                loc.push_back(f1.from_host.at(stInv(h)));
            }
            std::sort(loc.begin(), loc.end());
            return loc;
        };
        for (int x : ori.kHeads) spec.sets1.push_back(localSet(f1, adhesionHosts(ori.s0, x)));
        for (int y : ori.lHeads) {
            std::vector<int> s = pulledBack(adhesionHosts(ori.t0, y));
            if (s.empty()) {
                out.message = "side swap undefined on a head adhesion set";
                return out;
            }
            spec.sets1.push_back(std::move(s));
        }
        int nk = static_cast<int>(ori.kHeads.size());
        for (int k = 0; k < nk; ++k) spec.jSet.push_back(k);
        for (size_t k = 0; k < ori.kHeads.size(); ++k)
            for (size_t l = 0; l < ori.lHeads.size(); ++l) {
                const PartialMap gk = closure[static_cast<size_t>(ori.kWitness[k])].inverse();
                const PartialMap& gl = closure[static_cast<size_t>(ori.lWitness[l])];
                std::vector<int> images;
                for (int v : spec.sets1[k]) {
                    int h = f1.to_host[static_cast<size_t>(v)];
                    if (!gk.defined(h) || !gl.defined(gk(h)) || !stInv.defined(gl(gk(h)))) {
                        out.message = "witness chain undefined on an adhesion vertex";
                        return out;
                    }
                    images.push_back(f1.from_host.at(stInv(gl(gk(h)))));
                }
                spec.bondingImages[{static_cast<int>(k), nk + static_cast<int>(l)}] = std::move(images);
            }
        spec.boundary1.assign(static_cast<size_t>(spec.g1.n), 0);
        for (int v = 0; v < spec.g1.n; ++v)
            spec.boundary1[static_cast<size_t>(v)] = p.boundary[static_cast<size_t>(f1.to_host[static_cast<size_t>(v)])];
    }

    ValidationReport check = validate_spec(spec);
    if (!check.ok()) {
        out.message = "derived data invalid: " + check.items.front().message;
        return out;
    }
    out.spec = std::move(spec);
    out.ok = true;
    return out;
}

enum class SplitStatus { Split, NoSplitAtScale, NonNestedOrbit, Inconclusive };

inline const char* to_string(SplitStatus s) {
    switch (s) {
        case SplitStatus::Split: return "split";
        case SplitStatus::NoSplitAtScale: return "no-split-at-scale";
        case SplitStatus::NonNestedOrbit: return "non-nested-orbit";
        default: return "inconclusive";
    }
}

struct SplitResult {
    SplitStatus status = SplitStatus::Inconclusive;
    std::string message;
    std::vector<std::vector<int>> separatorOrbit;
    TreeDecomposition td;  // final: blocks and separators, closed, one edge orbit
    BasicReport basic;
    TdAmalgamResult derived;
    std::vector<int> crossA, crossB;  // witness pair when an orbit fails nestedness
};

namespace detail {

// Orbit of a vertex set under fully defined images; empty on cap overflow.
inline std::set<std::vector<int>> set_orbit(const std::vector<int>& start, const std::vector<PartialMap>& elements,
                                            size_t cap) {
    std::set<std::vector<int>> orbit{start};
    std::queue<std::vector<int>> q;
    q.push(start);
    while (!q.empty()) {
        std::vector<int> s = q.front();
        q.pop();
        for (const PartialMap& e : elements) {
            std::vector<int> img;
            img.reserve(s.size());
            bool whole = true;
            for (int v : s) {
                if (!e.defined(v)) {
                    whole = false;
                    break;
                }
                img.push_back(e(v));
            }
            if (!whole) continue;
            std::sort(img.begin(), img.end());
            if (static_cast<size_t>(std::unique(img.begin(), img.end()) - img.begin()) != s.size()) continue;
            if (orbit.insert(img).second) {
                if (orbit.size() > cap) return {};
                q.push(img);
            }
        }
    }
    return orbit;
}

// Both difference sets must stay inside one component of the other's removal.
inline bool nested_pair(const FiniteGraph& g, const std::vector<int>& a, const std::vector<int>& b) {
    auto oneSide = [&](const std::vector<int>& cut, const std::vector<int>& other) {
        std::vector<int> comp = components_without(g, cut);
        int seen = -2;
        for (int v : other) {
            if (std::binary_search(cut.begin(), cut.end(), v)) continue;
            int c = comp[static_cast<size_t>(v)];
            if (seen == -2)
                seen = c;
            else if (seen != c)
                return false;
        }
        return true;
    };
    return oneSide(a, b) && oneSide(b, a);
}

}  // namespace detail

// Searches interior tight separators up to the given size for one whose orbit
// under the patch symmetries is nested, builds the block decomposition for
// that orbit, closes it geodesically, contracts down to a single edge orbit
// and reads off the amalgamation data.
inline SplitResult stallings_split(const Patch& p, const Action& hostAction, int scale, size_t sepCap = 100000,
                                   size_t groupCap = 10000, size_t orbitCap = 5000) {
    SplitResult out;
    if (!connected(p.graph)) {
        out.message = "patch graph is disconnected";
        return out;
    }
    ClosureResult closure = enumerate_closure(p.graph.n, hostAction.generators, groupCap);

    TightSeparatorList seps = tight_separators(p.graph, scale, sepCap, p.boundary);
    if (seps.separators.empty()) {
        out.status = seps.truncated ? SplitStatus::Inconclusive : SplitStatus::NoSplitAtScale;
        out.message = seps.truncated ? "separator enumeration hit its cap" : "no interior tight separator at this scale";
        return out;
    }

    bool sawCross = false;
    std::set<std::vector<int>> family;
    for (const TightSeparator& cand : seps.separators) {
        std::set<std::vector<int>> orbit = detail::set_orbit(cand.vertices, closure.elements, orbitCap);
        if (orbit.empty()) continue;  // cap overflow, try the next candidate
        // Fringe images may fail to separate the finite patch; drop them.
        std::set<std::vector<int>> separating;
        for (const std::vector<int>& s : orbit) {
            std::vector<int> comp = components_without(p.graph, s);
            int nComp = 0;
            for (int c : comp) nComp = std::max(nComp, c + 1);
            if (nComp >= 2) separating.insert(s);
        }
        bool nested = true;
        for (auto it = separating.begin(); it != separating.end() && nested; ++it)
            for (auto jt = std::next(it); jt != separating.end(); ++jt)
                if (!detail::nested_pair(p.graph, *it, *jt)) {
                    nested = false;
                    if (!sawCross) {
                        sawCross = true;
                        out.crossA = *it;
                        out.crossB = *jt;
                    }
                    break;
                }
        if (nested) {
            family = std::move(separating);
            break;
        }
    }
    if (family.empty()) {
        if (sawCross) {
            out.status = SplitStatus::NonNestedOrbit;
            out.message = "every candidate orbit contains a crossing pair";
        } else {
            out.status = SplitStatus::Inconclusive;
            out.message = "orbit computation exceeded its cap for every candidate";
        }
        return out;
    }
    std::vector<std::vector<int>> sepList(family.begin(), family.end());
    out.separatorOrbit = sepList;

    // Components of the graph minus each separator, cached.
    std::vector<std::vector<int>> compOf;
    compOf.reserve(sepList.size());
    for (const auto& s : sepList) compOf.push_back(components_without(p.graph, s));

    // Blocks: grow greedily from each vertex; a vertex joins while the set
    // stays unseparated by every member of the family.
    std::set<std::vector<int>> blockSet;
    for (int seed = 0; seed < p.graph.n; ++seed) {
        std::vector<int> blockComp(sepList.size(), -2);  // established component per separator, -2 none yet
        for (size_t i = 0; i < sepList.size(); ++i)
            if (!std::binary_search(sepList[i].begin(), sepList[i].end(), seed))
                blockComp[i] = compOf[i][static_cast<size_t>(seed)];
        std::vector<int> block{seed};
        for (int v = 0; v < p.graph.n; ++v) {
            if (v == seed) continue;
            bool okv = true;
            for (size_t i = 0; i < sepList.size(); ++i) {
                if (std::binary_search(sepList[i].begin(), sepList[i].end(), v)) continue;
                int c = compOf[i][static_cast<size_t>(v)];
                if (blockComp[i] == -2) continue;  // decided below, after acceptance
                if (blockComp[i] != c) {
                    okv = false;
                    break;
                }
            }
            if (!okv) continue;
            block.push_back(v);
            for (size_t i = 0; i < sepList.size(); ++i)
                if (blockComp[i] == -2 && !std::binary_search(sepList[i].begin(), sepList[i].end(), v))
                    blockComp[i] = compOf[i][static_cast<size_t>(v)];
        }
        std::sort(block.begin(), block.end());
        blockSet.insert(block);
    }
    // Keep only maximal blocks.
    std::vector<std::vector<int>> blocks;
    for (const auto& b : blockSet) {
        bool maximal = true;
        for (const auto& c : blockSet)
            if (&b != &c && b.size() < c.size() && std::includes(c.begin(), c.end(), b.begin(), b.end())) {
                maximal = false;
                break;
            }
        if (maximal) blocks.push_back(b);
    }

    // Decomposition: one node per block, one per separator, edge where the
    // separator lies inside the block.
    int nb = static_cast<int>(blocks.size()), ns = static_cast<int>(sepList.size());
    std::vector<std::pair<int, int>> tedges;
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < ns; ++j)
            if (std::includes(blocks[static_cast<size_t>(i)].begin(), blocks[static_cast<size_t>(i)].end(),
                              sepList[static_cast<size_t>(j)].begin(), sepList[static_cast<size_t>(j)].end()))
                tedges.emplace_back(i, nb + j);
    TreeDecomposition blockTd;
    blockTd.parts = blocks;
    for (const auto& s : sepList) blockTd.parts.push_back(s);
    FiniteGraph tree;
    try {
        tree = FiniteGraph::from_edges(nb + ns, tedges);
    } catch (const InputError& e) {
        out.message = std::string("block incidence is malformed: ") + e.what();
        return out;
    }
    if (!is_tree(tree)) {
        out.message = "blocks and separators do not assemble into a tree";
        return out;
    }
    blockTd.tree = std::move(tree);
    TdReport axioms = verify_td(p.graph, blockTd);
    if (!axioms.ok()) {
        out.message = "block decomposition violates an axiom: " + axioms.items.front().message;
        return out;
    }

    TreeDecomposition closed = geodesic_closure(p.graph, blockTd);
    axioms = verify_td(p.graph, closed);
    if (!axioms.ok()) {
        out.message = "geodesic closure broke an axiom: " + axioms.items.front().message;
        return out;
    }
    ConnectedPartsReport conn = check_connected_parts(p.graph, closed);
    if (!conn.allAdhesionsConnected) {
        out.message = "an adhesion set stayed disconnected after closure";
        return out;
    }

    // Contract down to one edge orbit, keeping the orbit of the innermost edge.
    BasicReport firstLook = is_basic(p, closed, hostAction);
    TreeDecomposition finalTd = closed;
    if (!firstLook.oneEdgeOrbit) {
        std::vector<PartialMap> nodeMaps;
        for (const PartialMap& elem : closure.elements) nodeMaps.push_back(induced_node_map(closed, elem).nodeMap);
        std::pair<int, int> e = detail::innermost_edge(p, closed);
        auto orbit = detail::directed_edge_orbit(closed.tree, nodeMaps, e);
        std::set<std::pair<int, int>> keepUndirected;
        for (auto [a, b] : orbit) keepUndirected.insert({std::min(a, b), std::max(a, b)});
        ContractResult contracted = contract_edges(closed, {keepUndirected.begin(), keepUndirected.end()});
        if (!contracted.adhesionsPreserved) {
            out.message = "contraction disturbed a kept adhesion set";
            return out;
        }
        finalTd = contracted.td;
        axioms = verify_td(p.graph, finalTd);
        if (!axioms.ok()) {
            out.message = "contraction broke an axiom: " + axioms.items.front().message;
            return out;
        }
    }

    out.basic = is_basic(p, finalTd, hostAction);
    if (!out.basic.basicAtScale) {
        out.message = out.basic.partMapsOk
                          ? (out.basic.oneEdgeOrbit ? "no adhesion set splits the boundary directions"
                                                    : "decomposition keeps more than one edge orbit")
                          : "a symmetry fails to permute the parts";
        return out;
    }
    out.td = finalTd;

    out.derived = td_to_amalgamation(p, finalTd, closure.elements);
    if (!out.derived.ok) {
        out.message = "amalgamation extraction failed: " + out.derived.message;
        return out;
    }
    out.status = SplitStatus::Split;
    out.message = out.derived.spec.type2 ? "one-sided split found" : "two-sided split found";
    return out;
}

enum class FactorStatus { Finite, OneEnded, SplitFurther, Inconclusive };

inline const char* to_string(FactorStatus s) {
    switch (s) {
        case FactorStatus::Finite: return "finite";
        case FactorStatus::OneEnded: return "one-ended-at-scale";
        case FactorStatus::SplitFurther: return "split-further";
        default: return "inconclusive";
    }
}

struct FactorisationNode {
    Patch patch;
    Action action;
    FactorStatus status = FactorStatus::Inconclusive;
    bool oneSided = false;
    std::string note;
    int depth = 0;
    std::vector<int> children;
};

struct FactorisationResult {
    std::vector<FactorisationNode> nodes;
    int root = 0;
    bool allTerminal = true;  // every leaf ended finite or one-ended
    int maxDepthSeen = 0;
};

namespace detail {

// Symmetries that keep a part in place, restricted to it.
inline Action stabiliser_action(const FiniteGraph& host, const std::vector<PartialMap>& closure,
                                const std::vector<int>& partHosts, const FiniteGraph& factor) {
    (void)host;
    std::map<int, int> fromHost;
    for (size_t i = 0; i < partHosts.size(); ++i) fromHost[partHosts[i]] = static_cast<int>(i);
    std::set<PartialMap> seen;
    Action a;
    a.name = "stabiliser";
    for (const PartialMap& e : closure) {
        PartialMap r;
        r.img.assign(partHosts.size(), kUndef);
        bool okr = true;
        for (size_t i = 0; i < partHosts.size(); ++i) {
            int h = partHosts[i];
            if (!e.defined(h) || !fromHost.count(e(h))) {
                okr = false;
                break;
            }
            r.img[i] = fromHost.at(e(h));
        }
        if (!okr) continue;
        if (check_automorphism(factor, r)) continue;
        if (seen.insert(r).second) a.generators.push_back(r);
    }
    if (a.generators.empty()) a.generators.push_back(PartialMap::identity(factor.n));
    return a;
}

}  // namespace detail

// Splits repeatedly until every piece is finite (no truncation fringe left),
// refuses to split at this scale, or the search gives out.
inline FactorisationResult terminal_factorisation(const Patch& p, const Action& hostAction, int scale, int maxDepth,
                                                  size_t sepCap = 100000, size_t groupCap = 10000,
                                                  size_t orbitCap = 5000) {
    FactorisationResult out;
    out.nodes.push_back({p, hostAction, FactorStatus::Inconclusive, false, "", 0, {}});

    for (size_t idx = 0; idx < out.nodes.size(); ++idx) {
        FactorisationNode& node = out.nodes[idx];
        out.maxDepthSeen = std::max(out.maxDepthSeen, node.depth);
        bool touchesBoundary = false;
        for (int v = 0; v < node.patch.graph.n; ++v)
            if (node.patch.is_boundary(v)) {
                touchesBoundary = true;
                break;
            }
        if (!touchesBoundary) {
            node.status = FactorStatus::Finite;
            continue;
        }
        if (node.depth >= maxDepth) {
            node.status = FactorStatus::Inconclusive;
            node.note = "depth limit reached";
            out.allTerminal = false;
            continue;
        }
        SplitResult split = stallings_split(node.patch, node.action, scale, sepCap, groupCap, orbitCap);
        if (split.status == SplitStatus::NoSplitAtScale) {
            node.status = FactorStatus::OneEnded;
            node.note = split.message;
            continue;
        }
        if (split.status != SplitStatus::Split) {
            node.status = FactorStatus::Inconclusive;
            node.note = std::string(to_string(split.status)) + ": " + split.message;
            out.allTerminal = false;
            continue;
        }

        node.status = FactorStatus::SplitFurther;
        node.note = split.message;
        ClosureResult closure = enumerate_closure(node.patch.graph.n, node.action.generators, groupCap);
        const AmalgamationSpec& spec = split.derived.spec;

        auto addChild = [&](const FiniteGraph& factor, const std::vector<char>& bnd, const std::vector<int>& hosts,
                            bool oneSided) {
            Patch child;
            child.graph = factor;
            child.boundary = bnd.empty() ? std::vector<char>(static_cast<size_t>(factor.n), 0) : bnd;
            child.root = 0;
            child.innerRadius = computed_inner_radius(child.graph, child.boundary, child.root);
            // out.nodes can reallocate between the two calls; address via idx only.
            Action act = detail::stabiliser_action(out.nodes[idx].patch.graph, closure.elements, hosts, factor);
            int childIdx = static_cast<int>(out.nodes.size());
            int d = out.nodes[idx].depth;
            out.nodes.push_back({std::move(child), std::move(act), FactorStatus::Inconclusive, oneSided, "", d + 1, {}});
            out.nodes[idx].children.push_back(childIdx);
        };
        if (spec.type2) {
            addChild(spec.g1, spec.boundary1, split.derived.factor1Hosts, true);
        } else {
            addChild(spec.g1, spec.boundary1, split.derived.factor1Hosts, false);
            addChild(spec.g2, spec.boundary2, split.derived.factor2Hosts, false);
        }
    }
    for (const FactorisationNode& node : out.nodes)
        if (node.children.empty() && node.status != FactorStatus::Finite && node.status != FactorStatus::OneEnded)
            out.allTerminal = false;
    return out;
}

struct ProbeEntry {
    int radius = 0;
    std::string summary;
    bool progressed = false;  // at least one split happened
    bool terminal = false;    // factorisation ended in finite / one-ended leaves only
};

struct ProbeResult {
    std::vector<ProbeEntry> entries;
    bool consistent = true;   // same structural outcome at every radius
    bool progressing = true;  // splits happen at every radius
};

// Runs the factorisation over several build radii and compares outcomes; a
// scale that keeps giving the same leaf profile as the horizon grows is
// behaving like a genuine decomposition rather than a truncation artifact.
inline ProbeResult accessibility_probe(const AmalgamationSpec& spec, const Action& side1Group,
                                       const Action& side2Group, int scale, const std::vector<int>& radii,
                                       int maxDepth, std::uint32_t seed = 1) {
    ProbeResult out;
    for (int r : radii) {
        BuildResult build = build_amalgam(spec, build_tree_patch(spec, r, seed));
        DerivedAction host = derive_host_action(spec, build, side1Group, side2Group);
        FactorisationResult f = terminal_factorisation(build.patch, host.action, scale, maxDepth);
        int finite = 0, oneEnded = 0, splits = 0, oneSided = 0, inconclusive = 0;
        for (const FactorisationNode& node : f.nodes) {
            switch (node.status) {
                case FactorStatus::Finite: ++finite; break;
                case FactorStatus::OneEnded: ++oneEnded; break;
                case FactorStatus::SplitFurther: ++splits; break;
                default: ++inconclusive; break;
            }
            if (node.oneSided) ++oneSided;
        }
        ProbeEntry e;
        e.radius = r;
        e.progressed = splits > 0;
        e.terminal = f.allTerminal;
        e.summary = "finite=" + std::to_string(finite) + " one-ended=" + std::to_string(oneEnded) +
                    " splits=" + std::to_string(splits) + " one-sided=" + std::to_string(oneSided) +
                    " inconclusive=" + std::to_string(inconclusive) + " depth=" + std::to_string(f.maxDepthSeen);
        out.entries.push_back(e);
    }
    for (size_t i = 1; i < out.entries.size(); ++i)
        if (out.entries[i].summary != out.entries[0].summary) out.consistent = false;
    for (const ProbeEntry& e : out.entries)
        if (!e.progressed) out.progressing = false;
    return out;
}

}  // namespace amalg
