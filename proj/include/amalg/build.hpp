#pragma once

// Finite builds: truncate the labelled gluing tree at a radius, take one
// factor copy per node, identify along every tree edge through the bonding
// map its label pair names, and keep full provenance. Boundary vertices are
// the ones a bigger radius could still touch: adhesion vertices of absent
// edges at truncated nodes, plus any factor vertices flagged as boundary by
// the data itself.
//
// The extension engine grows a factor automorphism at one node into a partial
// automorphism of the whole build, walking the tree with star isomorphisms
// pinned at the edge it arrived by.

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "amalgam_spec.hpp"
#include "graph.hpp"
#include "patch.hpp"
#include "perm.hpp"
#include "treedecomp.hpp"

namespace amalg {

struct LabelledTreePatch {
    FiniteGraph tree;
    int root = 0;
    int radius = 0;
    std::vector<int> depth;
    std::vector<int> sideOf;   // all 1 for one-sided data
    std::vector<int> parent;   // -1 at root
    std::vector<std::map<int, int>> labelTo;  // labelTo[u].at(v): away-label at u on edge uv

    bool is_leaf(int u) const { return depth[static_cast<size_t>(u)] == radius; }
    bool is_interior(int u) const { return depth[static_cast<size_t>(u)] < radius; }
    int away_label(int u, int v) const { return labelTo[static_cast<size_t>(u)].at(v); }
    int neighbor_over(int u, int k) const {
        for (auto [v, lab] : labelTo[static_cast<size_t>(u)])
            if (lab == k) return v;
        return -1;
    }
    // Full back-label star; only interior nodes have every label present.
    StarLabelling star(const AmalgamationSpec& spec, int u) const {
        int m = spec.side_count(sideOf[static_cast<size_t>(u)]);
        StarLabelling s;
        s.backLabels.assign(static_cast<size_t>(m), -1);
        for (auto [v, lab] : labelTo[static_cast<size_t>(u)])
            s.backLabels[static_cast<size_t>(lab)] = labelTo[static_cast<size_t>(v)].at(u);
        return s;
    }
};

// Truncated gluing tree with pseudorandom but reproducible back-labels: the
// label of each new node is drawn from a generator keyed by (seed, node id),
// so builds with the same seed and different radii agree on the shared part.
inline LabelledTreePatch build_tree_patch(const AmalgamationSpec& spec, int radius, std::uint32_t seed) {
    if (radius < 0) throw InputError("negative radius");
    ValidationReport v = validate_spec(spec);
    if (!v.ok()) throw InputError("invalid amalgamation data: " + v.items.front().message);

    LabelledTreePatch tp;
    tp.radius = radius;
    tp.depth = {0};
    tp.sideOf = {1};
    tp.parent = {-1};
    tp.labelTo.emplace_back();
    std::vector<int> entryLabel{-1};
    std::vector<std::pair<int, int>> edges;

    for (int u = 0; u < static_cast<int>(tp.depth.size()); ++u) {
        if (tp.depth[static_cast<size_t>(u)] == radius) continue;
        int side = tp.sideOf[static_cast<size_t>(u)];
        int m = spec.side_count(side);
        for (int k = 0; k < m; ++k) {
            if (k == entryLabel[static_cast<size_t>(u)]) continue;
            int child = static_cast<int>(tp.depth.size());
            int childSide = spec.type2 ? 1 : (side == 1 ? 2 : 1);
            tp.depth.push_back(tp.depth[static_cast<size_t>(u)] + 1);
            tp.sideOf.push_back(childSide);
            tp.parent.push_back(u);
            tp.labelTo.emplace_back();
            std::vector<int> options;
            if (spec.type2) {
                for (int l = 0; l < m; ++l)
                    if (spec.in_j(l) != spec.in_j(k)) options.push_back(l);
            } else {
                for (int l = 0; l < spec.side_count(childSide); ++l) options.push_back(l);
            }
            std::mt19937 rng(seed * 1000003u + static_cast<std::uint32_t>(child));
            int back = options[rng() % options.size()];
            tp.labelTo[static_cast<size_t>(u)][child] = k;
            tp.labelTo[static_cast<size_t>(child)][u] = back;
            entryLabel.push_back(back);
            edges.emplace_back(u, child);
        }
    }
    tp.tree = FiniteGraph::from_edges(static_cast<int>(tp.depth.size()), edges);
    return tp;
}

struct BuildResult {
    LabelledTreePatch tree;
    Patch patch;
    int rootVertex = 0;
    std::vector<std::vector<std::pair<int, int>>> provenance;  // class -> sorted (node, local)
    std::vector<std::vector<int>> classOf;                     // node -> local -> class
    TreeDecomposition inducedTd;
    std::vector<int> identLengths;  // class -> provenance subtree diameter in tree edges
    int maxIdentLength = 0;
};

inline BuildResult build_amalgam(const AmalgamationSpec& spec, const LabelledTreePatch& tp) {
    int nodes = tp.tree.n;
    std::vector<int> offset(static_cast<size_t>(nodes) + 1, 0);
    for (int u = 0; u < nodes; ++u)
        offset[static_cast<size_t>(u) + 1] =
            offset[static_cast<size_t>(u)] + spec.factor(tp.sideOf[static_cast<size_t>(u)]).n;
    int total = offset[static_cast<size_t>(nodes)];

    std::vector<int> uf(static_cast<size_t>(total));
    for (int i = 0; i < total; ++i) uf[static_cast<size_t>(i)] = i;
    auto find = [&](int x) {
        while (uf[static_cast<size_t>(x)] != x) {
            uf[static_cast<size_t>(x)] = uf[static_cast<size_t>(uf[static_cast<size_t>(x)])];
            x = uf[static_cast<size_t>(x)];
        }
        return x;
    };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) uf[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
    };

    for (auto [u, v] : tp.tree.edge_list()) {
        int a = tp.away_label(u, v), b = tp.away_label(v, u);
        std::map<int, int> M = spec.bonding(a, b, tp.sideOf[static_cast<size_t>(u)]);
        for (auto [x, y] : M) unite(offset[static_cast<size_t>(u)] + x, offset[static_cast<size_t>(v)] + y);
    }

    BuildResult out;
    out.tree = tp;
    std::vector<int> classIndex(static_cast<size_t>(total), -1);
    int classes = 0;
    for (int i = 0; i < total; ++i) {
        int r = find(i);
        if (classIndex[static_cast<size_t>(r)] < 0) classIndex[static_cast<size_t>(r)] = classes++;
    }
    out.classOf.assign(static_cast<size_t>(nodes), {});
    out.provenance.assign(static_cast<size_t>(classes), {});
    for (int u = 0; u < nodes; ++u) {
        int n = spec.factor(tp.sideOf[static_cast<size_t>(u)]).n;
        out.classOf[static_cast<size_t>(u)].resize(static_cast<size_t>(n));
        for (int x = 0; x < n; ++x) {
            int c = classIndex[static_cast<size_t>(find(offset[static_cast<size_t>(u)] + x))];
            out.classOf[static_cast<size_t>(u)][static_cast<size_t>(x)] = c;
            out.provenance[static_cast<size_t>(c)].emplace_back(u, x);
        }
    }

    std::set<std::pair<int, int>> edgeSet;
    for (int u = 0; u < nodes; ++u) {
        const FiniteGraph& f = spec.factor(tp.sideOf[static_cast<size_t>(u)]);
        for (auto [x, y] : f.edge_list()) {
            int c1 = out.classOf[static_cast<size_t>(u)][static_cast<size_t>(x)];
            int c2 = out.classOf[static_cast<size_t>(u)][static_cast<size_t>(y)];
            if (c1 == c2) throw InputError("identification collapsed a factor edge");
            edgeSet.insert({std::min(c1, c2), std::max(c1, c2)});
        }
    }
    FiniteGraph g = FiniteGraph::from_edges(classes, {edgeSet.begin(), edgeSet.end()});

    std::vector<char> boundary(static_cast<size_t>(classes), 0);
    for (int u = 0; u < nodes; ++u) {
        int side = tp.sideOf[static_cast<size_t>(u)];
        if (tp.is_leaf(u)) {
            std::set<int> present;
            for (auto [v, lab] : tp.labelTo[static_cast<size_t>(u)]) present.insert(lab);
            for (int k = 0; k < spec.side_count(side); ++k) {
                if (present.count(k)) continue;
                for (int x : spec.adhesion(side, k))
                    boundary[static_cast<size_t>(out.classOf[static_cast<size_t>(u)][static_cast<size_t>(x)])] = 1;
            }
        }
        const std::vector<char>& flags = (spec.type2 || side == 1) ? spec.boundary1 : spec.boundary2;
        if (!flags.empty())
            for (int x = 0; x < spec.factor(side).n; ++x)
                if (flags[static_cast<size_t>(x)])
                    boundary[static_cast<size_t>(out.classOf[static_cast<size_t>(u)][static_cast<size_t>(x)])] = 1;
    }

    out.rootVertex = out.classOf[static_cast<size_t>(tp.root)][0];
    out.patch.graph = std::move(g);
    out.patch.boundary = std::move(boundary);
    out.patch.root = out.rootVertex;
    out.patch.innerRadius = computed_inner_radius(out.patch.graph, out.patch.boundary, out.rootVertex);

    out.inducedTd.tree = tp.tree;
    out.inducedTd.parts.assign(static_cast<size_t>(nodes), {});
    for (int u = 0; u < nodes; ++u) {
        std::set<int> part(out.classOf[static_cast<size_t>(u)].begin(), out.classOf[static_cast<size_t>(u)].end());
        out.inducedTd.parts[static_cast<size_t>(u)] = {part.begin(), part.end()};
    }

    out.identLengths.assign(static_cast<size_t>(classes), 0);
    for (int c = 0; c < classes; ++c) {
        std::set<int> holders;
        for (auto [u, x] : out.provenance[static_cast<size_t>(c)]) {
            holders.insert(u);
            (void)x;
        }
        if (holders.size() > 1) {
            InducedSubgraph sub = induced_subgraph(tp.tree, {holders.begin(), holders.end()});
            int d = diameter(sub.graph);
            out.identLengths[static_cast<size_t>(c)] = d < 0 ? tp.tree.n : d;
        }
        out.maxIdentLength = std::max(out.maxIdentLength, out.identLengths[static_cast<size_t>(c)]);
    }
    return out;
}

struct RelabelReport {
    bool ok = true;
    std::vector<std::uint32_t> seeds;
    std::vector<int> innerRadii;
    std::pair<std::uint32_t, std::uint32_t> failingPair{0, 0};
    std::string message;
};

// Consistent bondings make the glued graph independent of the tree labelling;
// witnessed here by root-based local isomorphism between same-radius builds.
inline RelabelReport relabel_invariance(const AmalgamationSpec& spec, int radius,
                                        const std::vector<std::uint32_t>& seeds, int depth) {
    RelabelReport rep;
    rep.seeds = seeds;
    std::vector<BuildResult> builds;
    for (std::uint32_t s : seeds) {
        builds.push_back(build_amalgam(spec, build_tree_patch(spec, radius, s)));
        rep.innerRadii.push_back(builds.back().patch.innerRadius);
        if (builds.back().patch.innerRadius < depth) {
            rep.ok = false;
            rep.failingPair = {s, s};
            rep.message = "inner radius below comparison depth";
            return rep;
        }
    }
    for (size_t i = 0; i < builds.size(); ++i)
        for (size_t j = i + 1; j < builds.size(); ++j)
            if (!boundary_tolerant_isomorphic(builds[i].patch, builds[j].patch, depth)) {
                rep.ok = false;
                rep.failingPair = {seeds[i], seeds[j]};
                rep.message = "no local isomorphism at the requested depth";
                return rep;
            }
    return rep;
}

struct ExtensionResult {
    bool ok = false;
    std::string message;
    PartialMap map;               // on build classes
    std::vector<int> nodeImage;   // tree node -> image node, -1 where unreached
    std::vector<PartialMap> factorMaps;  // per reached node, total on its factor
};

// Grows a seed factor map at one tree node into a partial automorphism of the
// build. Each interior node is crossed with a star isomorphism pinned at the
// edge the walk arrived by, so images of shared classes always agree; the map
// stops at leaves and wherever the image side runs out of tree.
inline ExtensionResult extend_automorphism(const AmalgamationSpec& spec, const BuildResult& build, int seedNode,
                                           int seedImage, const PartialMap& seedMap, const Action& side1Group,
                                           const Action& side2Group, int cap = 10000) {
    const LabelledTreePatch& tp = build.tree;
    ExtensionResult out;
    if (seedNode < 0 || seedNode >= tp.tree.n || seedImage < 0 || seedImage >= tp.tree.n) {
        out.message = "seed node out of range";
        return out;
    }
    if (tp.sideOf[static_cast<size_t>(seedNode)] != tp.sideOf[static_cast<size_t>(seedImage)]) {
        out.message = "seed nodes lie on different sides";
        return out;
    }

    int classes = build.patch.graph.n;
    out.map.img.assign(static_cast<size_t>(classes), kUndef);
    out.nodeImage.assign(static_cast<size_t>(tp.tree.n), -1);
    out.factorMaps.assign(static_cast<size_t>(tp.tree.n), PartialMap{});

    auto far_group = [&](int side) -> const Action& {
        if (spec.type2) return side1Group;
        return side == 1 ? side2Group : side1Group;
    };

    struct Item {
        int node, image, bfsParent;
        PartialMap gamma;
    };
    std::queue<Item> q;
    q.push({seedNode, seedImage, -1, seedMap});
    std::vector<char> visited(static_cast<size_t>(tp.tree.n), 0);
    visited[static_cast<size_t>(seedNode)] = 1;

    while (!q.empty()) {
        Item it = q.front();
        q.pop();
        int u = it.node, ui = it.image;
        out.nodeImage[static_cast<size_t>(u)] = ui;
        out.factorMaps[static_cast<size_t>(u)] = it.gamma;

        // Map this copy; collisions across copies must agree.
        int n = spec.factor(tp.sideOf[static_cast<size_t>(u)]).n;
        for (int x = 0; x < n; ++x) {
            if (!it.gamma.defined(x)) {
                out.message = "factor map not total at a reached node";
                return out;
            }
            int c = build.classOf[static_cast<size_t>(u)][static_cast<size_t>(x)];
            int target = build.classOf[static_cast<size_t>(ui)][static_cast<size_t>(it.gamma(x))];
            int& slot = out.map.img[static_cast<size_t>(c)];
            if (slot != kUndef && slot != target) {
                out.message = "conflicting images for an identified vertex";
                return out;
            }
            slot = target;
        }

        if (!tp.is_interior(u) || !tp.is_interior(ui)) continue;

        int side = tp.sideOf[static_cast<size_t>(u)];
        StarLabelling s1 = tp.star(spec, u);
        StarLabelling s2 = tp.star(spec, ui);
        std::optional<StarPin> pin;
        if (it.bfsParent >= 0) {
            int p = it.bfsParent;
            int pi = out.nodeImage[static_cast<size_t>(p)];
            StarPin sp;
            sp.srcLabel = tp.away_label(u, p);
            sp.dstLabel = tp.away_label(ui, pi);
            sp.factorMap = out.factorMaps[static_cast<size_t>(p)].inverse();
            pin = sp;
        }
        StarIsoResult star = star_isomorphism(spec, side, s1, s2, it.gamma, far_group(side), pin, cap);
        if (!star.ok) {
            out.message = "star extension failed at a node: " + star.message;
            return out;
        }
        int m = spec.side_count(side);
        for (int k = 0; k < m; ++k) {
            int v = tp.neighbor_over(u, k);
            if (v < 0 || v == it.bfsParent || visited[static_cast<size_t>(v)]) continue;
            int vi = tp.neighbor_over(ui, star.tau[static_cast<size_t>(k)]);
            if (vi < 0) continue;
            visited[static_cast<size_t>(v)] = 1;
            q.push({v, vi, u, star.deltas[static_cast<size_t>(k)].inverse()});
        }
    }

    if (out.map.domain_size() == 0) {
        out.message = "empty extension";
        return out;
    }
    out.ok = true;
    return out;
}

struct DerivedAction {
    Action action;
    std::vector<std::string> notes;
};

// Generators for the symmetries a build inherits from its gluing data:
// identity translations to every same-side node at distance two (distance one
// as well for one-sided data), and every factor group generator applied at
// the root.
inline DerivedAction derive_host_action(const AmalgamationSpec& spec, const BuildResult& build,
                                        const Action& side1Group, const Action& side2Group, int cap = 10000) {
    const LabelledTreePatch& tp = build.tree;
    DerivedAction out;
    out.action.name = "derived-host";
    const FiniteGraph& f1 = spec.factor(1);
    PartialMap id = PartialMap::identity(f1.n);

    std::vector<int> targets;
    for (int t = 0; t < tp.tree.n; ++t) {
        if (t == tp.root) continue;
        int d = tp.depth[static_cast<size_t>(t)];
        if (d == 2 || (spec.type2 && d == 1)) targets.push_back(t);
    }
    for (int t : targets) {
        ExtensionResult e = extend_automorphism(spec, build, tp.root, t, id, side1Group, side2Group, cap);
        if (!e.ok) {
            out.notes.push_back("translation to node " + std::to_string(t) + " failed: " + e.message);
            continue;
        }
        out.action.generators.push_back(e.map);
        out.action.generators.push_back(e.map.inverse());
    }
    for (const PartialMap& gamma : side1Group.generators) {
        ExtensionResult e = extend_automorphism(spec, build, tp.root, tp.root, gamma, side1Group, side2Group, cap);
        if (!e.ok) {
            out.notes.push_back("root automorphism failed to extend: " + e.message);
            continue;
        }
        out.action.generators.push_back(e.map);
        out.action.generators.push_back(e.map.inverse());
    }
    return out;
}

}  // namespace amalg
