#pragma once

// Vertex maps and group data. Factor symmetries are honest permutations;
// symmetries of a truncated patch are partial injections (entries may be
// undefined where the patch runs out), and orbit machinery treats both
// uniformly. Closure enumeration is capped, never assumed complete.

#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "graph.hpp"

namespace amalg {

constexpr int kUndef = -1;

// Injective vertex map, possibly partial. img[v] == kUndef means v is outside
// the domain. Total maps double as permutations.
struct PartialMap {
    std::vector<int> img;

    PartialMap() = default;
    explicit PartialMap(std::vector<int> i) : img(std::move(i)) {}

    static PartialMap identity(int n) {
        PartialMap m;
        m.img.resize(static_cast<size_t>(n));
        for (int v = 0; v < n; ++v) m.img[static_cast<size_t>(v)] = v;
        return m;
    }

    int size() const { return static_cast<int>(img.size()); }
    bool defined(int v) const { return v >= 0 && v < size() && img[static_cast<size_t>(v)] != kUndef; }
    int operator()(int v) const { return img[static_cast<size_t>(v)]; }

    bool is_total() const {
        for (int x : img)
            if (x == kUndef) return false;
        return true;
    }

    int domain_size() const {
        int c = 0;
        for (int x : img)
            if (x != kUndef) ++c;
        return c;
    }

    bool injective() const {
        std::vector<char> seen(img.size(), 0);
        for (int x : img) {
            if (x == kUndef) continue;
            if (x < 0 || x >= size() || seen[static_cast<size_t>(x)]) return false;
            seen[static_cast<size_t>(x)] = 1;
        }
        return true;
    }

    // this after other: v -> this(other(v)). Undefined wherever the chain breaks.
    PartialMap after(const PartialMap& other) const {
        PartialMap out;
        out.img.assign(other.img.size(), kUndef);
        for (int v = 0; v < other.size(); ++v) {
            int w = other.img[static_cast<size_t>(v)];
            if (w == kUndef || !defined(w)) continue;
            out.img[static_cast<size_t>(v)] = img[static_cast<size_t>(w)];
        }
        return out;
    }

    PartialMap inverse() const {
        PartialMap out;
        out.img.assign(img.size(), kUndef);
        for (int v = 0; v < size(); ++v) {
            int w = img[static_cast<size_t>(v)];
            if (w != kUndef) out.img[static_cast<size_t>(w)] = v;
        }
        return out;
    }

    bool operator==(const PartialMap& o) const { return img == o.img; }
    bool operator<(const PartialMap& o) const { return img < o.img; }
};

struct AutomorphismWitness {
    int u = -1;
    int v = -1;
    std::string message;
};

// Strict check: perm must be a total permutation carrying edges to edges and
// non-edges to non-edges. Returns nothing on success.
inline std::optional<AutomorphismWitness> check_automorphism(const FiniteGraph& g, const PartialMap& perm) {
    if (perm.size() != g.n) throw InputError("permutation domain size disagrees with graph");
    if (!perm.is_total()) return AutomorphismWitness{-1, -1, "map is not total"};
    if (!perm.injective()) return AutomorphismWitness{-1, -1, "map is not injective"};
    for (int u = 0; u < g.n; ++u)
        for (int v = u + 1; v < g.n; ++v) {
            bool e = g.has_edge(u, v);
            bool fe = g.has_edge(perm(u), perm(v));
            if (e && !fe) return AutomorphismWitness{u, v, "edge mapped to non-edge"};
            if (!e && fe) return AutomorphismWitness{u, v, "non-edge mapped to edge"};
        }
    return std::nullopt;
}

struct Action {
    std::vector<PartialMap> generators;
    std::string name;

    static Action from_perms(const std::vector<std::vector<int>>& perms, std::string name = {}) {
        Action a;
        a.name = std::move(name);
        for (const auto& p : perms) a.generators.emplace_back(p);
        return a;
    }
};

struct OrbitPartition {
    std::vector<int> orbit_of;                // vertex -> orbit id
    std::vector<std::vector<int>> orbits;     // sorted members, ordered by least member
};

// Orbit closure under generators and their inverses. Partial generators give
// partial reachability; classes are the connected components of the Schreier
// graph restricted to where the maps are defined.
inline OrbitPartition orbits(const FiniteGraph& g, const Action& a) {
    for (const auto& gen : a.generators) {
        if (gen.size() != g.n) throw InputError("action generator size disagrees with graph");
        if (!gen.injective()) throw InputError("action generator is not injective");
    }
    std::vector<PartialMap> gens = a.generators;
    for (const auto& gen : a.generators) gens.push_back(gen.inverse());

    OrbitPartition out;
    out.orbit_of.assign(static_cast<size_t>(g.n), -1);
    for (int s = 0; s < g.n; ++s) {
        if (out.orbit_of[static_cast<size_t>(s)] >= 0) continue;
        int id = static_cast<int>(out.orbits.size());
        std::vector<int> members;
        std::queue<int> q;
        out.orbit_of[static_cast<size_t>(s)] = id;
        q.push(s);
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            members.push_back(x);
            for (const auto& gen : gens) {
                if (!gen.defined(x)) continue;
                int y = gen(x);
                if (out.orbit_of[static_cast<size_t>(y)] < 0) {
                    out.orbit_of[static_cast<size_t>(y)] = id;
                    q.push(y);
                }
            }
        }
        std::sort(members.begin(), members.end());
        out.orbits.push_back(std::move(members));
    }
    return out;
}

struct ClosureResult {
    std::vector<PartialMap> elements;  // includes identity; deduplicated
    bool capped = false;               // hit the cap; element set incomplete
};

// Products of generators and inverses, breadth-first, deduplicated by the map
// itself. For total permutation groups this is the group; for partial maps it
// is the closure semigroup trimmed at the cap.
inline ClosureResult enumerate_closure(int n, const std::vector<PartialMap>& generators, size_t cap = 10000) {
    ClosureResult out;
    std::vector<PartialMap> gens = generators;
    for (const auto& g : generators) gens.push_back(g.inverse());

    std::set<PartialMap> seen;
    std::queue<PartialMap> q;
    PartialMap id = PartialMap::identity(n);
    seen.insert(id);
    q.push(id);
    while (!q.empty()) {
        PartialMap cur = q.front();
        q.pop();
        out.elements.push_back(cur);
        for (const auto& g : gens) {
            PartialMap next = g.after(cur);
            if (next.domain_size() == 0) continue;
            if (seen.count(next)) continue;
            if (seen.size() >= cap) {
                out.capped = true;
                continue;
            }
            seen.insert(next);
            q.push(next);
        }
    }
    return out;
}

}  // namespace amalg
