#pragma once

// JSON round-tripping for the core value types plus one-way serialization of
// the analysis reports. Emission uses ordered_json so a given value always
// prints the same bytes; parsers reject rather than guess.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "amalgam_spec.hpp"
#include "build.hpp"
#include "ends.hpp"
#include "graph.hpp"
#include "hyperbolicity.hpp"
#include "patch.hpp"
#include "perm.hpp"
#include "splitting.hpp"
#include "treedecomp.hpp"

namespace amalg {

using ordered_json = nlohmann::ordered_json;

inline ordered_json graph_to_json(const FiniteGraph& g) {
    ordered_json j;
    j["n"] = g.n;
    ordered_json edges = ordered_json::array();
    for (auto [u, v] : g.edge_list()) edges.push_back({u, v});
    j["edges"] = std::move(edges);
    if (!g.labels.empty()) {
        ordered_json labels = ordered_json::object();
        for (const auto& [v, text] : g.labels) labels[std::to_string(v)] = text;
        j["labels"] = std::move(labels);
    }
    return j;
}

namespace detail {

inline const ordered_json& field(const ordered_json& j, const std::string& key) {
    if (!j.is_object() || !j.contains(key)) throw InputError("missing field \"" + key + "\"");
    return j.at(key);
}

inline int int_field(const ordered_json& j, const std::string& key) {
    const ordered_json& v = field(j, key);
    if (!v.is_number_integer()) throw InputError("field \"" + key + "\" must be an integer");
    return v.get<int>();
}

inline std::vector<int> int_list(const ordered_json& j, const std::string& where) {
    if (!j.is_array()) throw InputError(where + " must be an array of integers");
    std::vector<int> out;
    for (const auto& x : j) {
        if (!x.is_number_integer()) throw InputError(where + " must hold integers only");
        out.push_back(x.get<int>());
    }
    return out;
}

}  // namespace detail

inline FiniteGraph graph_from_json(const ordered_json& j) {
    int n = detail::int_field(j, "n");
    const ordered_json& ej = detail::field(j, "edges");
    if (!ej.is_array()) throw InputError("\"edges\" must be an array");
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : ej) {
        std::vector<int> pair = detail::int_list(e, "edge entry");
        if (pair.size() != 2) throw InputError("edge entries must be pairs");
        edges.emplace_back(pair[0], pair[1]);
    }
    FiniteGraph g = FiniteGraph::from_edges(n, edges);
    if (j.contains("labels")) {
        const ordered_json& lj = j.at("labels");
        if (!lj.is_object()) throw InputError("\"labels\" must map vertex ids to strings");
        for (auto it = lj.begin(); it != lj.end(); ++it) {
            int v = 0;
            try {
                v = std::stoi(it.key());
            } catch (const std::exception&) {
                throw InputError("label key is not a vertex id: " + it.key());
            }
            if (v < 0 || v >= n) throw InputError("label vertex out of range: " + it.key());
            if (!it.value().is_string()) throw InputError("label values must be strings");
            g.labels[v] = it.value().get<std::string>();
        }
    }
    return g;
}

inline ordered_json td_to_json(const TreeDecomposition& td) {
    ordered_json j;
    j["tree"] = graph_to_json(td.tree);
    j["parts"] = td.parts;
    return j;
}

inline TreeDecomposition td_from_json(const ordered_json& j) {
    TreeDecomposition td;
    td.tree = graph_from_json(detail::field(j, "tree"));
    const ordered_json& pj = detail::field(j, "parts");
    if (!pj.is_array()) throw InputError("\"parts\" must be an array");
    for (const auto& p : pj) td.parts.push_back(detail::int_list(p, "part"));
    return td;
}

inline ordered_json map_to_json(const PartialMap& m) { return m.img; }

inline PartialMap map_from_json(const ordered_json& j, int n = -1) {
    PartialMap m(detail::int_list(j, "map"));
    if (n >= 0 && m.size() != n) throw InputError("map length disagrees with vertex count");
    return m;
}

inline ordered_json action_to_json(const Action& a) {
    ordered_json j;
    j["name"] = a.name;
    ordered_json gens = ordered_json::array();
    for (const PartialMap& m : a.generators) gens.push_back(map_to_json(m));
    j["generators"] = std::move(gens);
    return j;
}

inline Action action_from_json(const ordered_json& j, int n = -1) {
    Action a;
    if (j.contains("name")) {
        if (!j.at("name").is_string()) throw InputError("action name must be a string");
        a.name = j.at("name").get<std::string>();
    }
    const ordered_json& gj = detail::field(j, "generators");
    if (!gj.is_array()) throw InputError("\"generators\" must be an array");
    for (const auto& g : gj) a.generators.push_back(map_from_json(g, n));
    return a;
}

namespace detail {

inline std::vector<int> flagged_ids(const std::vector<char>& flags) {
    std::vector<int> out;
    for (size_t i = 0; i < flags.size(); ++i)
        if (flags[i]) out.push_back(static_cast<int>(i));
    return out;
}

inline std::vector<char> flags_from_ids(const std::vector<int>& ids, int n, const std::string& where) {
    std::vector<char> out(static_cast<size_t>(n), 0);
    for (int v : ids) {
        if (v < 0 || v >= n) throw InputError(where + " vertex out of range");
        out[static_cast<size_t>(v)] = 1;
    }
    return out;
}

}  // namespace detail

inline ordered_json spec_to_json(const AmalgamationSpec& spec) {
    ordered_json j;
    j["name"] = spec.name;
    j["type"] = spec.type2 ? 2 : 1;
    j["factor1"] = graph_to_json(spec.g1);
    j["sets1"] = spec.sets1;
    if (spec.type2) {
        j["jSet"] = spec.jSet;
    } else {
        j["factor2"] = graph_to_json(spec.g2);
        j["sets2"] = spec.sets2;
    }
    ordered_json bonding = ordered_json::array();
    for (const auto& [key, image] : spec.bondingImages) {
        ordered_json entry;
        entry["from"] = key.first;
        entry["to"] = key.second;
        entry["image"] = image;
        bonding.push_back(std::move(entry));
    }
    j["bonding"] = std::move(bonding);
    std::vector<int> b1 = detail::flagged_ids(spec.boundary1);
    std::vector<int> b2 = detail::flagged_ids(spec.boundary2);
    if (!b1.empty()) j["boundary1"] = b1;
    if (!b2.empty()) j["boundary2"] = b2;
    return j;
}

inline AmalgamationSpec spec_from_json(const ordered_json& j) {
    AmalgamationSpec spec;
    if (j.contains("name")) {
        if (!j.at("name").is_string()) throw InputError("spec name must be a string");
        spec.name = j.at("name").get<std::string>();
    }
    int type = detail::int_field(j, "type");
    if (type != 1 && type != 2) throw InputError("\"type\" must be 1 or 2");
    spec.type2 = type == 2;
    spec.g1 = graph_from_json(detail::field(j, "factor1"));
    const ordered_json& s1 = detail::field(j, "sets1");
    if (!s1.is_array()) throw InputError("\"sets1\" must be an array");
    for (const auto& s : s1) spec.sets1.push_back(detail::int_list(s, "adhesion set"));
    if (spec.type2) {
        spec.jSet = detail::int_list(detail::field(j, "jSet"), "\"jSet\"");
    } else {
        spec.g2 = graph_from_json(detail::field(j, "factor2"));
        const ordered_json& s2 = detail::field(j, "sets2");
        if (!s2.is_array()) throw InputError("\"sets2\" must be an array");
        for (const auto& s : s2) spec.sets2.push_back(detail::int_list(s, "adhesion set"));
    }
    const ordered_json& bj = detail::field(j, "bonding");
    if (!bj.is_array()) throw InputError("\"bonding\" must be an array");
    for (const auto& entry : bj) {
        int k = detail::int_field(entry, "from");
        int l = detail::int_field(entry, "to");
        std::vector<int> image = detail::int_list(detail::field(entry, "image"), "bonding image");
        if (spec.bondingImages.count({k, l})) throw InputError("duplicate bonding entry");
        spec.bondingImages[{k, l}] = std::move(image);
    }
    spec.boundary1 = detail::flags_from_ids(
        j.contains("boundary1") ? detail::int_list(j.at("boundary1"), "\"boundary1\"") : std::vector<int>{}, spec.g1.n,
        "boundary1");
    int n2 = spec.type2 ? spec.g1.n : spec.g2.n;
    spec.boundary2 = detail::flags_from_ids(
        j.contains("boundary2") ? detail::int_list(j.at("boundary2"), "\"boundary2\"") : std::vector<int>{}, n2,
        "boundary2");
    return spec;
}

// Amalgamation data plus the factor symmetry generators that travel with it.
struct SpecBundle {
    AmalgamationSpec spec;
    Action side1;
    Action side2;
};

inline ordered_json spec_bundle_to_json(const AmalgamationSpec& spec, const Action& side1, const Action& side2) {
    ordered_json j = spec_to_json(spec);
    j["group1"] = action_to_json(side1);
    if (!spec.type2) j["group2"] = action_to_json(side2);
    return j;
}

inline SpecBundle spec_bundle_from_json(const ordered_json& j) {
    SpecBundle b;
    b.spec = spec_from_json(j);
    if (j.contains("group1")) b.side1 = action_from_json(j.at("group1"), b.spec.g1.n);
    if (j.contains("group2")) b.side2 = action_from_json(j.at("group2"), b.spec.type2 ? b.spec.g1.n : b.spec.g2.n);
    if (b.spec.type2) b.side2 = b.side1;
    return b;
}

inline ordered_json validation_to_json(const ValidationReport& rep) {
    ordered_json j;
    j["ok"] = rep.ok();
    ordered_json items = ordered_json::array();
    for (const Violation& v : rep.items) {
        ordered_json item;
        item["kind"] = v.kind;
        item["message"] = v.message;
        if (v.u >= 0) item["u"] = v.u;
        if (v.v >= 0) item["v"] = v.v;
        items.push_back(std::move(item));
    }
    j["violations"] = std::move(items);
    return j;
}

inline ordered_json td_report_to_json(const TdReport& rep) {
    ordered_json j;
    j["ok"] = rep.ok();
    ordered_json items = ordered_json::array();
    for (const TdViolation& v : rep.items) {
        ordered_json item;
        item["axiom"] = v.axiom;
        item["message"] = v.message;
        item["data"] = v.data;
        items.push_back(std::move(item));
    }
    j["violations"] = std::move(items);
    return j;
}

inline ordered_json patch_to_json(const Patch& p) {
    ordered_json j;
    j["graph"] = graph_to_json(p.graph);
    j["boundary"] = detail::flagged_ids(p.boundary);
    j["root"] = p.root;
    j["innerRadius"] = p.innerRadius;
    return j;
}

inline Patch patch_from_json(const ordered_json& j) {
    Patch p;
    p.graph = graph_from_json(detail::field(j, "graph"));
    p.boundary = detail::flags_from_ids(detail::int_list(detail::field(j, "boundary"), "\"boundary\""), p.graph.n,
                                        "boundary");
    p.root = detail::int_field(j, "root");
    if (p.root < 0 || p.root >= p.graph.n) throw InputError("patch root out of range");
    if (j.contains("innerRadius"))
        p.innerRadius = detail::int_field(j, "innerRadius");
    else
        p.innerRadius = computed_inner_radius(p.graph, p.boundary, p.root);
    return p;
}

inline ordered_json build_to_json(const BuildResult& build) {
    ordered_json j;
    j["patch"] = patch_to_json(build.patch);
    j["rootVertex"] = build.rootVertex;
    j["treeNodes"] = build.tree.tree.n;
    ordered_json prov = ordered_json::array();
    for (const auto& cls : build.provenance) {
        ordered_json entry = ordered_json::array();
        for (auto [node, local] : cls) entry.push_back({node, local});
        prov.push_back(std::move(entry));
    }
    j["provenance"] = std::move(prov);
    j["inducedTd"] = td_to_json(build.inducedTd);
    j["identLengths"] = build.identLengths;
    j["maxIdentLength"] = build.maxIdentLength;
    return j;
}

inline ordered_json orientation_to_json(const OrientationData& o) {
    ordered_json j;
    j["ok"] = o.ok;
    if (!o.message.empty()) j["message"] = o.message;
    j["baseEdge"] = {o.s0, o.t0};
    j["reduced"] = o.reduced;
    j["type"] = o.type2 ? 2 : 1;
    j["kHeads"] = o.kHeads;
    j["lHeads"] = o.lHeads;
    return j;
}

inline ordered_json split_to_json(const SplitResult& res) {
    ordered_json j;
    j["status"] = to_string(res.status);
    if (!res.message.empty()) j["message"] = res.message;
    j["separatorOrbit"] = res.separatorOrbit;
    if (res.status == SplitStatus::Split) {
        j["td"] = td_to_json(res.td);
        j["basicAtScale"] = res.basic.basicAtScale;
        j["edgeOrbits"] = res.basic.edgeOrbitCountAtScale;
        j["maxAdhesionSize"] = res.basic.maxAdhesionSize;
        j["derived"] = spec_to_json(res.derived.spec);
        j["orientation"] = orientation_to_json(res.derived.orientation);
    }
    if (!res.crossA.empty() || !res.crossB.empty()) {
        j["crossA"] = res.crossA;
        j["crossB"] = res.crossB;
    }
    return j;
}

inline ordered_json factorisation_to_json(const FactorisationResult& res) {
    ordered_json j;
    j["allTerminal"] = res.allTerminal;
    j["maxDepth"] = res.maxDepthSeen;
    ordered_json nodes = ordered_json::array();
    for (const FactorisationNode& node : res.nodes) {
        ordered_json nj;
        nj["status"] = to_string(node.status);
        nj["depth"] = node.depth;
        nj["vertices"] = node.patch.graph.n;
        nj["oneSided"] = node.oneSided;
        if (!node.note.empty()) nj["note"] = node.note;
        nj["children"] = node.children;
        nodes.push_back(std::move(nj));
    }
    j["nodes"] = std::move(nodes);
    return j;
}

inline ordered_json probe_to_json(const ProbeResult& res) {
    ordered_json j;
    j["consistent"] = res.consistent;
    j["progressing"] = res.progressing;
    ordered_json entries = ordered_json::array();
    for (const ProbeEntry& e : res.entries) {
        ordered_json ej;
        ej["radius"] = e.radius;
        ej["summary"] = e.summary;
        ej["progressed"] = e.progressed;
        ej["terminal"] = e.terminal;
        entries.push_back(std::move(ej));
    }
    j["entries"] = std::move(entries);
    return j;
}

inline ordered_json ends_to_json(const std::vector<EndRegion>& regions) {
    ordered_json j = ordered_json::array();
    for (const EndRegion& r : regions) {
        ordered_json rj;
        rj["separator"] = r.separator;
        rj["size"] = static_cast<int>(r.vertices.size());
        rj["vertices"] = r.vertices;
        rj["reachesBoundary"] = r.reachesBoundary;
        j.push_back(std::move(rj));
    }
    return j;
}

inline ordered_json delta_to_json(const DeltaReport& rep) {
    ordered_json j;
    j["delta"] = rep.delta;
    j["triple"] = rep.triple;
    j["vertex"] = rep.vertex;
    return j;
}

inline ordered_json experiment_to_json(const HyperbolicityExperiment& rep) {
    ordered_json j;
    j["radius"] = rep.radius;
    j["innerRadius"] = rep.innerRadius;
    j["adhesionSpread"] = rep.adhesionSpread;
    j["gamma"] = rep.gamma;
    j["sampleRadius"] = rep.sampleRadius;
    j["sampleSize"] = rep.sampleSize;
    j["delta"] = delta_to_json(rep.delta);
    j["pairsTested"] = rep.pairsTested;
    j["violations"] = rep.violations;
    if (rep.pairsTested > 0) {
        j["worstSlack"] = rep.worstSlack;
        j["worstPair"] = rep.worstPair;
    }
    if (!rep.note.empty()) j["note"] = rep.note;
    return j;
}

inline ordered_json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
    return j;
}

// Write-to-temp-then-rename so readers never observe a half-written file.
inline void write_text_atomic(const std::string& path, const std::string& text) {
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw InputError("cannot write " + tmp.string());
        out << text;
        if (!out) throw InputError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

inline void write_json_atomic(const std::string& path, const ordered_json& j) {
    write_text_atomic(path, j.dump(2) + "\n");
}

}  // namespace amalg
