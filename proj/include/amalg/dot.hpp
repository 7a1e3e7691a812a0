#pragma once

// Graphviz emitters. Output is deterministic: vertices in id order, edges
// with the lower endpoint first.

#include <sstream>
#include <string>

#include "patch.hpp"
#include "treedecomp.hpp"

namespace amalg {

namespace detail {

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

}  // namespace detail

inline std::string dot_graph(const FiniteGraph& g, const std::string& name = "G") {
    std::ostringstream out;
    out << "graph \"" << detail::dot_escape(name) << "\" {\n";
    for (int v = 0; v < g.n; ++v) {
        out << "  " << v;
        auto it = g.labels.find(v);
        if (it != g.labels.end()) out << " [label=\"" << detail::dot_escape(it->second) << "\"]";
        out << ";\n";
    }
    for (auto [u, v] : g.edge_list()) out << "  " << u << " -- " << v << ";\n";
    out << "}\n";
    return out.str();
}

inline std::string dot_patch(const Patch& p, const std::string& name = "patch") {
    std::ostringstream out;
    out << "graph \"" << detail::dot_escape(name) << "\" {\n";
    for (int v = 0; v < p.graph.n; ++v) {
        out << "  " << v;
        if (v == p.root)
            out << " [shape=doublecircle]";
        else if (p.is_boundary(v))
            out << " [style=dashed]";
        out << ";\n";
    }
    for (auto [u, v] : p.graph.edge_list()) {
        out << "  " << u << " -- " << v;
        if (p.is_boundary(u) && p.is_boundary(v)) out << " [style=dashed]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

inline std::string dot_td(const TreeDecomposition& td, const std::string& name = "decomposition") {
    std::ostringstream out;
    out << "graph \"" << detail::dot_escape(name) << "\" {\n";
    out << "  node [shape=box];\n";
    for (int t = 0; t < td.tree.n; ++t) {
        out << "  " << t << " [label=\"" << t << ": {";
        const std::vector<int>& part = td.part(t);
        for (size_t i = 0; i < part.size(); ++i) out << (i ? "," : "") << part[i];
        out << "}\"];\n";
    }
    for (auto [a, b] : td.tree.edge_list()) out << "  " << a << " -- " << b << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace amalg
