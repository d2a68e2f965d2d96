#pragma once

#include "combforge/decomposition.hpp"
#include "combforge/tree.hpp"

#include <sstream>

namespace combforge {

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

//! Parent-edge rendering with one rank row per tree height.
inline std::string tree_dot(const GraphOracle& g, const RootedTree& t) {
    std::ostringstream os;
    os << "digraph tree {\n  rankdir=TB;\n  node [shape=circle, fontsize=10];\n";
    std::map<int, std::vector<VertexId>> by_height;
    for (VertexId v : t.order()) by_height[t.height(v)].push_back(v);
    for (VertexId v : t.order())
        os << "  n" << v << " [label=\"" << detail::dot_escape(g.label(v)) << "\"];\n";
    for (auto& [h, vs] : by_height) {
        os << "  { rank=same;";
        for (VertexId v : vs) os << " n" << v << ";";
        os << " }\n";
    }
    for (VertexId v : t.order())
        if (auto p = t.parent(v)) os << "  n" << *p << " -> n" << v << ";\n";
    os << "}\n";
    return os.str();
}

//! A bundle of host paths (star rays, comb spine and teeth, fan paths) as an
//! undirected overlay; `emphasis` vertices (centers, spines) are doubled.
inline std::string paths_dot(const GraphOracle& g,
                             const std::vector<std::vector<VertexId>>& paths,
                             const std::vector<VertexId>& emphasis) {
    std::ostringstream os;
    os << "graph paths {\n  node [shape=circle, fontsize=10];\n";
    std::set<VertexId> seen;
    auto declare = [&](VertexId v, bool strong) {
        if (!seen.insert(v).second) return;
        os << "  n" << v << " [label=\"" << detail::dot_escape(g.label(v)) << "\""
           << (strong ? ", peripheries=2" : "") << "];\n";
    };
    for (VertexId v : emphasis) declare(v, true);
    for (const auto& p : paths)
        for (VertexId v : p) declare(v, false);
    for (std::size_t i = 0; i + 1 < emphasis.size(); ++i)
        os << "  n" << emphasis[i] << " -- n" << emphasis[i + 1] << " [penwidth=2];\n";
    for (const auto& p : paths)
        for (std::size_t i = 0; i + 1 < p.size(); ++i)
            os << "  n" << p[i] << " -- n" << p[i + 1] << ";\n";
    os << "}\n";
    return os.str();
}

//! Decomposition tree with part samples in the nodes and separators on the
//! edges.
inline std::string decomposition_dot(const GraphOracle& g, const TreeDecomposition& dec,
                                     std::size_t sample = 6) {
    std::ostringstream os;
    os << "digraph decomposition {\n  rankdir=TB;\n  node [shape=box, fontsize=10];\n";
    for (const auto& n : dec.nodes) {
        std::string label =
            detail::dot_escape(n.label.empty() ? ("t" + std::to_string(n.id)) : n.label);
        label += "\\n";
        std::size_t m = 0;
        if (n.part_finite) {
            for (VertexId v : n.finite_part) {
                if (m >= sample) { label += "…"; break; }
                if (m++) label += " ";
                label += detail::dot_escape(g.label(v));
            }
        } else {
            for (VertexId v = 0; v < 100000 && m <= sample; ++v) {
                if (!g.has_vertex(v)) break;
                if (!n.part(v)) continue;
                if (m == sample) { label += "…"; break; }
                if (m++) label += " ";
                label += detail::dot_escape(g.label(v));
            }
        }
        os << "  d" << n.id << " [label=\"" << label << "\"];\n";
    }
    for (const auto& n : dec.nodes) {
        if (n.parent < 0) continue;
        std::string sep;
        for (std::size_t i = 0; i < n.separator.size(); ++i) {
            if (i == sample) { sep += "…"; break; }
            if (i) sep += " ";
            sep += detail::dot_escape(g.label(n.separator[i]));
        }
        os << "  d" << n.parent << " -> d" << n.id << " [label=\"" << sep << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace combforge
