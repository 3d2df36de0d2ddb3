#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hackability/errors.hpp"
#include "hackability/ordering.hpp"

namespace hackability::diagrams {

// Nodes are deduplicated orderings in canonical sorted order. An undirected
// edge joins two orderings no reward pair can invert against each other; a
// directed edge (i, j) means node j simplifies node i (tail = refined
// ordering, head = its coarsening).
struct OrderingGraph {
    std::vector<ordering::PolicyOrdering> nodes;
    std::vector<std::string> policy_names;
    std::set<std::pair<int, int>> undirected_edges;  // i < j
    std::set<std::pair<int, int>> directed_edges;    // (tail, head)
};

namespace detail {

inline std::vector<ordering::PolicyOrdering> canonical_nodes(
    const std::vector<ordering::PolicyOrdering>& orderings) {
    std::vector<ordering::PolicyOrdering> nodes = orderings;
    for (std::size_t i = 1; i < nodes.size(); ++i)
        ordering::require_same_set(nodes[0], nodes[i], "diagram nodes");
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end(),
                            [](const auto& a, const auto& b) { return a.classes == b.classes; }),
                nodes.end());
    return nodes;
}

inline std::set<std::pair<int, int>> unhackable_pairs(
    const std::vector<ordering::PolicyOrdering>& nodes) {
    std::set<std::pair<int, int>> edges;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
        for (int j = i + 1; j < static_cast<int>(nodes.size()); ++j)
            if (!ordering::check_hackable(nodes[i], nodes[j])) edges.insert({i, j});
    return edges;
}

}  // namespace detail

inline OrderingGraph build_unhackability_graph(
    const std::vector<ordering::PolicyOrdering>& orderings,
    std::vector<std::string> policy_names = {}) {
    OrderingGraph g;
    g.nodes = detail::canonical_nodes(orderings);
    g.policy_names = std::move(policy_names);
    g.undirected_edges = detail::unhackable_pairs(g.nodes);
    return g;
}

inline OrderingGraph build_simplification_digraph(
    const std::vector<ordering::PolicyOrdering>& orderings,
    std::vector<std::string> policy_names = {}) {
    OrderingGraph g;
    g.nodes = detail::canonical_nodes(orderings);
    g.policy_names = std::move(policy_names);
    g.undirected_edges = detail::unhackable_pairs(g.nodes);
    for (int i = 0; i < static_cast<int>(g.nodes.size()); ++i)
        for (int j = 0; j < static_cast<int>(g.nodes.size()); ++j) {
            if (i == j) continue;
            auto verdict = ordering::check_simplification(g.nodes[i], g.nodes[j]);
            if (verdict == ordering::SimplificationVerdict::not_simplification) continue;
            g.directed_edges.insert({i, j});
            if (!g.undirected_edges.count({std::min(i, j), std::max(i, j)}))
                throw Error("internal: simplification edge outside the unhackability graph");
        }
    return g;
}

// Renders an ordering as "a=b<c": classes ascending by value, members joined
// with "=". Uses the provided policy names, falling back to bare indices.
inline std::string ordering_label(const ordering::PolicyOrdering& o,
                                  const std::vector<std::string>& policy_names = {}) {
    std::string out;
    for (std::size_t c = 0; c < o.classes.size(); ++c) {
        if (c > 0) out += "<";
        for (std::size_t m = 0; m < o.classes[c].size(); ++m) {
            if (m > 0) out += "=";
            const int idx = o.classes[c][m];
            out += idx < static_cast<int>(policy_names.size()) ? policy_names[idx]
                                                               : std::to_string(idx);
        }
    }
    return out;
}

// Deterministic serialization: node order is the canonical sort, edge order
// is the set order, no timestamps or environment-dependent content.
inline std::string emit_graph(const OrderingGraph& g, const std::string& format) {
    if (format == "dot") {
        const bool directed = !g.directed_edges.empty();
        std::string out = directed ? "digraph simplification {\n" : "graph unhackability {\n";
        for (std::size_t i = 0; i < g.nodes.size(); ++i)
            out += "  n" + std::to_string(i) + " [label=\"" +
                   ordering_label(g.nodes[i], g.policy_names) + "\"];\n";
        if (directed) {
            for (const auto& [tail, head] : g.directed_edges)
                out += "  n" + std::to_string(tail) + " -> n" + std::to_string(head) + ";\n";
        } else {
            for (const auto& [i, j] : g.undirected_edges)
                out += "  n" + std::to_string(i) + " -- n" + std::to_string(j) + ";\n";
        }
        return out + "}\n";
    }
    if (format == "json") {
        nlohmann::ordered_json doc;
        doc["nodes"] = nlohmann::ordered_json::array();
        for (const auto& node : g.nodes) {
            nlohmann::ordered_json entry;
            entry["classes"] = node.classes;
            entry["label"] = ordering_label(node, g.policy_names);
            doc["nodes"].push_back(std::move(entry));
        }
        doc["undirected_edges"] = nlohmann::ordered_json::array();
        for (const auto& [i, j] : g.undirected_edges)
            doc["undirected_edges"].push_back({i, j});
        doc["directed_edges"] = nlohmann::ordered_json::array();
        for (const auto& [tail, head] : g.directed_edges)
            doc["directed_edges"].push_back({tail, head});
        return doc.dump(2) + "\n";
    }
    throw UnknownFormat("emit_graph: unknown format '" + format + "' (expected dot or json)");
}

}  // namespace hackability::diagrams
