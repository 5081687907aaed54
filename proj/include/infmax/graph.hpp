#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace infmax {

using NodeId = std::uint32_t;

/// Immutable undirected simple graph in CSR form.
///
/// Internal node ids are dense (0..n-1); the original file labels are kept
/// so results can be reported in the input's vocabulary. Adjacency lists are
/// sorted, loop-free and duplicate-free, and symmetric by construction.
class Graph {
public:
    Graph() = default;

    /// Build from an explicit edge list over ids 0..n-1. Edges are
    /// symmetrized, self-loops dropped and duplicates collapsed, exactly as
    /// the text loader does. Labels default to the decimal ids.
    static Graph from_edges(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
        std::vector<std::string> labels(n);
        for (std::size_t v = 0; v < n; ++v) labels[v] = std::to_string(v);
        return Graph(std::move(labels), edges);
    }

    Graph(std::vector<std::string> labels, const std::vector<std::pair<NodeId, NodeId>>& edges)
        : labels_(std::move(labels)) {
        const std::size_t n = labels_.size();
        std::vector<std::pair<NodeId, NodeId>> norm;
        norm.reserve(edges.size());
        for (auto [u, v] : edges) {
            if (u >= n || v >= n) throw std::out_of_range("edge endpoint out of range");
            if (u == v) continue;
            norm.emplace_back(std::min(u, v), std::max(u, v));
        }
        std::sort(norm.begin(), norm.end());
        norm.erase(std::unique(norm.begin(), norm.end()), norm.end());
        edge_count_ = norm.size();

        std::vector<std::size_t> deg(n, 0);
        for (auto [u, v] : norm) {
            ++deg[u];
            ++deg[v];
        }
        offsets_.assign(n + 1, 0);
        for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
        adjacency_.resize(2 * edge_count_);
        std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
        for (auto [u, v] : norm) {
            adjacency_[cursor[u]++] = v;
            adjacency_[cursor[v]++] = u;
        }
        // Neighbor ids arrive in sorted order already (norm is sorted by
        // (u,v)), except for the v-side inserts; sort each list once.
        for (std::size_t v = 0; v < n; ++v)
            std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                      adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
    }

    std::size_t node_count() const { return labels_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    std::span<const NodeId> neighbors(NodeId v) const {
        check_node(v);
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }

    std::size_t degree(NodeId v) const {
        check_node(v);
        return offsets_[v + 1] - offsets_[v];
    }

    const std::string& label(NodeId v) const {
        check_node(v);
        return labels_[v];
    }

    std::size_t max_degree() const {
        std::size_t best = 0;
        for (std::size_t v = 0; v + 1 < offsets_.size(); ++v)
            best = std::max(best, offsets_[v + 1] - offsets_[v]);
        return best;
    }

    double mean_degree() const {
        if (node_count() == 0) return 0.0;
        return 2.0 * static_cast<double>(edge_count_) / static_cast<double>(node_count());
    }

    bool has_edge(NodeId u, NodeId v) const {
        auto adj = neighbors(u);
        return std::binary_search(adj.begin(), adj.end(), v);
    }

    void check_node(NodeId v) const {
        if (v >= labels_.size()) throw std::out_of_range("node id out of range");
    }

private:
    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> adjacency_;
    std::vector<std::string> labels_;
    std::size_t edge_count_ = 0;
};

/// Parse an edge-list text stream: one edge per line as two whitespace
/// separated labels, '#'/'%' lines are comments. Directed inputs are
/// symmetrized; self-loops are dropped (their label still registers a node);
/// duplicate edges collapse. Labels map to dense ids in first-seen order.
inline Graph load_edge_list(std::istream& in) {
    std::unordered_map<std::string, NodeId> ids;
    std::vector<std::string> labels;
    std::vector<std::pair<NodeId, NodeId>> edges;

    auto intern = [&](const std::string& token) -> NodeId {
        auto it = ids.find(token);
        if (it != ids.end()) return it->second;
        NodeId id = static_cast<NodeId>(labels.size());
        ids.emplace(token, id);
        labels.push_back(token);
        return id;
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a)) continue;  // blank line
        if (a[0] == '#' || a[0] == '%') continue;
        if (!(ls >> b) || (ls >> extra)) {
            throw std::runtime_error("edge list parse error at line " + std::to_string(lineno) +
                                     ": expected two tokens");
        }
        NodeId u = intern(a);
        NodeId v = intern(b);
        if (u != v) edges.emplace_back(u, v);
    }
    if (labels.empty()) throw std::runtime_error("edge list is empty");
    return Graph(std::move(labels), edges);
}

inline Graph load_edge_list_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("cannot open edge list file: " + path);
    return load_edge_list(file);
}

/// Inverse of load_edge_list: each edge once as "label label". Isolated
/// nodes are written as self-loops so the loader re-registers them.
inline void write_edge_list(const Graph& g, std::ostream& out) {
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (g.degree(u) == 0) {
            out << g.label(u) << ' ' << g.label(u) << '\n';
            continue;
        }
        for (NodeId v : g.neighbors(u))
            if (u < v) out << g.label(u) << ' ' << g.label(v) << '\n';
    }
}

/// Nodes at shortest-path distance <= hops from any source, sources included.
inline std::vector<NodeId> khop_neighborhood(const Graph& g, std::span<const NodeId> sources,
                                             unsigned hops) {
    std::vector<std::int8_t> dist(g.node_count(), -1);
    std::vector<NodeId> frontier;
    std::vector<NodeId> reached;
    for (NodeId s : sources) {
        if (s >= g.node_count()) throw std::out_of_range("source node out of range");
        if (dist[s] < 0) {
            dist[s] = 0;
            frontier.push_back(s);
            reached.push_back(s);
        }
    }
    for (unsigned h = 1; h <= hops && !frontier.empty(); ++h) {
        std::vector<NodeId> next;
        for (NodeId u : frontier) {
            for (NodeId w : g.neighbors(u)) {
                if (dist[w] < 0) {
                    dist[w] = static_cast<std::int8_t>(h <= 127 ? h : 127);
                    next.push_back(w);
                    reached.push_back(w);
                }
            }
        }
        frontier = std::move(next);
    }
    std::sort(reached.begin(), reached.end());
    return reached;
}

}  // namespace infmax
