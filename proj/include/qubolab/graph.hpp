#ifndef QUBOLAB_GRAPH_HPP
#define QUBOLAB_GRAPH_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qubolab {

/// Binary node labeling x in {0,1}^n.
using Assignment = std::vector<int>;

/// Undirected simple graph. Edges are stored canonically as u < v, sorted;
/// adjacency lists are built once at construction. Immutable afterwards, so
/// instances can be shared across concurrent solver runs.
class Graph {
public:
    Graph(int n, std::vector<std::pair<int, int>> edges);

    int nodes() const { return n_; }
    long long edge_count() const { return static_cast<long long>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const { return adjacency_[v]; }
    int degree(int v) const { return static_cast<int>(adjacency_[v].size()); }

    static long long max_edges(int n) {
        return static_cast<long long>(n) * (n - 1) / 2;
    }

private:
    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adjacency_;
};

/// Parses the edge-list interchange format: first line "n m", then m lines
/// "u v" (0-indexed endpoints). Rejects self-loops, out-of-range endpoints
/// and duplicate edges (including reversed duplicates), reporting the
/// offending line number via ParseError.
Graph parse_edge_list(const std::string& text);

/// Serializes to the same format, edges in canonical (u, v) order.
std::string write_edge_list(const Graph& g);

/// G(n, m): exactly m distinct edges sampled uniformly without replacement
/// from all unordered pairs. Same (n, m, seed) always yields the same graph.
Graph generate_random_graph(int n, long long m, std::uint64_t seed);

/// Number of edges (u, v) with x_u != x_v.
long long cut_size(const Graph& g, const Assignment& x);

}  // namespace qubolab

#endif
