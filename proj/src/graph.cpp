#include "qubolab/graph.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qubolab/errors.hpp"
#include "qubolab/rng.hpp"

namespace qubolab {

Graph::Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
    if (n <= 0) throw std::invalid_argument("graph must have a positive node count");
    edges_.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u == v) throw std::invalid_argument("self-loop at node " + std::to_string(u));
        if (u > v) std::swap(u, v);
        if (u < 0 || v >= n)
            throw std::invalid_argument("edge endpoint out of range: (" + std::to_string(u) +
                                        ", " + std::to_string(v) + ")");
        edges_.emplace_back(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw std::invalid_argument("duplicate edge");
    adjacency_.assign(n_, {});
    for (auto [u, v] : edges_) {
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

namespace {

// Strips a trailing '\r' so CRLF input parses the same as LF.
std::string chomp(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

bool parse_two_ints(const std::string& line, long long& a, long long& b) {
    std::istringstream in(line);
    std::string extra;
    if (!(in >> a >> b)) return false;
    if (in >> extra) return false;
    return true;
}

}  // namespace

Graph parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    long long lineno = 0;

    long long n = 0, m = 0;
    if (!std::getline(in, line)) throw ParseError(1, "missing header line \"n m\"");
    ++lineno;
    if (!parse_two_ints(chomp(line), n, m)) throw ParseError(lineno, "expected header \"n m\"");
    if (n <= 0) throw ParseError(lineno, "node count must be positive");
    if (m < 0) throw ParseError(lineno, "edge count must be non-negative");
    if (m > Graph::max_edges(static_cast<int>(n)))
        throw ParseError(lineno, "edge count exceeds n(n-1)/2");

    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(m));
    std::set<std::pair<int, int>> seen;
    while (std::getline(in, line)) {
        ++lineno;
        line = chomp(line);
        if (line.find_first_not_of(" \t") == std::string::npos) continue;  // blank line
        if (static_cast<long long>(edges.size()) == m)
            throw ParseError(lineno, "more than " + std::to_string(m) + " edge lines");
        long long u = 0, v = 0;
        if (!parse_two_ints(line, u, v)) throw ParseError(lineno, "expected \"u v\"");
        if (u == v) throw ParseError(lineno, "self-loop at node " + std::to_string(u));
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw ParseError(lineno, "endpoint out of range [0, " + std::to_string(n) + ")");
        int a = static_cast<int>(std::min(u, v));
        int b = static_cast<int>(std::max(u, v));
        if (!seen.insert({a, b}).second)
            throw ParseError(lineno, "duplicate edge (" + std::to_string(a) + ", " +
                                         std::to_string(b) + ")");
        edges.emplace_back(a, b);
    }
    if (static_cast<long long>(edges.size()) != m)
        throw ParseError(lineno, "expected " + std::to_string(m) + " edges, got " +
                                     std::to_string(edges.size()));
    return Graph(static_cast<int>(n), std::move(edges));
}

std::string write_edge_list(const Graph& g) {
    std::ostringstream out;
    out << g.nodes() << ' ' << g.edge_count() << '\n';
    for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
    return out.str();
}

Graph generate_random_graph(int n, long long m, std::uint64_t seed) {
    if (n <= 0) throw std::invalid_argument("node count must be positive");
    long long total = Graph::max_edges(n);
    if (m < 0 || m > total)
        throw std::invalid_argument("edge count " + std::to_string(m) + " exceeds maximum " +
                                    std::to_string(total));
    Rng rng(seed);

    // Floyd's subset sampling: uniform m-subset of [0, total) in O(m) draws.
    std::set<long long> picked;
    for (long long j = total - m; j < total; ++j) {
        long long t = static_cast<long long>(rng.next_below(static_cast<std::uint64_t>(j) + 1));
        if (!picked.insert(t).second) picked.insert(j);
    }

    // Decode linear pair index k into (u, v), u < v, row-major over rows u.
    std::vector<std::pair<int, int>> edges;
    edges.reserve(picked.size());
    int u = 0;
    long long row_start = 0;  // index of pair (u, u+1)
    for (long long k : picked) {
        while (k >= row_start + (n - 1 - u)) {
            row_start += n - 1 - u;
            ++u;
        }
        int v = u + 1 + static_cast<int>(k - row_start);
        edges.emplace_back(u, v);
    }
    return Graph(n, std::move(edges));
}

long long cut_size(const Graph& g, const Assignment& x) {
    if (static_cast<int>(x.size()) != g.nodes())
        throw std::invalid_argument("assignment length does not match node count");
    long long cut = 0;
    for (auto [u, v] : g.edges())
        if (x[u] != x[v]) ++cut;
    return cut;
}

}  // namespace qubolab
