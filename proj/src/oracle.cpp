#include "qubolab/oracle.hpp"

#include <stdexcept>

#include "qubolab/rng.hpp"

namespace qubolab {

OracleResult brute_force_maxcut(const Graph& g) {
    int n = g.nodes();
    if (n > 24) throw std::invalid_argument("brute force limited to n <= 24");

    OracleResult best;
    best.optimal_value = -1;
    const auto& edges = g.edges();
    std::uint64_t limit = n == 1 ? 1 : (std::uint64_t{1} << (n - 1));
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        // Node 0 is the lowest bit and stays 0 because mask < 2^(n-1)
        // only covers bits 1..n-1 when shifted below.
        std::uint64_t labels = mask << 1;
        long long cut = 0;
        for (auto [u, v] : edges) cut += ((labels >> u) ^ (labels >> v)) & 1u;
        if (cut > best.optimal_value) {
            best.optimal_value = cut;
            best.optimal_count = 1;
            best.assignment.assign(n, 0);
            for (int v = 0; v < n; ++v) best.assignment[v] = static_cast<int>((labels >> v) & 1u);
        } else if (cut == best.optimal_value) {
            ++best.optimal_count;
        }
    }
    best.optimal_count *= 2;  // each canonical labeling has a flipped twin
    return best;
}

Assignment local_search_1flip(const Graph& g, std::uint64_t seed,
                              std::vector<long long>* flips_out) {
    int n = g.nodes();
    Rng rng(seed);
    Assignment x(n);
    for (int v = 0; v < n; ++v) x[v] = static_cast<int>(rng.next_below(2));

    long long cut = cut_size(g, x);
    bool improved = true;
    while (improved) {
        improved = false;
        for (int v = 0; v < n && !improved; ++v) {
            // Flipping v turns its cut edges uncut and vice versa.
            long long cut_deg = 0;
            for (int u : g.neighbors(v))
                if (x[u] != x[v]) ++cut_deg;
            long long gain = g.degree(v) - 2 * cut_deg;
            if (gain > 0) {
                x[v] ^= 1;
                cut += gain;
                if (flips_out) flips_out->push_back(cut);
                improved = true;
            }
        }
    }
    return x;
}

}  // namespace qubolab
