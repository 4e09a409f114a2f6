#ifndef QUBOLAB_ORACLE_HPP
#define QUBOLAB_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "qubolab/graph.hpp"

namespace qubolab {

struct OracleResult {
    long long optimal_value = 0;
    Assignment assignment;
    long long optimal_count = 0;  // over all 2^n labelings
};

/// Exhaustive Max-Cut optimum. Enumerates the 2^(n-1) labelings with node 0
/// fixed to 0 (the cut is invariant under flipping every label). Guarded to
/// n <= 24.
OracleResult brute_force_maxcut(const Graph& g);

/// First-improvement 1-flip local search from a seeded random start: scans
/// nodes in ascending index order, flips the first node whose flip strictly
/// increases the cut, restarts the scan, and stops when no flip improves.
/// flips_out, when given, receives the cut value after each accepted flip.
Assignment local_search_1flip(const Graph& g, std::uint64_t seed,
                              std::vector<long long>* flips_out = nullptr);

}  // namespace qubolab

#endif
