#ifndef QUBOLAB_SOLVE_RESULT_HPP
#define QUBOLAB_SOLVE_RESULT_HPP

#include <string>
#include <utility>
#include <vector>

#include "qubolab/graph.hpp"

namespace qubolab {

/// Outcome shared by every solver. best_value always equals the Hamiltonian
/// of best_assignment (re-evaluated before returning), and the trace has one
/// row per epoch/iteration run.
struct SolveResult {
    std::string solver;
    Assignment best_assignment;
    long long best_value = 0;
    long long epochs = 0;
    std::string stop_reason;
    double seconds = 0.0;

    std::vector<std::string> trace_columns;
    std::vector<std::vector<double>> trace;

    /// Solver-specific scalar summaries (e.g. PI-GNN's least-loss projection).
    std::vector<std::pair<std::string, double>> extras;
};

}  // namespace qubolab

#endif
