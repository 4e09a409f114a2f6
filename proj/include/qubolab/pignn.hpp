#ifndef QUBOLAB_PIGNN_HPP
#define QUBOLAB_PIGNN_HPP

#include <cstdint>

#include "qubolab/autodiff.hpp"
#include "qubolab/layers.hpp"
#include "qubolab/solve_result.hpp"
#include "qubolab/stopping.hpp"

namespace qubolab {

/// Default layer width: ceil(sqrt(n)), or ceil(cbrt(n)) from 1e5 nodes up.
int default_width(int n);

struct PignnConfig {
    int d1 = 0;  // 0: derive from the node count
    int d2 = 0;  // 0: ceil(d1 / 2)
    double lr = 1e-4;
    long long patience = 100;
    StopMode stop_mode = StopMode::fuzzy;
    double tol = 1e-4;  // strict mode only
    double beta = 0.5;  // projection threshold
    long long max_epochs = 100000;
    double dropout = 0.0;
    std::uint64_t seed = 1;
};

/// Slots: embedding (n x d1), gcn1 (d1 x d1), gcn2 (d1 x d2), head (d2 x 1).
ParamStore pignn_init_params(const Graph& g, const PignnConfig& cfg);

/// embeddings -> GCN -> ELU -> dropout -> GCN -> head -> sigmoid; returns the
/// n x 1 node-probability vector, tape-registered.
TapeRef pignn_forward(Tape& tape, const NormalizedAdjacency& adj, ParamStore& params,
                      const PignnConfig& cfg, Rng& dropout_rng);

/// -sum_{i<=j} P_i Q_ij P_j as a tape scalar.
TapeRef pignn_loss(Tape& tape, const QuboMatrix& q, TapeRef probs);

/// Hard projection: x_i = 1 iff P_i >= beta.
Assignment project(const DenseMatrix& probs, double beta);

/// Trains with Adam, projecting and scoring every epoch, tracking the best
/// assignment ever seen; stops on the loss monitor or the epoch cap.
SolveResult train_pignn(const Graph& g, const PignnConfig& cfg);

}  // namespace qubolab

#endif
