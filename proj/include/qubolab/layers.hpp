#ifndef QUBOLAB_LAYERS_HPP
#define QUBOLAB_LAYERS_HPP

#include <cstdint>

#include "qubolab/autodiff.hpp"

namespace qubolab {

/// Glorot-uniform init: entries in [-L, L], L = sqrt(6 / (rows + cols)).
DenseMatrix glorot_init(int rows, int cols, Rng& rng);
DenseMatrix glorot_init(int rows, int cols, std::uint64_t seed);

/// Graph convolution A_hat * (h * w); h is n x d_in, w is d_in x d_out.
TapeRef gcn_forward(Tape& tape, const NormalizedAdjacency& adj, TapeRef h, TapeRef w);

/// Single-head graph attention over N(i) u {i} with leaky-relu slope 0.2.
/// attn is the concatenated score vector (2 d_out x 1): the first d_out rows
/// weight the node's own transformed features, the rest its neighbor's.
TapeRef gat_forward(Tape& tape, const Graph& g, TapeRef h, TapeRef w, TapeRef attn);

inline TapeRef apply_activation(Tape& tape, Activation kind, TapeRef m) {
    return tape.activation(kind, m);
}

}  // namespace qubolab

#endif
