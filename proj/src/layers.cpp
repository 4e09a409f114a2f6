#include "qubolab/layers.hpp"

#include <cmath>
#include <stdexcept>

namespace qubolab {

DenseMatrix glorot_init(int rows, int cols, Rng& rng) {
    DenseMatrix m(rows, cols);
    double limit = std::sqrt(6.0 / (rows + cols));
    for (std::size_t k = 0; k < m.size(); ++k) m.data()[k] = rng.next_uniform(-limit, limit);
    return m;
}

DenseMatrix glorot_init(int rows, int cols, std::uint64_t seed) {
    Rng rng(seed);
    return glorot_init(rows, cols, rng);
}

TapeRef gcn_forward(Tape& tape, const NormalizedAdjacency& adj, TapeRef h, TapeRef w) {
    return tape.spmm(adj, tape.matmul(h, w));
}

TapeRef gat_forward(Tape& tape, const Graph& g, TapeRef h, TapeRef w, TapeRef attn) {
    int d_out = tape.value(w).cols();
    if (tape.value(attn).rows() != 2 * d_out || tape.value(attn).cols() != 1)
        throw std::invalid_argument("gat_forward: attn must be 2*d_out x 1");
    TapeRef hw = tape.matmul(h, w);
    TapeRef a_self = tape.rows(attn, 0, d_out);
    TapeRef a_nbr = tape.rows(attn, d_out, 2 * d_out);
    TapeRef s_self = tape.matmul(hw, a_self);
    TapeRef s_nbr = tape.matmul(hw, a_nbr);
    return tape.gat_aggregate(g, hw, s_self, s_nbr, 0.2);
}

}  // namespace qubolab
