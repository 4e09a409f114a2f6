#ifndef QUBOLAB_AUTODIFF_HPP
#define QUBOLAB_AUTODIFF_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "qubolab/graph.hpp"
#include "qubolab/matrix.hpp"
#include "qubolab/params.hpp"
#include "qubolab/qubo.hpp"
#include "qubolab/rng.hpp"

namespace qubolab {

class Rng;

enum class Activation { sigmoid, relu, elu, tanh, leaky_relu };

/// A_hat = D^{-1/2} (A + I) D^{-1/2}, with D the degree matrix of A + I.
/// Symmetric, strictly positive entries; an isolated node keeps self-loop
/// weight 1.
struct NormalizedAdjacency {
    int n = 0;
    // Per-row (column, weight) entries, sorted by column.
    std::vector<std::vector<std::pair<int, double>>> rows;
};

NormalizedAdjacency normalize_adjacency(const Graph& g);

/// Handle to a tape node. Valid until the owning tape is cleared.
struct TapeRef {
    int idx = -1;
};

/// Reverse-mode gradient tape over DenseMatrix values. Ops append nodes;
/// backward() replays them in reverse, accumulates into the bound
/// ParamStore gradients and clears the tape. One tape per training run;
/// never shared across threads.
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    TapeRef constant(DenseMatrix v);
    TapeRef parameter(ParamStore& store, const std::string& name);

    TapeRef matmul(TapeRef a, TapeRef b);
    /// a * b^T
    TapeRef matmul_nt(TapeRef a, TapeRef b);
    TapeRef add(TapeRef a, TapeRef b);
    /// Elementwise scale * a + shift.
    TapeRef affine(TapeRef a, double scale, double shift);
    TapeRef activation(Activation kind, TapeRef a);
    /// Sparse-dense product A_hat * h. Relies on the adjacency being symmetric.
    TapeRef spmm(const NormalizedAdjacency& adj, TapeRef h);
    /// Row i of the output is sum of h's rows over N(i) (no self term).
    TapeRef neighbor_sum(const Graph& g, TapeRef h);
    TapeRef row(TapeRef a, int r);
    /// Rows [r0, r1) as an (r1-r0) x cols slice.
    TapeRef rows(TapeRef a, int r0, int r1);
    /// Single entry as a 1x1 scalar.
    TapeRef entry(TapeRef a, int r, int c);
    /// Sum of all entries as a 1x1 scalar.
    TapeRef sum(TapeRef a);
    /// Elementwise natural logarithm; inputs must be positive.
    TapeRef log(TapeRef a);
    /// Inverted-dropout mask drawn from rng; identity when rate == 0.
    TapeRef dropout(TapeRef a, double rate, Rng& rng);

    /// Single-head graph-attention aggregation. Given transformed features
    /// hw (n x d) and per-node score halves (n x 1), computes for every i a
    /// softmax over leaky_relu(score_self[i] + score_nbr[j]) for
    /// j in N(i) u {i} (self first, then neighbors ascending) and returns
    /// the attention-weighted sum of hw rows.
    TapeRef gat_aggregate(const Graph& g, TapeRef hw, TapeRef score_self, TapeRef score_nbr,
                          double slope);

    /// sum_{i<=j} p_i Q_ij p_j as a 1x1 scalar; probs is n x 1.
    TapeRef qubo_quadratic(const QuboMatrix& q, TapeRef probs);

    /// Same quadratic with a subset of variables pinned: pinned-pinned terms
    /// contribute the constant x_i Q_ij x_j, mixed terms x Q p (gradient via
    /// the free side only), free-free terms p Q p.
    TapeRef qubo_perturbed(const QuboMatrix& q, const std::vector<std::uint8_t>& pinned,
                           const Assignment& labels, TapeRef probs);

    const DenseMatrix& value(TapeRef r) const;
    double scalar(TapeRef r) const;
    DenseMatrix& grad_at(int idx);

    /// Accumulates d(loss)/d(param) into every bound parameter slot, then
    /// clears the tape. Throws if loss is not 1x1.
    void backward(TapeRef loss);

    void clear();
    std::size_t size() const { return nodes_.size(); }

private:
    struct Node {
        DenseMatrix value;
        DenseMatrix grad;
        ParamSlot* slot = nullptr;
        std::function<void(Tape&, int)> backprop;
    };

    int push(DenseMatrix value, std::function<void(Tape&, int)> backprop, ParamSlot* slot = nullptr);
    const Node& node(TapeRef r) const;

    std::vector<Node> nodes_;
};

}  // namespace qubolab

#endif
