#ifndef QUBOLAB_QUBO_HPP
#define QUBOLAB_QUBO_HPP

#include <vector>

#include "qubolab/graph.hpp"

namespace qubolab {

struct QuboTerm {
    int i = 0;
    int j = 0;  // i <= j
    long long coeff = 0;
};

/// Sparse upper-triangular QUBO matrix Q; the objective is
/// sum_{i<=j} x_i Q_ij x_j over binary x. Only nonzero coefficients are
/// stored. Immutable after construction.
class QuboMatrix {
public:
    QuboMatrix(int n, std::vector<QuboTerm> terms);

    int dimension() const { return n_; }
    const std::vector<QuboTerm>& terms() const { return terms_; }

    /// Coefficient Q_ij for i <= j; zero when the entry is not stored.
    long long coefficient(int i, int j) const;

    /// Indices into terms() of every term touching node v (the diagonal
    /// term (v, v) included once).
    const std::vector<int>& incident_terms(int v) const { return incident_[v]; }

private:
    int n_ = 0;
    std::vector<QuboTerm> terms_;
    std::vector<std::vector<int>> incident_;
};

/// Max-Cut encoding: Q_ii = deg(i), Q_ij = -2 per edge, so that
/// x^T Q x equals the cut size of x exactly.
QuboMatrix build_maxcut_qubo(const Graph& g);

/// sum_{i<=j} x_i Q_ij x_j in exact integer arithmetic.
long long evaluate_hamiltonian(const QuboMatrix& q, const Assignment& x);

}  // namespace qubolab

#endif
