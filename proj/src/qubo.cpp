#include "qubolab/qubo.hpp"

#include <algorithm>
#include <stdexcept>

namespace qubolab {

QuboMatrix::QuboMatrix(int n, std::vector<QuboTerm> terms) : n_(n), terms_(std::move(terms)) {
    if (n <= 0) throw std::invalid_argument("QUBO dimension must be positive");
    for (const auto& t : terms_) {
        if (t.i < 0 || t.j >= n_ || t.i > t.j)
            throw std::invalid_argument("QUBO term must satisfy 0 <= i <= j < n");
    }
    std::sort(terms_.begin(), terms_.end(),
              [](const QuboTerm& a, const QuboTerm& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
    for (std::size_t k = 1; k < terms_.size(); ++k)
        if (terms_[k - 1].i == terms_[k].i && terms_[k - 1].j == terms_[k].j)
            throw std::invalid_argument("duplicate QUBO term");
    incident_.assign(n_, {});
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        incident_[terms_[k].i].push_back(static_cast<int>(k));
        if (terms_[k].j != terms_[k].i) incident_[terms_[k].j].push_back(static_cast<int>(k));
    }
}

long long QuboMatrix::coefficient(int i, int j) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), std::pair{i, j},
                               [](const QuboTerm& t, const std::pair<int, int>& key) {
                                   return std::tie(t.i, t.j) < std::tie(key.first, key.second);
                               });
    if (it != terms_.end() && it->i == i && it->j == j) return it->coeff;
    return 0;
}

QuboMatrix build_maxcut_qubo(const Graph& g) {
    // cut(x) = sum_{(i,j) in E} (x_i + x_j - 2 x_i x_j), collected per term.
    std::vector<QuboTerm> terms;
    terms.reserve(static_cast<std::size_t>(g.nodes()) + g.edges().size());
    for (int v = 0; v < g.nodes(); ++v)
        if (g.degree(v) > 0) terms.push_back({v, v, g.degree(v)});
    for (auto [u, v] : g.edges()) terms.push_back({u, v, -2});
    return QuboMatrix(g.nodes(), std::move(terms));
}

long long evaluate_hamiltonian(const QuboMatrix& q, const Assignment& x) {
    if (static_cast<int>(x.size()) != q.dimension())
        throw std::invalid_argument("assignment length does not match QUBO dimension");
    long long value = 0;
    for (const auto& t : q.terms())
        if (x[t.i] != 0 && x[t.j] != 0) value += t.coeff;
    return value;
}

}  // namespace qubolab
