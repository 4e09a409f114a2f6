#include "qubolab/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qubolab {

NormalizedAdjacency normalize_adjacency(const Graph& g) {
    NormalizedAdjacency adj;
    adj.n = g.nodes();
    adj.rows.assign(adj.n, {});
    std::vector<double> inv_sqrt(adj.n);
    for (int v = 0; v < adj.n; ++v) inv_sqrt[v] = 1.0 / std::sqrt(g.degree(v) + 1.0);
    for (int v = 0; v < adj.n; ++v) {
        auto& row = adj.rows[v];
        row.reserve(g.degree(v) + 1u);
        // A + I with columns ascending; self entry inserted in order.
        bool self_done = false;
        for (int u : g.neighbors(v)) {
            if (!self_done && v < u) {
                row.emplace_back(v, inv_sqrt[v] * inv_sqrt[v]);
                self_done = true;
            }
            row.emplace_back(u, inv_sqrt[v] * inv_sqrt[u]);
        }
        if (!self_done) row.emplace_back(v, inv_sqrt[v] * inv_sqrt[v]);
    }
    return adj;
}

namespace {

double activate_one(Activation kind, double x) {
    switch (kind) {
        case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-x));
        case Activation::relu: return x > 0.0 ? x : 0.0;
        case Activation::elu: return x > 0.0 ? x : std::expm1(x);
        case Activation::tanh: return std::tanh(x);
        case Activation::leaky_relu: return x > 0.0 ? x : 0.2 * x;
    }
    return x;
}

double activate_derivative(Activation kind, double x, double y) {
    switch (kind) {
        case Activation::sigmoid: return y * (1.0 - y);
        case Activation::relu: return x > 0.0 ? 1.0 : 0.0;
        case Activation::elu: return x > 0.0 ? 1.0 : y + 1.0;
        case Activation::tanh: return 1.0 - y * y;
        case Activation::leaky_relu: return x > 0.0 ? 1.0 : 0.2;
    }
    return 1.0;
}

// out += A_hat * m, using the symmetric sparse structure.
void spmm_accumulate(const NormalizedAdjacency& adj, const DenseMatrix& m, DenseMatrix& out) {
    int d = m.cols();
    for (int i = 0; i < adj.n; ++i) {
        double* orow = out.data() + static_cast<std::size_t>(i) * d;
        for (auto [j, w] : adj.rows[i]) {
            const double* mrow = m.data() + static_cast<std::size_t>(j) * d;
            for (int k = 0; k < d; ++k) orow[k] += w * mrow[k];
        }
    }
}

void neighbor_sum_accumulate(const Graph& g, const DenseMatrix& m, DenseMatrix& out) {
    int d = m.cols();
    for (int i = 0; i < g.nodes(); ++i) {
        double* orow = out.data() + static_cast<std::size_t>(i) * d;
        for (int j : g.neighbors(i)) {
            const double* mrow = m.data() + static_cast<std::size_t>(j) * d;
            for (int k = 0; k < d; ++k) orow[k] += mrow[k];
        }
    }
}

}  // namespace

int Tape::push(DenseMatrix value, std::function<void(Tape&, int)> backprop, ParamSlot* slot) {
    Node n;
    n.value = std::move(value);
    n.slot = slot;
    n.backprop = std::move(backprop);
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
}

const Tape::Node& Tape::node(TapeRef r) const {
    if (r.idx < 0 || r.idx >= static_cast<int>(nodes_.size()))
        throw std::invalid_argument("stale or invalid tape reference");
    return nodes_[r.idx];
}

const DenseMatrix& Tape::value(TapeRef r) const { return node(r).value; }

double Tape::scalar(TapeRef r) const {
    const DenseMatrix& v = value(r);
    if (v.rows() != 1 || v.cols() != 1) throw std::invalid_argument("tape node is not a scalar");
    return v.at(0, 0);
}

DenseMatrix& Tape::grad_at(int idx) { return nodes_[idx].grad; }

TapeRef Tape::constant(DenseMatrix v) { return {push(std::move(v), nullptr)}; }

TapeRef Tape::parameter(ParamStore& store, const std::string& name) {
    ParamSlot& slot = store.slot(name);
    return {push(slot.value, nullptr, &slot)};
}

TapeRef Tape::matmul(TapeRef a, TapeRef b) {
    DenseMatrix out = qubolab::matmul(value(a), value(b));
    int ai = a.idx, bi = b.idx;
    return {push(std::move(out), [ai, bi](Tape& t, int self) {
        const DenseMatrix& g = t.nodes_[self].grad;
        add_in_place(t.grad_at(ai), qubolab::matmul_nt(g, t.nodes_[bi].value));
        add_in_place(t.grad_at(bi), qubolab::matmul_tn(t.nodes_[ai].value, g));
    })};
}

TapeRef Tape::matmul_nt(TapeRef a, TapeRef b) {
    DenseMatrix out = qubolab::matmul_nt(value(a), value(b));
    int ai = a.idx, bi = b.idx;
    return {push(std::move(out), [ai, bi](Tape& t, int self) {
        const DenseMatrix& g = t.nodes_[self].grad;
        add_in_place(t.grad_at(ai), qubolab::matmul(g, t.nodes_[bi].value));
        add_in_place(t.grad_at(bi), qubolab::matmul_tn(g, t.nodes_[ai].value));
    })};
}

TapeRef Tape::add(TapeRef a, TapeRef b) {
    DenseMatrix out = qubolab::add(value(a), value(b));
    int ai = a.idx, bi = b.idx;
    return {push(std::move(out), [ai, bi](Tape& t, int self) {
        const DenseMatrix& g = t.nodes_[self].grad;
        add_in_place(t.grad_at(ai), g);
        add_in_place(t.grad_at(bi), g);
    })};
}

TapeRef Tape::affine(TapeRef a, double scale, double shift) {
    DenseMatrix out = value(a);
    for (std::size_t k = 0; k < out.size(); ++k) out.data()[k] = scale * out.data()[k] + shift;
    int ai = a.idx;
    return {push(std::move(out), [ai, scale](Tape& t, int self) {
        add_scaled_in_place(t.grad_at(ai), t.nodes_[self].grad, scale);
    })};
}

TapeRef Tape::activation(Activation kind, TapeRef a) {
    const DenseMatrix& in = value(a);
    DenseMatrix out(in.rows(), in.cols());
    for (std::size_t k = 0; k < in.size(); ++k) out.data()[k] = activate_one(kind, in.data()[k]);
    int ai = a.idx;
    return {push(std::move(out), [ai, kind](Tape& t, int self) {
        const DenseMatrix& g = t.nodes_[self].grad;
        const DenseMatrix& x = t.nodes_[ai].value;
        const DenseMatrix& y = t.nodes_[self].value;
        DenseMatrix& dx = t.grad_at(ai);
        for (std::size_t k = 0; k < g.size(); ++k)
            dx.data()[k] += g.data()[k] * activate_derivative(kind, x.data()[k], y.data()[k]);
    })};
}

TapeRef Tape::spmm(const NormalizedAdjacency& adj, TapeRef h) {
    const DenseMatrix& in = value(h);
    if (in.rows() != adj.n) throw std::invalid_argument("spmm: row count mismatch");
    DenseMatrix out(in.rows(), in.cols());
    spmm_accumulate(adj, in, out);
    int hi = h.idx;
    const NormalizedAdjacency* a = &adj;
    return {push(std::move(out), [hi, a](Tape& t, int self) {
        // A_hat is symmetric, so dH = A_hat * dOut.
        spmm_accumulate(*a, t.nodes_[self].grad, t.grad_at(hi));
    })};
}

TapeRef Tape::neighbor_sum(const Graph& g, TapeRef h) {
    const DenseMatrix& in = value(h);
    if (in.rows() != g.nodes()) throw std::invalid_argument("neighbor_sum: row count mismatch");
    DenseMatrix out(in.rows(), in.cols());
    neighbor_sum_accumulate(g, in, out);
    int hi = h.idx;
    const Graph* gp = &g;
    return {push(std::move(out), [hi, gp](Tape& t, int self) {
        neighbor_sum_accumulate(*gp, t.nodes_[self].grad, t.grad_at(hi));
    })};
}

TapeRef Tape::row(TapeRef a, int r) { return rows(a, r, r + 1); }

TapeRef Tape::rows(TapeRef a, int r0, int r1) {
    const DenseMatrix& in = value(a);
    if (r0 < 0 || r1 > in.rows() || r0 >= r1) throw std::invalid_argument("rows: bad range");
    DenseMatrix out(r1 - r0, in.cols());
    for (int r = r0; r < r1; ++r)
        for (int c = 0; c < in.cols(); ++c) out.at(r - r0, c) = in.at(r, c);
    int ai = a.idx;
    return {push(std::move(out), [ai, r0, r1](Tape& t, int self) {
        const DenseMatrix& g = t.nodes_[self].grad;
        DenseMatrix& da = t.grad_at(ai);
        for (int r = r0; r < r1; ++r)
            for (int c = 0; c < g.cols(); ++c) da.at(r, c) += g.at(r - r0, c);
    })};
}

TapeRef Tape::entry(TapeRef a, int r, int c) {
    const DenseMatrix& in = value(a);
    if (r < 0 || r >= in.rows() || c < 0 || c >= in.cols())
        throw std::invalid_argument("entry: out of range");
    DenseMatrix out(1, 1);
    out.at(0, 0) = in.at(r, c);
    int ai = a.idx;
    return {push(std::move(out), [ai, r, c](Tape& t, int self) {
        t.grad_at(ai).at(r, c) += t.nodes_[self].grad.at(0, 0);
    })};
}

TapeRef Tape::sum(TapeRef a) {
    const DenseMatrix& in = value(a);
    DenseMatrix out(1, 1);
    double acc = 0.0;
    for (std::size_t k = 0; k < in.size(); ++k) acc += in.data()[k];
    out.at(0, 0) = acc;
    int ai = a.idx;
    return {push(std::move(out), [ai](Tape& t, int self) {
        double g = t.nodes_[self].grad.at(0, 0);
        DenseMatrix& da = t.grad_at(ai);
        for (std::size_t k = 0; k < da.size(); ++k) da.data()[k] += g;
    })};
}

TapeRef Tape::log(TapeRef a) {
    const DenseMatrix& in = value(a);
    DenseMatrix out(in.rows(), in.cols());
    for (std::size_t k = 0; k < in.size(); ++k) {
        if (in.data()[k] <= 0.0) throw std::invalid_argument("log: non-positive input");
        out.data()[k] = std::log(in.data()[k]);
    }
    int ai = a.idx;
    return {push(std::move(out), [ai](Tape& t, int self) {
        const DenseMatrix& g = t.nodes_[self].grad;
        const DenseMatrix& x = t.nodes_[ai].value;
        DenseMatrix& dx = t.grad_at(ai);
        for (std::size_t k = 0; k < g.size(); ++k) dx.data()[k] += g.data()[k] / x.data()[k];
    })};
}

TapeRef Tape::dropout(TapeRef a, double rate, Rng& rng) {
    if (rate == 0.0) return a;
    if (rate < 0.0 || rate >= 1.0) throw std::invalid_argument("dropout rate must be in [0, 1)");
    const DenseMatrix& in = value(a);
    double keep = 1.0 - rate;
    std::vector<std::uint8_t> mask(in.size());
    DenseMatrix out(in.rows(), in.cols());
    for (std::size_t k = 0; k < in.size(); ++k) {
        mask[k] = rng.next_double() < keep ? 1 : 0;
        out.data()[k] = mask[k] ? in.data()[k] / keep : 0.0;
    }
    int ai = a.idx;
    return {push(std::move(out), [ai, keep, mask = std::move(mask)](Tape& t, int self) {
        const DenseMatrix& g = t.nodes_[self].grad;
        DenseMatrix& da = t.grad_at(ai);
        for (std::size_t k = 0; k < g.size(); ++k)
            if (mask[k]) da.data()[k] += g.data()[k] / keep;
    })};
}

TapeRef Tape::gat_aggregate(const Graph& g, TapeRef hw, TapeRef score_self, TapeRef score_nbr,
                            double slope) {
    const DenseMatrix& feats = value(hw);
    const DenseMatrix& s_self = value(score_self);
    const DenseMatrix& s_nbr = value(score_nbr);
    int n = g.nodes();
    int d = feats.cols();
    if (feats.rows() != n || s_self.rows() != n || s_nbr.rows() != n || s_self.cols() != 1 ||
        s_nbr.cols() != 1)
        throw std::invalid_argument("gat_aggregate: shape mismatch");

    // Stash per node: neighborhood (self first), pre-activation z and alpha.
    struct Entry {
        int j;
        double z;
        double alpha;
    };
    std::vector<std::vector<Entry>> stash(n);
    DenseMatrix out(n, d);
    for (int i = 0; i < n; ++i) {
        auto& entries = stash[i];
        entries.reserve(g.degree(i) + 1u);
        entries.push_back({i, 0.0, 0.0});
        for (int j : g.neighbors(i)) entries.push_back({j, 0.0, 0.0});
        double emax = -std::numeric_limits<double>::infinity();
        for (auto& e : entries) {
            e.z = s_self.at(i, 0) + s_nbr.at(e.j, 0);
            double act = e.z > 0.0 ? e.z : slope * e.z;
            e.alpha = act;  // holds the logit until normalization
            emax = std::max(emax, act);
        }
        double denom = 0.0;
        for (auto& e : entries) {
            e.alpha = std::exp(e.alpha - emax);
            denom += e.alpha;
        }
        double* orow = out.data() + static_cast<std::size_t>(i) * d;
        for (auto& e : entries) {
            e.alpha /= denom;
            const double* frow = feats.data() + static_cast<std::size_t>(e.j) * d;
            for (int k = 0; k < d; ++k) orow[k] += e.alpha * frow[k];
        }
    }

    int hwi = hw.idx, ssi = score_self.idx, sni = score_nbr.idx;
    return {push(std::move(out),
                 [hwi, ssi, sni, slope, stash = std::move(stash)](Tape& t, int self) {
        const DenseMatrix& g = t.nodes_[self].grad;
        const DenseMatrix& feats = t.nodes_[hwi].value;
        DenseMatrix& dfeats = t.grad_at(hwi);
        DenseMatrix& ds_self = t.grad_at(ssi);
        DenseMatrix& ds_nbr = t.grad_at(sni);
        int d = feats.cols();
        for (int i = 0; i < static_cast<int>(stash.size()); ++i) {
            const auto& entries = stash[i];
            const double* grow = g.data() + static_cast<std::size_t>(i) * d;
            // dalpha_ij = gOut_i . feats_j; softmax backward then leaky_relu.
            double weighted = 0.0;  // sum_k alpha_ik * dalpha_ik
            std::vector<double> dalpha(entries.size());
            for (std::size_t e = 0; e < entries.size(); ++e) {
                const double* frow = feats.data() + static_cast<std::size_t>(entries[e].j) * d;
                double acc = 0.0;
                for (int k = 0; k < d; ++k) acc += grow[k] * frow[k];
                dalpha[e] = acc;
                weighted += entries[e].alpha * acc;
                double* dfrow = dfeats.data() + static_cast<std::size_t>(entries[e].j) * d;
                for (int k = 0; k < d; ++k) dfrow[k] += entries[e].alpha * grow[k];
            }
            for (std::size_t e = 0; e < entries.size(); ++e) {
                double de = entries[e].alpha * (dalpha[e] - weighted);
                double dz = de * (entries[e].z > 0.0 ? 1.0 : slope);
                ds_self.at(i, 0) += dz;
                ds_nbr.at(entries[e].j, 0) += dz;
            }
        }
    })};
}

TapeRef Tape::qubo_quadratic(const QuboMatrix& q, TapeRef probs) {
    const DenseMatrix& p = value(probs);
    if (p.rows() != q.dimension() || p.cols() != 1)
        throw std::invalid_argument("qubo_quadratic: probs must be n x 1");
    double acc = 0.0;
    for (const auto& t : q.terms()) acc += p.at(t.i, 0) * static_cast<double>(t.coeff) * p.at(t.j, 0);
    DenseMatrix out(1, 1);
    out.at(0, 0) = acc;
    int pi = probs.idx;
    const QuboMatrix* qp = &q;
    return {push(std::move(out), [pi, qp](Tape& t, int self) {
        double g = t.nodes_[self].grad.at(0, 0);
        const DenseMatrix& p = t.nodes_[pi].value;
        DenseMatrix& dp = t.grad_at(pi);
        for (const auto& term : qp->terms()) {
            double c = static_cast<double>(term.coeff);
            if (term.i == term.j) {
                dp.at(term.i, 0) += g * 2.0 * c * p.at(term.i, 0);
            } else {
                dp.at(term.i, 0) += g * c * p.at(term.j, 0);
                dp.at(term.j, 0) += g * c * p.at(term.i, 0);
            }
        }
    })};
}

TapeRef Tape::qubo_perturbed(const QuboMatrix& q, const std::vector<std::uint8_t>& pinned,
                             const Assignment& labels, TapeRef probs) {
    const DenseMatrix& p = value(probs);
    int n = q.dimension();
    if (p.rows() != n || p.cols() != 1) throw std::invalid_argument("qubo_perturbed: probs must be n x 1");
    if (static_cast<int>(pinned.size()) != n || static_cast<int>(labels.size()) != n)
        throw std::invalid_argument("qubo_perturbed: mask/labels must have dimension n");

    auto side = [&](int v) { return pinned[v] ? static_cast<double>(labels[v]) : p.at(v, 0); };
    double acc = 0.0;
    for (const auto& t : q.terms()) acc += side(t.i) * static_cast<double>(t.coeff) * side(t.j);
    DenseMatrix out(1, 1);
    out.at(0, 0) = acc;

    int pi = probs.idx;
    const QuboMatrix* qp = &q;
    return {push(std::move(out),
                 [pi, qp, pinned, labels](Tape& t, int self) {
        double g = t.nodes_[self].grad.at(0, 0);
        const DenseMatrix& p = t.nodes_[pi].value;
        DenseMatrix& dp = t.grad_at(pi);
        for (const auto& term : qp->terms()) {
            double c = static_cast<double>(term.coeff);
            bool fi = pinned[term.i], fj = pinned[term.j];
            if (fi && fj) continue;  // constant contribution
            if (term.i == term.j) {
                dp.at(term.i, 0) += g * 2.0 * c * p.at(term.i, 0);
            } else if (fi) {
                dp.at(term.j, 0) += g * c * static_cast<double>(labels[term.i]);
            } else if (fj) {
                dp.at(term.i, 0) += g * c * static_cast<double>(labels[term.j]);
            } else {
                dp.at(term.i, 0) += g * c * p.at(term.j, 0);
                dp.at(term.j, 0) += g * c * p.at(term.i, 0);
            }
        }
    })};
}

void Tape::backward(TapeRef loss) {
    const DenseMatrix& lv = value(loss);
    if (lv.rows() != 1 || lv.cols() != 1)
        throw std::invalid_argument("backward requires a scalar loss node");
    for (auto& n : nodes_) {
        n.grad = DenseMatrix(n.value.rows(), n.value.cols());
    }
    nodes_[loss.idx].grad.at(0, 0) = 1.0;
    for (int i = loss.idx; i >= 0; --i) {
        if (nodes_[i].backprop) nodes_[i].backprop(*this, i);
    }
    for (auto& n : nodes_) {
        if (n.slot) add_in_place(n.slot->grad, n.grad);
    }
    clear();
}

void Tape::clear() { nodes_.clear(); }

}  // namespace qubolab
