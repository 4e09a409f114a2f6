#include "qubolab/pignn.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qubolab/errors.hpp"

namespace qubolab {

int default_width(int n) {
    double root = n >= 100000 ? std::cbrt(static_cast<double>(n)) : std::sqrt(static_cast<double>(n));
    return std::max(1, static_cast<int>(std::ceil(root)));
}

namespace {

void resolve_dims(const Graph& g, int& d1, int& d2) {
    if (d1 <= 0) d1 = default_width(g.nodes());
    if (d2 <= 0) d2 = (d1 + 1) / 2;
    if (d1 < d2) throw std::invalid_argument("layer widths must satisfy d1 >= d2 >= 1");
}

}  // namespace

ParamStore pignn_init_params(const Graph& g, const PignnConfig& cfg) {
    int d1 = cfg.d1, d2 = cfg.d2;
    resolve_dims(g, d1, d2);
    Rng rng(cfg.seed);
    ParamStore params;
    params.add("embedding", glorot_init(g.nodes(), d1, rng));
    params.add("gcn1", glorot_init(d1, d1, rng));
    params.add("gcn2", glorot_init(d1, d2, rng));
    params.add("head", glorot_init(d2, 1, rng));
    return params;
}

TapeRef pignn_forward(Tape& tape, const NormalizedAdjacency& adj, ParamStore& params,
                      const PignnConfig& cfg, Rng& dropout_rng) {
    TapeRef h = tape.parameter(params, "embedding");
    TapeRef h1 = gcn_forward(tape, adj, h, tape.parameter(params, "gcn1"));
    h1 = tape.activation(Activation::elu, h1);
    h1 = tape.dropout(h1, cfg.dropout, dropout_rng);
    TapeRef h2 = gcn_forward(tape, adj, h1, tape.parameter(params, "gcn2"));
    TapeRef logits = tape.matmul(h2, tape.parameter(params, "head"));
    return tape.activation(Activation::sigmoid, logits);
}

TapeRef pignn_loss(Tape& tape, const QuboMatrix& q, TapeRef probs) {
    return tape.affine(tape.qubo_quadratic(q, probs), -1.0, 0.0);
}

Assignment project(const DenseMatrix& probs, double beta) {
    if (probs.cols() != 1) throw std::invalid_argument("project: probs must be n x 1");
    Assignment x(probs.rows());
    for (int i = 0; i < probs.rows(); ++i) x[i] = probs.at(i, 0) >= beta ? 1 : 0;
    return x;
}

SolveResult train_pignn(const Graph& g, const PignnConfig& cfg) {
    if (cfg.beta <= 0.0 || cfg.beta >= 1.0) throw std::invalid_argument("beta must be in (0, 1)");
    if (cfg.lr <= 0.0) throw std::invalid_argument("learning rate must be positive");
    if (cfg.max_epochs < 1) throw std::invalid_argument("max_epochs must be at least 1");

    auto t0 = std::chrono::steady_clock::now();
    NormalizedAdjacency adj = normalize_adjacency(g);
    QuboMatrix q = build_maxcut_qubo(g);
    ParamStore params = pignn_init_params(g, cfg);
    Rng dropout_rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    StopMonitor monitor(cfg.stop_mode, cfg.patience, cfg.tol, Direction::minimize);

    SolveResult result;
    result.solver = "pignn";
    result.best_value = -1;
    result.stop_reason = "max_epochs";
    result.trace_columns = {"epoch", "loss", "projected_hamiltonian", "best_so_far"};

    double least_loss = std::numeric_limits<double>::infinity();
    long long least_loss_value = 0;

    Tape tape;
    for (long long epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        TapeRef probs = pignn_forward(tape, adj, params, cfg, dropout_rng);
        TapeRef loss = pignn_loss(tape, q, probs);
        double loss_value = tape.scalar(loss);
        if (!std::isfinite(loss_value))
            throw NumericError("pignn: non-finite loss at epoch " + std::to_string(epoch));

        Assignment x = project(tape.value(probs), cfg.beta);
        long long h = evaluate_hamiltonian(q, x);
        if (h > result.best_value) {
            result.best_value = h;
            result.best_assignment = x;
        }
        if (loss_value < least_loss) {
            least_loss = loss_value;
            least_loss_value = h;
        }
        result.trace.push_back({static_cast<double>(epoch), loss_value, static_cast<double>(h),
                                static_cast<double>(result.best_value)});
        result.epochs = epoch;

        tape.backward(loss);
        adam_step(params, cfg.lr);

        if (monitor.observe(loss_value)) {
            result.stop_reason = "patience";
            break;
        }
    }

    result.extras.emplace_back("least_loss", least_loss);
    result.extras.emplace_back("least_loss_hamiltonian", static_cast<double>(least_loss_value));
    result.best_value = evaluate_hamiltonian(q, result.best_assignment);
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace qubolab
