#include "qubolab/mcts.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qubolab/errors.hpp"
#include "qubolab/pignn.hpp"  // default_width, project

namespace qubolab {

namespace {

struct Dims {
    int d1;
    int d2;
    int d3;
};

Dims resolve_dims(const Graph& g, const MctsConfig& cfg) {
    int d1 = cfg.d1 > 0 ? cfg.d1 : default_width(g.nodes());
    int d2 = cfg.d2 > 0 ? cfg.d2 : (d1 + 1) / 2;
    int d3 = cfg.d3 > 0 ? cfg.d3 : 1;
    if (d1 < d2 || d2 < 1) throw std::invalid_argument("widths must satisfy d1 >= d2 >= 1");
    return {d1, d2, d3};
}

DenseMatrix indicator_column(const std::vector<std::uint8_t>& bits) {
    DenseMatrix col(static_cast<int>(bits.size()), 1);
    for (std::size_t k = 0; k < bits.size(); ++k) col.at(static_cast<int>(k), 0) = bits[k] ? 1.0 : 0.0;
    return col;
}

}  // namespace

ParamStore mcts_init_params(const Graph& g, const MctsConfig& cfg) {
    Dims d = resolve_dims(g, cfg);
    Rng rng(cfg.seed);
    ParamStore params;
    params.add("embedding", glorot_init(g.nodes(), d.d1, rng));
    params.add("gcn", glorot_init(d.d1, d.d2, rng));
    params.add("theta1", glorot_init(d.d3, 1, rng));
    params.add("theta2", glorot_init(d.d3, d.d2, rng));
    params.add("theta3", glorot_init(1, d.d3, rng));
    return params;
}

TapeRef mcts_gnn_forward(Tape& tape, const NormalizedAdjacency& adj,
                         const std::vector<std::uint8_t>& pinned, ParamStore& params) {
    TapeRef x_em = tape.parameter(params, "embedding");
    TapeRef mu_prime = gcn_forward(tape, adj, x_em, tape.parameter(params, "gcn"));
    TapeRef xv = tape.constant(indicator_column(pinned));
    TapeRef combined = tape.add(tape.matmul_nt(xv, tape.parameter(params, "theta1")),
                                tape.matmul_nt(mu_prime, tape.parameter(params, "theta2")));
    TapeRef mu = tape.activation(Activation::relu, combined);
    return tape.activation(Activation::sigmoid,
                           tape.matmul_nt(mu, tape.parameter(params, "theta3")));
}

double transition_prior(const DenseMatrix& probs, int variable, int label) {
    if (variable < 0 || variable >= probs.rows())
        throw std::invalid_argument("transition_prior: bad variable");
    double p = probs.at(variable, 0);
    return label == 1 ? p : 1.0 - p;
}

double ucb(const MctsNode& child, const MctsNode& parent, double alpha) {
    if (child.v == 0) return std::numeric_limits<double>::infinity();
    double exploit = child.w / static_cast<double>(child.v);
    double explore = alpha * child.prior *
                     std::sqrt(std::log(static_cast<double>(parent.v)) /
                               static_cast<double>(child.v));
    return exploit + explore;
}

TapeRef perturbed_loss(Tape& tape, const QuboMatrix& q, const std::vector<std::uint8_t>& pinned,
                       const Assignment& labels, TapeRef probs) {
    return tape.affine(tape.qubo_perturbed(q, pinned, labels, probs), -1.0, 0.0);
}

MctsRun::MctsRun(const Graph& g, const MctsConfig& cfg)
    : graph_(g),
      cfg_(cfg),
      adj_(normalize_adjacency(g)),
      qubo_(build_maxcut_qubo(g)),
      params_(mcts_init_params(g, cfg)) {
    if (cfg.alpha < 0.0) throw std::invalid_argument("alpha must be non-negative");
    if (cfg.beta <= 0.0 || cfg.beta >= 1.0) throw std::invalid_argument("beta must be in (0, 1)");
    if (cfg.outer_patience < 1) throw std::invalid_argument("outer patience must be at least 1");
    root_ = std::make_unique<MctsNode>();
    root_->pinned.assign(g.nodes(), 0);
    root_->labels.assign(g.nodes(), 0);
}

MctsNode* MctsRun::select_and_expand() {
    MctsNode* node = root_.get();
    while (!node->children.empty()) {
        MctsNode* best = nullptr;
        double best_score = -std::numeric_limits<double>::infinity();
        // Children are stored var-ascending with label 1 before 0, so strict
        // comparison realizes the tie-break order.
        for (auto& child : node->children) {
            double score = ucb(*child, *node, cfg_.alpha);
            if (score > best_score) {
                best_score = score;
                best = child.get();
            }
        }
        node = best;
    }

    int n = graph_.nodes();
    int depth = 0;
    for (int i = 0; i < n; ++i) depth += node->pinned[i] ? 1 : 0;
    if (node->v >= 1 && depth < n) {
        TapeRef p = mcts_gnn_forward(tape_, adj_, node->pinned, params_);
        DenseMatrix probs = tape_.value(p);
        tape_.clear();
        for (int var = 0; var < n; ++var) {
            if (node->pinned[var]) continue;
            for (int label : {1, 0}) {
                auto child = std::make_unique<MctsNode>();
                child->action_var = var;
                child->action_label = label;
                child->prior = transition_prior(probs, var, label);
                child->pinned = node->pinned;
                child->pinned[var] = 1;
                child->labels = node->labels;
                child->labels[var] = label;
                child->parent = node;
                node->children.push_back(std::move(child));
            }
        }
        node = node->children.front().get();
    }
    return node;
}

std::pair<long long, long long> MctsRun::rollout(MctsNode& leaf) {
    int n = graph_.nodes();
    int depth = 0;
    for (int i = 0; i < n; ++i) depth += leaf.pinned[i] ? 1 : 0;

    long long epochs = 0;
    Assignment x = leaf.labels;
    if (depth < n) {
        StopMonitor monitor(StopMode::fuzzy, cfg_.rollout_patience, 0.0, Direction::minimize);
        for (long long e = 1; e <= cfg_.rollout_max_epochs; ++e) {
            TapeRef probs = mcts_gnn_forward(tape_, adj_, leaf.pinned, params_);
            TapeRef loss = perturbed_loss(tape_, qubo_, leaf.pinned, leaf.labels, probs);
            double loss_value = tape_.scalar(loss);
            if (!std::isfinite(loss_value)) throw NumericError("mcts: non-finite rollout loss");
            epochs = e;
            tape_.backward(loss);
            adam_step(params_, cfg_.lr);
            if (monitor.observe(loss_value)) break;
        }
        TapeRef probs = mcts_gnn_forward(tape_, adj_, leaf.pinned, params_);
        Assignment projected = project(tape_.value(probs), cfg_.beta);
        tape_.clear();
        for (int i = 0; i < n; ++i)
            if (!leaf.pinned[i]) x[i] = projected[i];
    }

    long long reward = evaluate_hamiltonian(qubo_, x);
    if (reward > best_reward_) {
        best_reward_ = reward;
        best_assignment_ = x;
    }
    leaf.own_rollouts += 1;
    return {reward, epochs};
}

void MctsRun::backpropagate(MctsNode* leaf, long long reward) {
    for (MctsNode* node = leaf; node != nullptr; node = node->parent) {
        node->v += 1;
        node->w += static_cast<double>(reward);
    }
}

SolveResult train_mcts_gnn(const Graph& g, const MctsConfig& cfg, const MctsHooks& hooks) {
    auto t0 = std::chrono::steady_clock::now();
    MctsRun run(g, cfg);
    StopMonitor monitor(StopMode::fuzzy, cfg.outer_patience, 0.0, Direction::maximize);

    SolveResult result;
    result.solver = "mcts";
    result.stop_reason = "iteration_cap";
    result.trace_columns = {"iteration", "rollout_epochs", "rollout_reward", "best_so_far"};

    for (long long iter = 1; iter <= cfg.max_iterations; ++iter) {
        MctsNode* leaf = run.select_and_expand();
        auto [reward, rollout_epochs] = run.rollout(*leaf);
        run.backpropagate(leaf, reward);
        result.trace.push_back({static_cast<double>(iter), static_cast<double>(rollout_epochs),
                                static_cast<double>(reward),
                                static_cast<double>(run.best_reward())});
        result.epochs = iter;
        if (hooks.on_iteration) hooks.on_iteration(run.root(), *leaf, reward);
        if (monitor.observe(static_cast<double>(reward))) {
            result.stop_reason = "patience";
            break;
        }
    }

    result.best_assignment = run.best_assignment();
    result.best_value = evaluate_hamiltonian(build_maxcut_qubo(g), result.best_assignment);
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace qubolab
