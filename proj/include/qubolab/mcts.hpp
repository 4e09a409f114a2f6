#ifndef QUBOLAB_MCTS_HPP
#define QUBOLAB_MCTS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "qubolab/autodiff.hpp"
#include "qubolab/layers.hpp"
#include "qubolab/solve_result.hpp"
#include "qubolab/stopping.hpp"

namespace qubolab {

struct MctsConfig {
    int d1 = 0;  // 0: derive from the node count
    int d2 = 0;  // 0: ceil(d1 / 2)
    int d3 = 1;
    double alpha = 1.0;  // UCB exploration constant
    double beta = 0.5;   // labeling threshold
    double lr = 1e-3;
    long long rollout_patience = 100;  // fuzzy, on the rollout loss
    long long rollout_max_epochs = 1000;
    long long outer_patience = 700;  // fuzzy, on the best reward
    long long max_iterations = 100000;
    std::uint64_t seed = 1;
};

/// Search-tree state: a partial labeling. Each child pins exactly one more
/// variable than its parent.
struct MctsNode {
    int action_var = -1;  // variable pinned by the action that created this node
    int action_label = -1;
    double prior = 1.0;  // pi(S, a) at creation time

    std::vector<std::uint8_t> pinned;  // X_v
    Assignment labels;                 // values of the pinned variables

    double w = 0.0;        // accumulated reward
    long long v = 0;       // visit count
    long long own_rollouts = 0;

    MctsNode* parent = nullptr;
    std::vector<std::unique_ptr<MctsNode>> children;
};

/// Slots: embedding (n x d1), gcn (d1 x d2), theta1 (d3 x 1),
/// theta2 (d3 x d2), theta3 (1 x d3).
ParamStore mcts_init_params(const Graph& g, const MctsConfig& cfg);

/// Node probabilities for a partial labeling: a GCN over the learned
/// embeddings combined with the pinned-indicator column through
/// relu(X_v theta1^T + mu' theta2^T), then sigmoid(mu theta3^T).
TapeRef mcts_gnn_forward(Tape& tape, const NormalizedAdjacency& adj,
                         const std::vector<std::uint8_t>& pinned, ParamStore& params);

/// pi(S, (i, label)): P_i for label 1, 1 - P_i for label 0.
double transition_prior(const DenseMatrix& probs, int variable, int label);

/// UCB(child) = w/v + alpha * prior * sqrt(ln(parent.v) / v); +inf while the
/// child is unvisited.
double ucb(const MctsNode& child, const MctsNode& parent, double alpha);

/// Negated perturbed Hamiltonian (the rollout training loss): pinned-pinned
/// terms enter as constants, mixed terms couple the pinned label with the
/// free probability, free-free terms are fully relaxed.
TapeRef perturbed_loss(Tape& tape, const QuboMatrix& q, const std::vector<std::uint8_t>& pinned,
                       const Assignment& labels, TapeRef probs);

struct MctsHooks {
    /// Called after each iteration's backpropagation with the tree root, the
    /// rollout leaf and the rollout reward.
    std::function<void(const MctsNode& root, const MctsNode& leaf, long long reward)> on_iteration;
};

SolveResult train_mcts_gnn(const Graph& g, const MctsConfig& cfg, const MctsHooks& hooks = {});

/// Shared search state, exposed so the selection/rollout phases can be
/// driven and inspected in isolation.
class MctsRun {
public:
    MctsRun(const Graph& g, const MctsConfig& cfg);

    /// Descends by maximal UCB (ties: lowest variable, label 1 first) to a
    /// childless node; a revisited one with free variables left expands into
    /// all 2 x (#unlabeled) children and yields its first child.
    MctsNode* select_and_expand();

    /// Trains the shared GNN against the leaf's pinned labels (fuzzy
    /// patience on the loss), then projects the free variables at beta.
    /// Returns the reward and the number of training epochs run.
    std::pair<long long, long long> rollout(MctsNode& leaf);

    /// Increments v and adds the reward to w on the leaf-to-root path.
    void backpropagate(MctsNode* leaf, long long reward);

    const MctsNode& root() const { return *root_; }
    long long best_reward() const { return best_reward_; }
    const Assignment& best_assignment() const { return best_assignment_; }
    ParamStore& params() { return params_; }

private:
    const Graph& graph_;
    MctsConfig cfg_;
    NormalizedAdjacency adj_;
    QuboMatrix qubo_;
    ParamStore params_;
    std::unique_ptr<MctsNode> root_;
    Tape tape_;
    long long best_reward_ = -1;
    Assignment best_assignment_;
};

}  // namespace qubolab

#endif
