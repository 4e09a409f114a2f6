#ifndef QUBOLAB_GRL_HPP
#define QUBOLAB_GRL_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "qubolab/autodiff.hpp"
#include "qubolab/layers.hpp"
#include "qubolab/solve_result.hpp"
#include "qubolab/stopping.hpp"

namespace qubolab {

struct GrlConfig {
    int d1 = 0;  // 0: derive from the node count
    int d2 = 0;  // 0: ceil(d1 / 2); also d = d_h of the decoder
    double clip = 10.0;  // C: tanh clipping of attention scores
    double beta = 0.5;   // labeling threshold
    double lr = 1e-3;
    long long patience = 700;  // fuzzy, on the episode reward
    long long max_epochs = 100000;
    bool log_prob = false;  // r^t * log P(a^t) loss variant
    std::uint64_t seed = 1;
};

struct EpisodeStep {
    int node = -1;
    int label = 0;
    long long reward = 0;  // Q terms that became computable at this step
    double prob = 0.0;     // P(a^t)
    // Number of selections in X_v when this node's attention score was last
    // computed; -1 marks the first step, whose probability comes from the
    // encoder head instead.
    int gamma_ctx = -1;
};

/// One greedy labeling pass over the whole graph. The per-step rewards
/// telescope: their sum equals the Hamiltonian of the final assignment.
struct EpisodeRecord {
    std::vector<EpisodeStep> steps;
    Assignment assignment;
    long long total_reward = 0;
    double loss = 0.0;  // value of the epoch's loss objective
};

/// Slots: embedding (n x d1), three GAT layers (w: d_in x d_out,
/// a: 2 d_out x 1), sigmoid head (d2 x 1) and decoder weights
/// phi1, phi2 (d2 x d2), phi3 (d2 x n).
ParamStore grl_init_params(const Graph& g, const GrlConfig& cfg);

struct GrlEncoding {
    TapeRef mu;          // n x d2 node features
    TapeRef init_probs;  // n x 1, picks and labels the first node
};

/// Three GAT layers with ELU in between, then the sigmoid head.
GrlEncoding grl_encode(Tape& tape, const Graph& g, ParamStore& params, const GrlConfig& cfg);

/// gamma_i = C tanh( (mu_i phi1^T) . (X_v phi3^T + sum_{j in N(i)} mu_j phi2^T)
///                   / sqrt(d_h) ), tape-registered. xv is the selected-node
/// indicator; node i must be unselected.
TapeRef decoder_attention(Tape& tape, const Graph& g, int node, TapeRef mu,
                          const std::vector<std::uint8_t>& xv, ParamStore& params,
                          const GrlConfig& cfg);

struct DecodeOutput {
    EpisodeRecord episode;
    std::vector<TapeRef> step_probs;  // P(a^t) nodes, in step order
};

/// Greedy sequential labeling: step 1 picks the node with the highest
/// encoder probability; each later step pops the unselected node with the
/// maximal attention score (lazy max-heap, stale entries skipped), labels it
/// by sigmoid(gamma) >= beta, collects the newly computable Q terms as the
/// step reward and refreshes the scores of the node's unselected neighbors.
DecodeOutput greedy_decode(Tape& tape, const Graph& g, const QuboMatrix& q,
                           const GrlEncoding& enc, ParamStore& params, const GrlConfig& cfg);

/// sum_t r^t * P(a^t) (or r^t * log P(a^t) when log_prob is set), in step
/// order. Training ascends this objective by descending its negation.
TapeRef grl_loss(Tape& tape, const std::vector<long long>& rewards,
                 const std::vector<TapeRef>& step_probs, bool log_prob);

/// Rebuilds the epoch's loss for a frozen episode (selection order, labels,
/// rewards and score contexts fixed), reproducing the training-time tape
/// arithmetic exactly. This is what makes the loss a smooth function of the
/// parameters for finite-difference checks.
TapeRef build_episode_loss(Tape& tape, const Graph& g, const EpisodeRecord& episode,
                           ParamStore& params, const GrlConfig& cfg);

/// Convenience wrapper: value of build_episode_loss on a scratch tape.
double episode_loss_value(const Graph& g, const EpisodeRecord& episode, ParamStore& params,
                          const GrlConfig& cfg);

struct GrlHooks {
    std::function<void(const EpisodeRecord&)> on_episode;
};

SolveResult train_grl(const Graph& g, const GrlConfig& cfg, const GrlHooks& hooks = {});

}  // namespace qubolab

#endif
