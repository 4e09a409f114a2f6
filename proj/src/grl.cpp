#include "qubolab/grl.hpp"

#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "qubolab/errors.hpp"
#include "qubolab/pignn.hpp"  // default_width

namespace qubolab {

namespace {

struct Dims {
    int d1;
    int d2;
};

Dims resolve_dims(const Graph& g, const GrlConfig& cfg) {
    int d1 = cfg.d1 > 0 ? cfg.d1 : default_width(g.nodes());
    int d2 = cfg.d2 > 0 ? cfg.d2 : (d1 + 1) / 2;
    if (d1 < d2 || d2 < 1) throw std::invalid_argument("encoder widths must satisfy d1 >= d2 >= 1");
    return {d1, d2};
}

void validate(const GrlConfig& cfg) {
    if (cfg.clip <= 0.0) throw std::invalid_argument("clip constant C must be positive");
    if (cfg.beta <= 0.0 || cfg.beta >= 1.0) throw std::invalid_argument("beta must be in (0, 1)");
    if (cfg.lr <= 0.0) throw std::invalid_argument("learning rate must be positive");
    if (cfg.max_epochs < 1) throw std::invalid_argument("max_epochs must be at least 1");
}

DenseMatrix indicator_row(const std::vector<std::uint8_t>& bits) {
    DenseMatrix row(1, static_cast<int>(bits.size()));
    for (std::size_t k = 0; k < bits.size(); ++k) row.at(0, static_cast<int>(k)) = bits[k] ? 1.0 : 0.0;
    return row;
}

// gamma subgraph shared by the decoder, the standalone op and the replay
// builder. All three must keep the same op order so their values agree
// bitwise.
TapeRef gamma_from_context(Tape& tape, TapeRef left_row, TapeRef nbr_row, TapeRef xvphi3,
                           int d_h, double clip) {
    TapeRef ctx = tape.add(xvphi3, nbr_row);
    TapeRef dot = tape.matmul_nt(left_row, ctx);
    TapeRef scaled = tape.affine(dot, 1.0 / std::sqrt(static_cast<double>(d_h)), 0.0);
    return tape.affine(tape.activation(Activation::tanh, scaled), clip, 0.0);
}

// Plain-value mirror of gamma_from_context over the shared per-epoch
// matrices; used for selection priorities without touching the tape.
double gamma_plain(const DenseMatrix& left, const DenseMatrix& nbrctx, const DenseMatrix& xvphi3,
                   int i, int d_h, double clip) {
    double acc = 0.0;
    for (int h = 0; h < left.cols(); ++h)
        acc += left.at(i, h) * (xvphi3.at(0, h) + nbrctx.at(i, h));
    acc = acc * (1.0 / std::sqrt(static_cast<double>(d_h)));
    return std::tanh(acc) * clip;
}

}  // namespace

ParamStore grl_init_params(const Graph& g, const GrlConfig& cfg) {
    Dims d = resolve_dims(g, cfg);
    Rng rng(cfg.seed);
    ParamStore params;
    params.add("embedding", glorot_init(g.nodes(), d.d1, rng));
    params.add("gat1_w", glorot_init(d.d1, d.d1, rng));
    params.add("gat1_a", glorot_init(2 * d.d1, 1, rng));
    params.add("gat2_w", glorot_init(d.d1, d.d1, rng));
    params.add("gat2_a", glorot_init(2 * d.d1, 1, rng));
    params.add("gat3_w", glorot_init(d.d1, d.d2, rng));
    params.add("gat3_a", glorot_init(2 * d.d2, 1, rng));
    params.add("head", glorot_init(d.d2, 1, rng));
    params.add("phi1", glorot_init(d.d2, d.d2, rng));
    params.add("phi2", glorot_init(d.d2, d.d2, rng));
    params.add("phi3", glorot_init(d.d2, g.nodes(), rng));
    return params;
}

GrlEncoding grl_encode(Tape& tape, const Graph& g, ParamStore& params, const GrlConfig& cfg) {
    (void)cfg;
    TapeRef h = tape.parameter(params, "embedding");
    h = gat_forward(tape, g, h, tape.parameter(params, "gat1_w"), tape.parameter(params, "gat1_a"));
    h = tape.activation(Activation::elu, h);
    h = gat_forward(tape, g, h, tape.parameter(params, "gat2_w"), tape.parameter(params, "gat2_a"));
    h = tape.activation(Activation::elu, h);
    TapeRef mu =
        gat_forward(tape, g, h, tape.parameter(params, "gat3_w"), tape.parameter(params, "gat3_a"));
    TapeRef logits = tape.matmul(mu, tape.parameter(params, "head"));
    return {mu, tape.activation(Activation::sigmoid, logits)};
}

TapeRef decoder_attention(Tape& tape, const Graph& g, int node, TapeRef mu,
                          const std::vector<std::uint8_t>& xv, ParamStore& params,
                          const GrlConfig& cfg) {
    if (node < 0 || node >= g.nodes()) throw std::invalid_argument("decoder_attention: bad node");
    if (static_cast<int>(xv.size()) != g.nodes())
        throw std::invalid_argument("decoder_attention: X_v size mismatch");
    if (xv[node]) throw std::invalid_argument("decoder_attention: node already selected");
    int d_h = tape.value(mu).cols();
    TapeRef left_row = tape.matmul_nt(tape.row(mu, node), tape.parameter(params, "phi1"));
    TapeRef nbr_row =
        tape.matmul_nt(tape.row(tape.neighbor_sum(g, mu), node), tape.parameter(params, "phi2"));
    TapeRef xvphi3 =
        tape.matmul_nt(tape.constant(indicator_row(xv)), tape.parameter(params, "phi3"));
    return gamma_from_context(tape, left_row, nbr_row, xvphi3, d_h, cfg.clip);
}

DecodeOutput greedy_decode(Tape& tape, const Graph& g, const QuboMatrix& q,
                           const GrlEncoding& enc, ParamStore& params, const GrlConfig& cfg) {
    const int n = g.nodes();
    const int d_h = tape.value(enc.mu).cols();

    // Shared per-epoch pieces of the attention score; mu is fixed during the
    // decode, so only the X_v phi3^T term moves between steps.
    TapeRef phi1 = tape.parameter(params, "phi1");
    TapeRef phi2 = tape.parameter(params, "phi2");
    TapeRef phi3 = tape.parameter(params, "phi3");
    TapeRef left = tape.matmul_nt(enc.mu, phi1);
    TapeRef nbrctx = tape.matmul_nt(tape.neighbor_sum(g, enc.mu), phi2);
    // Copies: tape storage relocates as later ops append nodes.
    const DenseMatrix left_v = tape.value(left);
    const DenseMatrix nbrctx_v = tape.value(nbrctx);
    const DenseMatrix phi3_v = tape.value(phi3);

    DecodeOutput out;
    out.episode.assignment.assign(n, 0);
    std::vector<std::uint8_t> selected(n, 0);
    std::vector<int> order;
    order.reserve(n);

    auto collect_reward = [&](int v) {
        long long r = 0;
        for (int ti : q.incident_terms(v)) {
            const QuboTerm& term = q.terms()[ti];
            if (term.i == term.j) {
                r += term.coeff * out.episode.assignment[v];
            } else {
                int other = term.i == v ? term.j : term.i;
                if (selected[other])
                    r += term.coeff * out.episode.assignment[v] * out.episode.assignment[other];
            }
        }
        return r;
    };

    // X_v phi3^T for the snapshot after k selections; computed fresh in
    // index order so the tape rebuild below reproduces it bitwise.
    std::vector<DenseMatrix> xvphi3_plain(static_cast<std::size_t>(n) + 1);
    auto snapshot_plain = [&](int k) -> const DenseMatrix& {
        if (xvphi3_plain[k].size() == 0) {
            std::vector<std::uint8_t> bits(n, 0);
            for (int s = 0; s < k; ++s) bits[order[s]] = 1;
            xvphi3_plain[k] = matmul_nt(indicator_row(bits), phi3_v);
        }
        return xvphi3_plain[k];
    };
    std::vector<TapeRef> xvphi3_tape(static_cast<std::size_t>(n) + 1, TapeRef{});
    auto snapshot_tape = [&](int k) -> TapeRef {
        if (xvphi3_tape[k].idx < 0) {
            std::vector<std::uint8_t> bits(n, 0);
            for (int s = 0; s < k; ++s) bits[order[s]] = 1;
            xvphi3_tape[k] = tape.matmul_nt(tape.constant(indicator_row(bits)), phi3);
        }
        return xvphi3_tape[k];
    };

    // Step 1: highest encoder probability, ties to the lowest index.
    const DenseMatrix probs0 = tape.value(enc.init_probs);
    int first = 0;
    for (int i = 1; i < n; ++i)
        if (probs0.at(i, 0) > probs0.at(first, 0)) first = i;
    int first_label = probs0.at(first, 0) >= cfg.beta ? 1 : 0;
    out.episode.assignment[first] = first_label;
    selected[first] = 1;
    order.push_back(first);
    TapeRef p1 = tape.entry(enc.init_probs, first, 0);
    if (first_label == 0) p1 = tape.affine(p1, -1.0, 1.0);
    out.episode.steps.push_back(
        {first, first_label, collect_reward(first), tape.scalar(p1), -1});
    out.step_probs.push_back(p1);

    // Lazy max-heap over attention scores; stale entries are skipped on pop
    // by version comparison. Ties break to the lowest node index.
    struct HeapEntry {
        double gamma;
        int node;
        long long version;
        bool operator<(const HeapEntry& o) const {
            if (gamma != o.gamma) return gamma < o.gamma;
            return node > o.node;
        }
    };
    std::priority_queue<HeapEntry> heap;
    std::vector<long long> version(n, -1);
    std::vector<double> cur_gamma(n, 0.0);
    std::vector<int> cur_ctx(n, -1);

    auto refresh = [&](int i, int k) {
        cur_gamma[i] = gamma_plain(left_v, nbrctx_v, snapshot_plain(k), i, d_h, cfg.clip);
        cur_ctx[i] = k;
        heap.push({cur_gamma[i], i, ++version[i]});
    };

    // Initial scores for everyone still unselected, then greedy selection
    // with neighbor-only refreshes.
    for (int i = 0; i < n; ++i)
        if (!selected[i]) refresh(i, 1);

    for (int t = 2; t <= n; ++t) {
        int chosen = -1;
        while (!heap.empty()) {
            HeapEntry e = heap.top();
            heap.pop();
            if (selected[e.node] || e.version != version[e.node]) continue;
            chosen = e.node;
            break;
        }
        if (chosen < 0) throw std::logic_error("greedy_decode: heap exhausted early");

        TapeRef gamma =
            gamma_from_context(tape, tape.row(left, chosen), tape.row(nbrctx, chosen),
                               snapshot_tape(cur_ctx[chosen]), d_h, cfg.clip);
        TapeRef p = tape.activation(Activation::sigmoid, gamma);
        double p_value = tape.scalar(p);
        int label = p_value >= cfg.beta ? 1 : 0;
        if (label == 0) p = tape.affine(p, -1.0, 1.0);

        out.episode.assignment[chosen] = label;
        selected[chosen] = 1;
        order.push_back(chosen);
        out.episode.steps.push_back(
            {chosen, label, collect_reward(chosen), tape.scalar(p), cur_ctx[chosen]});
        out.step_probs.push_back(p);

        for (int j : g.neighbors(chosen))
            if (!selected[j]) refresh(j, t);
    }

    for (const auto& s : out.episode.steps) out.episode.total_reward += s.reward;
    return out;
}

TapeRef grl_loss(Tape& tape, const std::vector<long long>& rewards,
                 const std::vector<TapeRef>& step_probs, bool log_prob) {
    if (rewards.size() != step_probs.size() || rewards.empty())
        throw std::invalid_argument("grl_loss: incomplete episode");
    TapeRef acc{};
    for (std::size_t t = 0; t < rewards.size(); ++t) {
        TapeRef p = log_prob ? tape.log(step_probs[t]) : step_probs[t];
        TapeRef term = tape.affine(p, static_cast<double>(rewards[t]), 0.0);
        acc = t == 0 ? term : tape.add(acc, term);
    }
    return acc;
}

TapeRef build_episode_loss(Tape& tape, const Graph& g, const EpisodeRecord& episode,
                           ParamStore& params, const GrlConfig& cfg) {
    if (episode.steps.size() != static_cast<std::size_t>(g.nodes()))
        throw std::invalid_argument("build_episode_loss: episode does not cover the graph");
    GrlEncoding enc = grl_encode(tape, g, params, cfg);
    int d_h = tape.value(enc.mu).cols();
    TapeRef phi1 = tape.parameter(params, "phi1");
    TapeRef phi2 = tape.parameter(params, "phi2");
    TapeRef phi3 = tape.parameter(params, "phi3");
    TapeRef left = tape.matmul_nt(enc.mu, phi1);
    TapeRef nbrctx = tape.matmul_nt(tape.neighbor_sum(g, enc.mu), phi2);

    std::vector<int> order;
    for (const auto& s : episode.steps) order.push_back(s.node);
    std::vector<TapeRef> xvphi3(order.size() + 1, TapeRef{});
    auto snapshot_tape = [&](int k) -> TapeRef {
        if (xvphi3[k].idx < 0) {
            std::vector<std::uint8_t> bits(g.nodes(), 0);
            for (int s = 0; s < k; ++s) bits[order[s]] = 1;
            xvphi3[k] = tape.matmul_nt(tape.constant(indicator_row(bits)), phi3);
        }
        return xvphi3[k];
    };

    std::vector<TapeRef> step_probs;
    std::vector<long long> rewards;
    for (const auto& s : episode.steps) {
        TapeRef p;
        if (s.gamma_ctx < 0) {
            p = tape.entry(enc.init_probs, s.node, 0);
        } else {
            TapeRef gamma = gamma_from_context(tape, tape.row(left, s.node),
                                               tape.row(nbrctx, s.node),
                                               snapshot_tape(s.gamma_ctx), d_h, cfg.clip);
            p = tape.activation(Activation::sigmoid, gamma);
        }
        if (s.label == 0) p = tape.affine(p, -1.0, 1.0);
        step_probs.push_back(p);
        rewards.push_back(s.reward);
    }
    return grl_loss(tape, rewards, step_probs, cfg.log_prob);
}

double episode_loss_value(const Graph& g, const EpisodeRecord& episode, ParamStore& params,
                          const GrlConfig& cfg) {
    Tape tape;
    return tape.scalar(build_episode_loss(tape, g, episode, params, cfg));
}

SolveResult train_grl(const Graph& g, const GrlConfig& cfg, const GrlHooks& hooks) {
    validate(cfg);
    auto t0 = std::chrono::steady_clock::now();
    QuboMatrix q = build_maxcut_qubo(g);
    ParamStore params = grl_init_params(g, cfg);
    StopMonitor monitor(StopMode::fuzzy, cfg.patience, 0.0, Direction::maximize);

    SolveResult result;
    result.solver = "grl";
    result.best_value = -1;
    result.stop_reason = "max_epochs";
    result.trace_columns = {"epoch", "total_reward", "loss", "best_so_far"};

    Tape tape;
    for (long long epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        GrlEncoding enc = grl_encode(tape, g, params, cfg);
        DecodeOutput decoded = greedy_decode(tape, g, q, enc, params, cfg);
        std::vector<long long> rewards;
        for (const auto& s : decoded.episode.steps) rewards.push_back(s.reward);
        TapeRef objective = grl_loss(tape, rewards, decoded.step_probs, cfg.log_prob);
        double loss_value = tape.scalar(objective);
        if (!std::isfinite(loss_value))
            throw NumericError("grl: non-finite loss at epoch " + std::to_string(epoch));
        decoded.episode.loss = loss_value;

        long long total = decoded.episode.total_reward;
        if (total > result.best_value) {
            result.best_value = total;
            result.best_assignment = decoded.episode.assignment;
        }
        result.trace.push_back({static_cast<double>(epoch), static_cast<double>(total), loss_value,
                                static_cast<double>(result.best_value)});
        result.epochs = epoch;
        if (hooks.on_episode) hooks.on_episode(decoded.episode);

        tape.backward(tape.affine(objective, -1.0, 0.0));
        adam_step(params, cfg.lr);

        if (monitor.observe(static_cast<double>(total))) {
            result.stop_reason = "patience";
            break;
        }
    }

    result.best_value = evaluate_hamiltonian(q, result.best_assignment);
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace qubolab
