#include "qubolab.h"

#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "qubolab/errors.hpp"
#include "qubolab/grl.hpp"
#include "qubolab/mcts.hpp"
#include "qubolab/oracle.hpp"
#include "qubolab/pignn.hpp"
#include "qubolab/solve_result.hpp"

struct qubolab_graph {
    qubolab::Graph graph;
};

struct qubolab_result {
    qubolab::SolveResult result;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

template <typename Fn>
qubolab_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const qubolab::ParseError& e) {
        set_error(e.what());
        return QUBOLAB_ERR_PARSE;
    } catch (const qubolab::NumericError& e) {
        set_error(e.what());
        return QUBOLAB_ERR_NUMERIC;
    } catch (const qubolab::IoError& e) {
        set_error(e.what());
        return QUBOLAB_ERR_IO;
    } catch (const std::exception& e) {
        set_error(e.what());
        return QUBOLAB_ERR_INVALID_ARGUMENT;
    }
}

qubolab::SolveResult run_local_search(const qubolab::Graph& g, std::uint64_t seed) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<long long> flips;
    qubolab::Assignment x = qubolab::local_search_1flip(g, seed, &flips);
    qubolab::SolveResult r;
    r.solver = "local_search";
    r.best_assignment = x;
    r.best_value = qubolab::cut_size(g, x);
    r.epochs = static_cast<long long>(flips.size());
    r.stop_reason = "local_optimum";
    r.trace_columns = {"iteration", "cut", "best_so_far"};
    for (std::size_t i = 0; i < flips.size(); ++i)
        r.trace.push_back({static_cast<double>(i + 1), static_cast<double>(flips[i]),
                           static_cast<double>(flips[i])});
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

qubolab::SolveResult run_oracle(const qubolab::Graph& g) {
    auto t0 = std::chrono::steady_clock::now();
    qubolab::OracleResult o = qubolab::brute_force_maxcut(g);
    qubolab::SolveResult r;
    r.solver = "oracle";
    r.best_assignment = o.assignment;
    r.best_value = o.optimal_value;
    r.epochs = 0;
    r.stop_reason = "exact";
    r.trace_columns = {"iteration", "cut", "best_so_far"};
    r.extras.emplace_back("optimal_count", static_cast<double>(o.optimal_count));
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace

extern "C" {

const char* qubolab_last_error(void) { return g_last_error.c_str(); }

qubolab_status qubolab_graph_generate(int nodes, long long edges, unsigned long long seed,
                                      qubolab_graph** out) {
    return guarded([&]() {
        if (!out) throw std::invalid_argument("out must not be null");
        *out = new qubolab_graph{qubolab::generate_random_graph(nodes, edges, seed)};
        return QUBOLAB_OK;
    });
}

qubolab_status qubolab_graph_parse(const char* text, qubolab_graph** out) {
    return guarded([&]() {
        if (!text || !out) throw std::invalid_argument("text and out must not be null");
        *out = new qubolab_graph{qubolab::parse_edge_list(text)};
        return QUBOLAB_OK;
    });
}

qubolab_status qubolab_graph_read_file(const char* path, qubolab_graph** out) {
    return guarded([&]() -> qubolab_status {
        if (!path || !out) throw std::invalid_argument("path and out must not be null");
        std::ifstream in(path);
        if (!in) throw qubolab::IoError(std::string("cannot open ") + path);
        std::ostringstream text;
        text << in.rdbuf();
        *out = new qubolab_graph{qubolab::parse_edge_list(text.str())};
        return QUBOLAB_OK;
    });
}

qubolab_status qubolab_graph_write_file(const qubolab_graph* g, const char* path) {
    return guarded([&]() -> qubolab_status {
        if (!g || !path) throw std::invalid_argument("graph and path must not be null");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw qubolab::IoError(std::string("cannot open ") + path + " for writing");
        out << qubolab::write_edge_list(g->graph);
        if (!out) throw qubolab::IoError(std::string("write failed: ") + path);
        return QUBOLAB_OK;
    });
}

int qubolab_graph_nodes(const qubolab_graph* g) { return g ? g->graph.nodes() : 0; }

long long qubolab_graph_edges(const qubolab_graph* g) { return g ? g->graph.edge_count() : 0; }

qubolab_status qubolab_graph_edge(const qubolab_graph* g, long long index, int* u, int* v) {
    return guarded([&]() -> qubolab_status {
        if (!g || !u || !v) throw std::invalid_argument("null argument");
        if (index < 0 || index >= g->graph.edge_count())
            throw std::invalid_argument("edge index out of range");
        auto e = g->graph.edges()[static_cast<std::size_t>(index)];
        *u = e.first;
        *v = e.second;
        return QUBOLAB_OK;
    });
}

qubolab_status qubolab_cut_size(const qubolab_graph* g, const int* labels, int n,
                                long long* out) {
    return guarded([&]() -> qubolab_status {
        if (!g || !labels || !out) throw std::invalid_argument("null argument");
        qubolab::Assignment x(labels, labels + n);
        *out = qubolab::cut_size(g->graph, x);
        return QUBOLAB_OK;
    });
}

void qubolab_graph_free(qubolab_graph* g) { delete g; }

void qubolab_solve_options_init(qubolab_solve_options* opts) {
    if (!opts) return;
    opts->seed = 1;
    opts->max_epochs = -1;
    opts->patience = -1;
    opts->lr = -1.0;
    opts->alpha = -1.0;
    opts->beta = -1.0;
    opts->stop_mode = 0;
    opts->tol = -1.0;
    opts->dropout = -1.0;
    opts->log_prob = 0;
}

qubolab_status qubolab_solve(const qubolab_graph* g, const char* solver,
                             const qubolab_solve_options* opts, qubolab_result** out) {
    if (!g || !solver || !out) {
        set_error("null argument");
        return QUBOLAB_ERR_INVALID_ARGUMENT;
    }
    qubolab_solve_options defaults;
    qubolab_solve_options_init(&defaults);
    const qubolab_solve_options& o = opts ? *opts : defaults;
    std::string name(solver);

    if (name != "pignn" && name != "grl" && name != "mcts" && name != "local_search" &&
        name != "oracle") {
        set_error("unknown solver: " + name);
        return QUBOLAB_ERR_UNKNOWN_SOLVER;
    }

    return guarded([&]() -> qubolab_status {
        qubolab::SolveResult result;
        if (name == "pignn") {
            qubolab::PignnConfig cfg;
            cfg.seed = o.seed;
            if (o.max_epochs >= 0) cfg.max_epochs = o.max_epochs;
            if (o.patience >= 0) cfg.patience = o.patience;
            if (o.lr > 0) cfg.lr = o.lr;
            if (o.beta > 0) cfg.beta = o.beta;
            if (o.stop_mode == 1) cfg.stop_mode = qubolab::StopMode::strict;
            if (o.stop_mode == 2) cfg.stop_mode = qubolab::StopMode::fuzzy;
            if (o.tol >= 0) cfg.tol = o.tol;
            if (o.dropout >= 0) cfg.dropout = o.dropout;
            result = qubolab::train_pignn(g->graph, cfg);
        } else if (name == "grl") {
            qubolab::GrlConfig cfg;
            cfg.seed = o.seed;
            if (o.max_epochs >= 0) cfg.max_epochs = o.max_epochs;
            if (o.patience >= 0) cfg.patience = o.patience;
            if (o.lr > 0) cfg.lr = o.lr;
            if (o.beta > 0) cfg.beta = o.beta;
            cfg.log_prob = o.log_prob != 0;
            result = qubolab::train_grl(g->graph, cfg);
        } else if (name == "mcts") {
            qubolab::MctsConfig cfg;
            cfg.seed = o.seed;
            if (o.max_epochs >= 0) cfg.max_iterations = o.max_epochs;
            if (o.patience >= 0) cfg.outer_patience = o.patience;
            if (o.lr > 0) cfg.lr = o.lr;
            if (o.alpha >= 0) cfg.alpha = o.alpha;
            if (o.beta > 0) cfg.beta = o.beta;
            result = qubolab::train_mcts_gnn(g->graph, cfg);
        } else if (name == "local_search") {
            result = run_local_search(g->graph, o.seed);
        } else {
            result = run_oracle(g->graph);
        }
        *out = new qubolab_result{std::move(result)};
        return QUBOLAB_OK;
    });
}

long long qubolab_result_best_value(const qubolab_result* r) {
    return r ? r->result.best_value : 0;
}

long long qubolab_result_epochs(const qubolab_result* r) { return r ? r->result.epochs : 0; }

const char* qubolab_result_stop_reason(const qubolab_result* r) {
    return r ? r->result.stop_reason.c_str() : "";
}

double qubolab_result_seconds(const qubolab_result* r) { return r ? r->result.seconds : 0.0; }

int qubolab_result_assignment(const qubolab_result* r, int* out, int cap) {
    if (!r) return 0;
    int n = static_cast<int>(r->result.best_assignment.size());
    if (out) {
        for (int i = 0; i < n && i < cap; ++i) out[i] = r->result.best_assignment[i];
    }
    return n;
}

long long qubolab_result_trace_rows(const qubolab_result* r) {
    return r ? static_cast<long long>(r->result.trace.size()) : 0;
}

int qubolab_result_trace_columns(const qubolab_result* r) {
    return r ? static_cast<int>(r->result.trace_columns.size()) : 0;
}

const char* qubolab_result_trace_column_name(const qubolab_result* r, int col) {
    if (!r || col < 0 || col >= static_cast<int>(r->result.trace_columns.size())) return "";
    return r->result.trace_columns[col].c_str();
}

double qubolab_result_trace_value(const qubolab_result* r, long long row, int col) {
    if (!r || row < 0 || row >= static_cast<long long>(r->result.trace.size())) return 0.0;
    const auto& cells = r->result.trace[static_cast<std::size_t>(row)];
    if (col < 0 || col >= static_cast<int>(cells.size())) return 0.0;
    return cells[col];
}

int qubolab_result_extra_count(const qubolab_result* r) {
    return r ? static_cast<int>(r->result.extras.size()) : 0;
}

const char* qubolab_result_extra_name(const qubolab_result* r, int index) {
    if (!r || index < 0 || index >= static_cast<int>(r->result.extras.size())) return "";
    return r->result.extras[index].first.c_str();
}

double qubolab_result_extra_value(const qubolab_result* r, int index) {
    if (!r || index < 0 || index >= static_cast<int>(r->result.extras.size())) return 0.0;
    return r->result.extras[index].second;
}

void qubolab_result_free(qubolab_result* r) { delete r; }

}  // extern "C"
