/*
 * qubolab C API: Max-Cut / QUBO solvers behind opaque handles.
 *
 * Every function that can fail returns a qubolab_status; on failure
 * qubolab_last_error() gives a human-readable message for the calling
 * thread. Handles must be released with the matching *_free function.
 */
#ifndef QUBOLAB_H
#define QUBOLAB_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define QUBOLAB_API __declspec(dllexport)
#elif defined(__GNUC__)
#define QUBOLAB_API __attribute__((visibility("default")))
#else
#define QUBOLAB_API
#endif

typedef struct qubolab_graph qubolab_graph;
typedef struct qubolab_result qubolab_result;

typedef enum qubolab_status {
    QUBOLAB_OK = 0,
    QUBOLAB_ERR_INVALID_ARGUMENT = 1,
    QUBOLAB_ERR_PARSE = 2,
    QUBOLAB_ERR_IO = 3,
    QUBOLAB_ERR_NUMERIC = 4,
    QUBOLAB_ERR_UNKNOWN_SOLVER = 5
} qubolab_status;

/* Message describing the most recent failure on this thread. */
QUBOLAB_API const char* qubolab_last_error(void);

/* ------------------------------------------------------------------ */
/* Graphs                                                             */

/* G(n, m): m distinct edges sampled uniformly; deterministic in seed. */
QUBOLAB_API qubolab_status qubolab_graph_generate(int nodes, long long edges,
                                                  unsigned long long seed, qubolab_graph** out);

/* Edge-list text: first line "n m", then m lines "u v" (0-indexed). */
QUBOLAB_API qubolab_status qubolab_graph_parse(const char* text, qubolab_graph** out);
QUBOLAB_API qubolab_status qubolab_graph_read_file(const char* path, qubolab_graph** out);
QUBOLAB_API qubolab_status qubolab_graph_write_file(const qubolab_graph* g, const char* path);

QUBOLAB_API int qubolab_graph_nodes(const qubolab_graph* g);
QUBOLAB_API long long qubolab_graph_edges(const qubolab_graph* g);
QUBOLAB_API qubolab_status qubolab_graph_edge(const qubolab_graph* g, long long index, int* u,
                                              int* v);

/* Number of edges cut by a 0/1 labeling of length n. */
QUBOLAB_API qubolab_status qubolab_cut_size(const qubolab_graph* g, const int* labels, int n,
                                            long long* out);

QUBOLAB_API void qubolab_graph_free(qubolab_graph* g);

/* ------------------------------------------------------------------ */
/* Solving                                                            */

/* Negative numeric fields (and stop_mode 0) select per-solver defaults. */
typedef struct qubolab_solve_options {
    unsigned long long seed;
    long long max_epochs;
    long long patience;
    double lr;
    double alpha;     /* mcts: UCB exploration constant */
    double beta;      /* projection / labeling threshold */
    int stop_mode;    /* 0 default, 1 strict, 2 fuzzy (pignn only) */
    double tol;       /* pignn strict-mode tolerance */
    double dropout;   /* pignn */
    int log_prob;     /* grl: r * log P loss variant */
} qubolab_solve_options;

QUBOLAB_API void qubolab_solve_options_init(qubolab_solve_options* opts);

/* solver: "pignn", "grl", "mcts", "local_search" or "oracle". */
QUBOLAB_API qubolab_status qubolab_solve(const qubolab_graph* g, const char* solver,
                                         const qubolab_solve_options* opts,
                                         qubolab_result** out);

/* ------------------------------------------------------------------ */
/* Results                                                            */

QUBOLAB_API long long qubolab_result_best_value(const qubolab_result* r);
QUBOLAB_API long long qubolab_result_epochs(const qubolab_result* r);
QUBOLAB_API const char* qubolab_result_stop_reason(const qubolab_result* r);
QUBOLAB_API double qubolab_result_seconds(const qubolab_result* r);

/* Copies up to cap labels into out; returns the assignment length. */
QUBOLAB_API int qubolab_result_assignment(const qubolab_result* r, int* out, int cap);

QUBOLAB_API long long qubolab_result_trace_rows(const qubolab_result* r);
QUBOLAB_API int qubolab_result_trace_columns(const qubolab_result* r);
QUBOLAB_API const char* qubolab_result_trace_column_name(const qubolab_result* r, int col);
QUBOLAB_API double qubolab_result_trace_value(const qubolab_result* r, long long row, int col);

/* Solver-specific scalar summaries (e.g. pignn's least-loss projection). */
QUBOLAB_API int qubolab_result_extra_count(const qubolab_result* r);
QUBOLAB_API const char* qubolab_result_extra_name(const qubolab_result* r, int index);
QUBOLAB_API double qubolab_result_extra_value(const qubolab_result* r, int index);

QUBOLAB_API void qubolab_result_free(qubolab_result* r);

#ifdef __cplusplus
}
#endif

#endif /* QUBOLAB_H */
