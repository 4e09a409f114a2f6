#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qubolab/graph.hpp"
#include "qubolab/oracle.hpp"
#include "qubolab/qubo.hpp"

using namespace qubolab;

namespace {

Graph cycle(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return Graph(n, std::move(edges));
}

bool one_flip_optimal(const Graph& g, const Assignment& x) {
    long long base = cut_size(g, x);
    for (int v = 0; v < g.nodes(); ++v) {
        Assignment y = x;
        y[v] ^= 1;
        if (cut_size(g, y) > base) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("brute force on small closed forms") {
    Graph k3 = parse_edge_list("3 3\n0 1\n0 2\n1 2");
    OracleResult r3 = brute_force_maxcut(k3);
    CHECK(r3.optimal_value == 2);
    CHECK(cut_size(k3, r3.assignment) == 2);
    // Any 2+1 split of K3 achieves the optimum: 6 labelings in total.
    CHECK(r3.optimal_count == 6);

    OracleResult r5 = brute_force_maxcut(cycle(5));
    CHECK(r5.optimal_value == 4);

    Graph k4(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    CHECK(brute_force_maxcut(k4).optimal_value == 4);
}

TEST_CASE("oracle value matches its assignment and bounds solver outputs") {
    Graph g = generate_random_graph(12, 30, 5);
    OracleResult r = brute_force_maxcut(g);
    CHECK(evaluate_hamiltonian(build_maxcut_qubo(g), r.assignment) == r.optimal_value);
    CHECK(r.optimal_value <= g.edge_count());
}

TEST_CASE("brute force rejects large instances") {
    CHECK_THROWS_AS(brute_force_maxcut(generate_random_graph(25, 10, 1)), std::invalid_argument);
}

TEST_CASE("1-flip local search") {
    SUBCASE("single edge always reaches the optimum") {
        Graph g(2, {{0, 1}});
        for (std::uint64_t seed = 0; seed < 8; ++seed)
            CHECK(cut_size(g, local_search_1flip(g, seed)) == 1);
    }
    SUBCASE("result is 1-flip optimal and bounded by the oracle") {
        for (std::uint64_t seed = 0; seed < 6; ++seed) {
            Graph g = generate_random_graph(14, 30, 100 + seed);
            Assignment x = local_search_1flip(g, seed);
            CHECK(one_flip_optimal(g, x));
            CHECK(cut_size(g, x) <= brute_force_maxcut(g).optimal_value);
        }
    }
    SUBCASE("every local optimum of C5 cuts 4 edges") {
        Graph c5 = cycle(5);
        for (std::uint64_t seed = 0; seed < 16; ++seed)
            CHECK(cut_size(c5, local_search_1flip(c5, seed)) == 4);
    }
    SUBCASE("flip trace is monotone and ends at the final cut") {
        Graph g = generate_random_graph(20, 60, 9);
        std::vector<long long> flips;
        Assignment x = local_search_1flip(g, 3, &flips);
        for (std::size_t i = 1; i < flips.size(); ++i) CHECK(flips[i] > flips[i - 1]);
        if (!flips.empty()) CHECK(flips.back() == cut_size(g, x));
    }
}
