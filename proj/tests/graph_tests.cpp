#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "qubolab/errors.hpp"
#include "qubolab/graph.hpp"
#include "qubolab/qubo.hpp"
#include "qubolab/rng.hpp"

using namespace qubolab;

namespace {

Assignment random_assignment(int n, Rng& rng) {
    Assignment x(n);
    for (int i = 0; i < n; ++i) x[i] = static_cast<int>(rng.next_below(2));
    return x;
}

}  // namespace

TEST_CASE("parse_edge_list accepts the K3 instance") {
    Graph g = parse_edge_list("3 3\n0 1\n0 2\n1 2");
    CHECK(g.nodes() == 3);
    CHECK(g.edge_count() == 3);
    CHECK(g.degree(0) == 2);
    CHECK(g.neighbors(1) == std::vector<int>{0, 2});
}

TEST_CASE("parse_edge_list reports malformed input with line numbers") {
    CHECK_THROWS_WITH_AS(parse_edge_list("2 1\n0 0"), doctest::Contains("line 2"), ParseError);
    CHECK_THROWS_WITH_AS(parse_edge_list("2 1\nx y"), doctest::Contains("line 2"), ParseError);
    CHECK_THROWS_WITH_AS(parse_edge_list("2 1\n0 5"), doctest::Contains("line 2"), ParseError);
    CHECK_THROWS_WITH_AS(parse_edge_list("3 2\n0 1\n0 1"), doctest::Contains("line 3"), ParseError);
    // Reversed duplicate counts as a duplicate too.
    CHECK_THROWS_WITH_AS(parse_edge_list("3 2\n0 1\n1 0"), doctest::Contains("duplicate"),
                         ParseError);
    CHECK_THROWS_AS(parse_edge_list("3 2\n0 1"), ParseError);     // too few edges
    CHECK_THROWS_AS(parse_edge_list("bad header"), ParseError);
}

TEST_CASE("parse round-trips a generated (50, 89) instance") {
    Graph g = generate_random_graph(50, 89, 7);
    Graph parsed = parse_edge_list(write_edge_list(g));
    CHECK(parsed.nodes() == 50);
    CHECK(parsed.edge_count() == 89);
    CHECK(parsed.edges() == g.edges());
}

TEST_CASE("write_edge_list is canonical") {
    Graph g(3, {{2, 1}, {1, 0}, {0, 2}});
    CHECK(write_edge_list(g) == "3 3\n0 1\n0 2\n1 2\n");
}

TEST_CASE("generate_random_graph basics") {
    SUBCASE("three nodes, three edges forces K3") {
        for (std::uint64_t seed : {0ull, 1ull, 42ull}) {
            Graph g = generate_random_graph(3, 3, seed);
            CHECK(g.edges() == std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}});
        }
    }
    SUBCASE("requested size is honored without duplicates") {
        Graph g = generate_random_graph(50, 89, 7);
        CHECK(g.nodes() == 50);
        CHECK(g.edge_count() == 89);
        std::set<std::pair<int, int>> uniq(g.edges().begin(), g.edges().end());
        CHECK(uniq.size() == 89);
        for (auto [u, v] : g.edges()) {
            CHECK(u < v);
            CHECK(v < 50);
        }
    }
    SUBCASE("edgeless graph") {
        Graph g = generate_random_graph(5, 0, 1);
        CHECK(g.edge_count() == 0);
    }
    SUBCASE("m beyond n(n-1)/2 is rejected") {
        CHECK_THROWS_AS(generate_random_graph(5, 11, 1), std::invalid_argument);
    }
    SUBCASE("reproducible per seed, different across seeds") {
        Graph a = generate_random_graph(50, 499, 3);
        Graph b = generate_random_graph(50, 499, 3);
        Graph c = generate_random_graph(50, 499, 4);
        CHECK(a.edges() == b.edges());
        CHECK(a.edges() != c.edges());
    }
}

TEST_CASE("max-cut QUBO coefficients") {
    SUBCASE("K3") {
        QuboMatrix q = build_maxcut_qubo(parse_edge_list("3 3\n0 1\n0 2\n1 2"));
        for (int i = 0; i < 3; ++i) CHECK(q.coefficient(i, i) == 2);
        CHECK(q.coefficient(0, 1) == -2);
        CHECK(q.coefficient(0, 2) == -2);
        CHECK(q.coefficient(1, 2) == -2);
        CHECK(q.terms().size() == 6);
    }
    SUBCASE("single edge") {
        QuboMatrix q = build_maxcut_qubo(Graph(2, {{0, 1}}));
        CHECK(q.coefficient(0, 0) == 1);
        CHECK(q.coefficient(1, 1) == 1);
        CHECK(q.coefficient(0, 1) == -2);
    }
    SUBCASE("edgeless graph has an all-zero matrix") {
        QuboMatrix q = build_maxcut_qubo(generate_random_graph(5, 0, 1));
        CHECK(q.terms().empty());
        CHECK(q.coefficient(2, 2) == 0);
    }
}

TEST_CASE("evaluate_hamiltonian") {
    QuboMatrix q = build_maxcut_qubo(parse_edge_list("3 3\n0 1\n0 2\n1 2"));
    CHECK(evaluate_hamiltonian(q, {1, 0, 0}) == 2);
    CHECK(evaluate_hamiltonian(q, {0, 0, 0}) == 0);
    CHECK(evaluate_hamiltonian(q, {1, 1, 1}) == 0);
    CHECK_THROWS_AS(evaluate_hamiltonian(q, {1, 0}), std::invalid_argument);
}

TEST_CASE("cut_size") {
    Graph k3 = parse_edge_list("3 3\n0 1\n0 2\n1 2");
    CHECK(cut_size(k3, {1, 0, 0}) == 2);
    Graph path = Graph(3, {{0, 1}, {1, 2}});
    CHECK(cut_size(path, {0, 1, 0}) == 2);
    CHECK_THROWS_AS(cut_size(path, {0, 1}), std::invalid_argument);

    // C5's optimum is 4: verified by enumerating all 32 labelings.
    Graph c5(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});
    long long best = 0;
    for (int mask = 0; mask < 32; ++mask) {
        Assignment x(5);
        for (int i = 0; i < 5; ++i) x[i] = (mask >> i) & 1;
        best = std::max(best, cut_size(c5, x));
    }
    CHECK(best == 4);
}

TEST_CASE("Hamiltonian equals cut size on random instances") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + static_cast<int>(rng.next_below(12));
        long long m = static_cast<long long>(rng.next_below(Graph::max_edges(n) + 1));
        Graph g = generate_random_graph(n, m, rng.next_u64());
        QuboMatrix q = build_maxcut_qubo(g);
        Assignment x = random_assignment(n, rng);
        CHECK(evaluate_hamiltonian(q, x) == cut_size(g, x));

        // Max-Cut encoding invariants.
        for (int v = 0; v < n; ++v)
            CHECK(q.coefficient(v, v) == (g.degree(v) > 0 ? g.degree(v) : 0));
        for (auto [u, v] : g.edges()) CHECK(q.coefficient(u, v) == -2);

        // Label-flip symmetry of the cut.
        Assignment flipped = x;
        for (auto& b : flipped) b ^= 1;
        CHECK(cut_size(g, x) == cut_size(g, flipped));
    }
}
