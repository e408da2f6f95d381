#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "daggr/errors.hpp"
#include "daggr/graph.hpp"
#include "helpers.hpp"

using namespace daggr;

namespace {

Eigen::MatrixXd from_edges(int p, const std::vector<std::pair<int, int>>& edges,
                           double weight = 1.0) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
    for (const auto& [i, j] : edges) {
        m(i, j) = weight;
    }
    return m;
}

// A CycleError's payload must be a genuine directed cycle of the graph.
void check_cycle_valid(const Eigen::MatrixXd& adj, const std::vector<int>& cycle) {
    REQUIRE(!cycle.empty());
    for (std::size_t t = 0; t < cycle.size(); ++t) {
        const int from = cycle[t];
        const int to = cycle[(t + 1) % cycle.size()];
        CAPTURE(from);
        CAPTURE(to);
        CHECK(adj(from, to) != 0.0);
    }
    std::vector<int> sorted(cycle);
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
}

}  // namespace

TEST_CASE("is_acyclic on fixed cases") {
    CHECK(is_acyclic(Eigen::MatrixXd::Zero(3, 3)));
    CHECK_FALSE(is_acyclic(from_edges(2, {{0, 1}, {1, 0}})));

    Eigen::MatrixXd chain = Eigen::MatrixXd::Zero(3, 3);
    chain(0, 1) = 0.8;
    chain(1, 2) = -0.6;
    CHECK(is_acyclic(chain));

    CHECK_FALSE(is_acyclic(from_edges(3, {{0, 1}, {1, 2}, {2, 0}})));
    CHECK_THROWS_AS(is_acyclic(Eigen::MatrixXd::Zero(2, 3)), DimensionError);
}

TEST_CASE("is_acyclic agrees with brute-force enumeration") {
    Rng rng(20240817);
    for (int trial = 0; trial < 600; ++trial) {
        const int p = 1 + static_cast<int>(rng.below(6));
        const double density = rng.uniform(0.05, 0.7);
        const Eigen::MatrixXd m = test::random_support(rng, p, density);
        CAPTURE(trial);
        CHECK(is_acyclic(m) == !test::brute_has_cycle(m));
    }
}

TEST_CASE("topological_order fixed cases") {
    CHECK(topological_order(Eigen::MatrixXd::Zero(4, 4)) ==
          std::vector<int>{0, 1, 2, 3});
    CHECK(topological_order(from_edges(3, {{0, 1}, {1, 2}})) ==
          std::vector<int>{0, 1, 2});
    // Collider: both parents come before the child, lowest index first.
    CHECK(topological_order(from_edges(4, {{1, 3}, {2, 3}})) ==
          std::vector<int>{0, 1, 2, 3});
    // Reversed chain: order follows edges, not indices.
    CHECK(topological_order(from_edges(3, {{2, 1}, {1, 0}})) ==
          std::vector<int>{2, 1, 0});
}

TEST_CASE("topological_order certifies every edge forward") {
    Rng rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        const int p = 2 + static_cast<int>(rng.below(7));
        const Eigen::MatrixXd m = test::random_dag(rng, p, rng.uniform(0.2, 0.9));
        const auto order = topological_order(m);
        REQUIRE(order.size() == static_cast<std::size_t>(p));
        std::vector<int> pos(p);
        for (int t = 0; t < p; ++t) {
            pos[order[t]] = t;
        }
        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < p; ++j) {
                if (m(i, j) != 0.0) {
                    CHECK(pos[i] < pos[j]);
                }
            }
        }
    }
}

TEST_CASE("topological_order reports a genuine cycle") {
    Rng rng(99);
    int seen = 0;
    for (int trial = 0; trial < 400 && seen < 50; ++trial) {
        const int p = 2 + static_cast<int>(rng.below(6));
        const Eigen::MatrixXd m = test::random_support(rng, p, 0.5);
        if (is_acyclic(m)) {
            continue;
        }
        ++seen;
        try {
            topological_order(m);
            FAIL("expected CycleError");
        } catch (const CycleError& e) {
            check_cycle_valid(m, e.cycle);
        }
    }
    CHECK(seen >= 20);  // the generator must actually produce cyclic graphs
}

TEST_CASE("edge_set reads support exactly") {
    CHECK(edge_set(Eigen::MatrixXd::Zero(4, 4)).size() == 0);

    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
    m(0, 2) = 1e-300;  // tiny but nonzero is still an edge
    m(2, 1) = -0.0;    // negative zero is no edge
    const EdgeSet e = edge_set(m);
    CHECK(e.size() == 1);
    CHECK(e.contains(0, 2));
    CHECK_FALSE(e.contains(2, 1));
}

TEST_CASE("EdgeSet::insert validates") {
    EdgeSet e(3);
    e.insert(0, 2);
    e.insert(2, 0);  // both directions may coexist in an edge set
    CHECK(e.size() == 2);
    CHECK_THROWS_AS(e.insert(0, 3), DimensionError);
    CHECK_THROWS_AS(e.insert(-1, 0), DimensionError);
    CHECK_THROWS_AS(e.insert(1, 1), DomainError);
}

TEST_CASE("sym_diff_size fixed cases") {
    EdgeSet a(4);
    a.insert(0, 1);
    a.insert(2, 3);
    EdgeSet b(4);
    b.insert(1, 0);
    CHECK(sym_diff_size(a, a) == 0);
    CHECK(sym_diff_size(a, b) == 3);  // reversal counts twice here
    EdgeSet sub(4);
    sub.insert(0, 1);
    CHECK(sym_diff_size(a, sub) == 1);

    EdgeSet other(5);
    CHECK_THROWS_AS(sym_diff_size(a, other), DimensionError);
}

TEST_CASE("sym_diff_size is a metric") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const int p = 2 + static_cast<int>(rng.below(5));
        const EdgeSet a = edge_set(test::random_support(rng, p, 0.4));
        const EdgeSet b = edge_set(test::random_support(rng, p, 0.4));
        const EdgeSet c = edge_set(test::random_support(rng, p, 0.4));
        CHECK(sym_diff_size(a, b) == sym_diff_size(b, a));
        CHECK(sym_diff_size(a, c) <= sym_diff_size(a, b) + sym_diff_size(b, c));
        CHECK((sym_diff_size(a, b) == 0) == (a.edges == b.edges));
    }
}

TEST_CASE("find_cycle is consistent with is_acyclic") {
    Rng rng(55);
    for (int trial = 0; trial < 300; ++trial) {
        const int p = 1 + static_cast<int>(rng.below(6));
        const Eigen::MatrixXd m = test::random_support(rng, p, rng.uniform(0.1, 0.8));
        const auto cycle = find_cycle(m);
        CHECK(cycle.has_value() == !is_acyclic(m));
        if (cycle) {
            check_cycle_valid(m, *cycle);
        }
    }
}
