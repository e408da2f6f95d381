#pragma once

#include <Eigen/Dense>
#include <set>
#include <utility>

#include "daggr/graph.hpp"

namespace daggr {

// Importance-guided pruning of an averaged adjacency matrix. First zeroes
// every entry with importance s(i, j) <= c; then, while the survivors still
// contain a directed cycle, finds the edges attaining the minimum surviving
// importance, visits them in increasing |U~(i, j)| (ties by lexicographic
// (i, j)), and deletes one at a time, re-checking acyclicity after each
// deletion. Always terminates with a DAG; c = 0 keeps everything except the
// cycle-breaking deletions. c in [0, 1]; s entries in [0, 1].
WeightedDag prune(const Eigen::MatrixXd& u_tilde, const Eigen::MatrixXd& s, double c);

// Partially directed graph summary of an importance matrix.
struct Pdag {
    EdgeSet directed;                      // oriented edges i -> j
    std::set<std::pair<int, int>> undirected;  // unordered {i, j}, stored i < j
};

// Classifies each node pair from importance scores: i -> j is directed when
// s(i, j) >= tau and s(i, j) - s(j, i) > delta; {i, j} is undirected when
// neither direction qualifies, s(i, j) + s(j, i) >= tau, and
// |s(i, j) - s(j, i)| <= delta. Directed classification takes precedence.
// tau in (0, 1], delta in [0, 1).
Pdag classify_edges(const Eigen::MatrixXd& s, double tau, double delta);

}  // namespace daggr
