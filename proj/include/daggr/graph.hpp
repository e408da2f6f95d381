#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "daggr/errors.hpp"

namespace daggr {

// Adjacency convention used throughout: entry (i, j) of a weighted adjacency
// matrix is the coefficient of parent i in the structural equation of child j,
// so a nonzero (i, j) encodes the directed edge i -> j. Absent edges are
// stored as literal zeros; support is read by exact comparison with 0.0, no
// tolerance.

using Edge = std::pair<int, int>;

// Unweighted structure: a set of ordered node pairs over 0..p-1.
struct EdgeSet {
    int p = 0;
    std::set<Edge> edges;

    EdgeSet() = default;
    explicit EdgeSet(int nodes) : p(nodes) {}

    // Inserts i -> j; rejects out-of-range endpoints and self-loops.
    void insert(int i, int j);

    bool contains(int i, int j) const { return edges.count({i, j}) > 0; }
    std::size_t size() const { return edges.size(); }
};

// Weighted DAG with optional noise scales. Exactly one of node_sigmas /
// sigma is typically populated; ops that need one say which.
struct WeightedDag {
    Eigen::MatrixXd adj;                          // p x p, parent-in-row
    std::optional<Eigen::VectorXd> node_sigmas;   // per-node noise sd, length p
    std::optional<double> sigma;                  // shared noise sd

    int nodes() const { return static_cast<int>(adj.rows()); }
};

// True iff the support of `adj` has no directed cycle (Kahn elimination).
// Throws DimensionError on non-square input.
bool is_acyclic(const Eigen::MatrixXd& adj);

// Finds one directed cycle in the support, as a node sequence v0 -> ... -> v0
// (closing edge implied); nullopt if acyclic.
std::optional<std::vector<int>> find_cycle(const Eigen::MatrixXd& adj);

// A topological order of the support, lowest index first among available
// sources. Throws CycleError (carrying one cycle) if none exists.
std::vector<int> topological_order(const Eigen::MatrixXd& adj);

// The support of `adj` as an EdgeSet (exact-zero reading).
EdgeSet edge_set(const Eigen::MatrixXd& adj);

// |a.edges symmetric-difference b.edges|. Throws DimensionError if a.p != b.p.
std::size_t sym_diff_size(const EdgeSet& a, const EdgeSet& b);

}  // namespace daggr
