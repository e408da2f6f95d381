#pragma once

#include <Eigen/Dense>
#include <vector>

#include "daggr/graph.hpp"
#include "daggr/rng.hpp"

namespace daggr::test {

/// Random support matrix (possibly cyclic): each off-diagonal cell is an edge
// with the given density, weight uniform in +/-[0.1, 1.5].
inline Eigen::MatrixXd random_support(Rng& rng, int p, double density) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if (i != j && rng.uniform() < density) {
                const double mag = rng.uniform(0.1, 1.5);
                m(i, j) = rng.uniform() < 0.5 ? -mag : mag;
            }
        }
    }
    return m;
}

// Random DAG support: random permutation order, forward edges at the given
// density, weights uniform in +/-[0.3, 1.2].
inline Eigen::MatrixXd random_dag(Rng& rng, int p, double density) {
    std::vector<int> perm(p);
    for (int i = 0; i < p; ++i) {
        perm[i] = i;
    }
    rng.shuffle(perm);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
    for (int a = 0; a < p; ++a) {
        for (int b = a + 1; b < p; ++b) {
            if (rng.uniform() < density) {
                const double mag = rng.uniform(0.3, 1.2);
                m(perm[a], perm[b]) = rng.uniform() < 0.5 ? -mag : mag;
            }
        }
    }
    return m;
}

// iid standard normal matrix.
inline Eigen::MatrixXd random_matrix(Rng& rng, int n, int p) {
    Eigen::MatrixXd m(n, p);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < p; ++c) {
            m(r, c) = rng.normal();
        }
    }
    return m;
}

// Brute-force cycle detector: enumerates simple paths from every start
// node; exponential, for tiny graphs only.
inline bool cycle_from(const Eigen::MatrixXd& adj, int start, int v,
                       std::vector<char>& on_path) {
    const int p = static_cast<int>(adj.rows());
    for (int w = 0; w < p; ++w) {
        if (adj(v, w) == 0.0) {
            continue;
        }
        if (w == start) {
            return true;
        }
        if (!on_path[w]) {
            on_path[w] = 1;
            if (cycle_from(adj, start, w, on_path)) {
                return true;
            }
            on_path[w] = 0;
        }
    }
    return false;
}

inline bool brute_has_cycle(const Eigen::MatrixXd& adj) {
    const int p = static_cast<int>(adj.rows());
    for (int s = 0; s < p; ++s) {
        std::vector<char> on_path(p, 0);
        on_path[s] = 1;
        if (cycle_from(adj, s, s, on_path)) {
            return true;
        }
    }
    return false;
}

}  // namespace daggr::test
