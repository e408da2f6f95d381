#include "daggr/prune.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "daggr/errors.hpp"

namespace daggr {

WeightedDag prune(const Eigen::MatrixXd& u_tilde, const Eigen::MatrixXd& s, double c) {
    if (u_tilde.rows() != u_tilde.cols()) {
        throw DimensionError("averaged matrix must be square");
    }
    if (s.rows() != u_tilde.rows() || s.cols() != u_tilde.cols()) {
        throw DimensionError("importance matrix shape does not match");
    }
    if (!(c >= 0.0 && c <= 1.0)) {
        throw DomainError("importance cutoff must lie in [0, 1]");
    }
    const int p = static_cast<int>(u_tilde.rows());

    Eigen::MatrixXd u = u_tilde;
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if (!(s(i, j) > c)) {
                u(i, j) = 0.0;
            }
        }
    }

    // Break remaining cycles: among surviving edges of minimum importance,
    // delete in increasing |u| (ties by (i, j)), one at a time, stopping as
    // soon as the graph is acyclic.
    while (!is_acyclic(u)) {
        double min_s = std::numeric_limits<double>::infinity();
        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < p; ++j) {
                if (u(i, j) != 0.0) {
                    min_s = std::min(min_s, s(i, j));
                }
            }
        }
        std::vector<Edge> at_min;
        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < p; ++j) {
                if (u(i, j) != 0.0 && s(i, j) == min_s) {
                    at_min.push_back({i, j});
                }
            }
        }
        std::sort(at_min.begin(), at_min.end(), [&](const Edge& a, const Edge& b) {
            const double ma = std::abs(u(a.first, a.second));
            const double mb = std::abs(u(b.first, b.second));
            if (ma != mb) {
                return ma < mb;
            }
            return a < b;
        });
        for (const auto& [i, j] : at_min) {
            u(i, j) = 0.0;
            if (is_acyclic(u)) {
                break;
            }
        }
    }

    WeightedDag out;
    out.adj = std::move(u);
    return out;
}

Pdag classify_edges(const Eigen::MatrixXd& s, double tau, double delta) {
    if (s.rows() != s.cols()) {
        throw DimensionError("importance matrix must be square");
    }
    if (!(tau > 0.0 && tau <= 1.0)) {
        throw DomainError("tau must lie in (0, 1]");
    }
    if (!(delta >= 0.0 && delta < 1.0)) {
        throw DomainError("delta must lie in [0, 1)");
    }
    const int p = static_cast<int>(s.rows());

    Pdag out;
    out.directed = EdgeSet(p);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if (i != j && s(i, j) >= tau && s(i, j) - s(j, i) > delta) {
                out.directed.insert(i, j);
            }
        }
    }
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            if (out.directed.contains(i, j) || out.directed.contains(j, i)) {
                continue;  // an oriented pair is never also undirected
            }
            if (s(i, j) + s(j, i) >= tau && std::abs(s(i, j) - s(j, i)) <= delta) {
                out.undirected.insert({i, j});
            }
        }
    }
    return out;
}

}  // namespace daggr
