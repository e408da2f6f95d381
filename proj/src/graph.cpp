#include "daggr/graph.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

#include "daggr/errors.hpp"

namespace daggr {

std::string format_cycle(const std::vector<int>& cycle) {
    std::ostringstream out;
    for (int v : cycle) {
        out << v << " -> ";
    }
    if (!cycle.empty()) {
        out << cycle.front();
    }
    return out.str();
}

void EdgeSet::insert(int i, int j) {
    if (i < 0 || i >= p || j < 0 || j >= p) {
        throw DimensionError("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                             ") out of range for p = " + std::to_string(p));
    }
    if (i == j) {
        throw DomainError("self-loop at node " + std::to_string(i));
    }
    edges.insert({i, j});
}

namespace {

void require_square(const Eigen::MatrixXd& adj) {
    if (adj.rows() != adj.cols()) {
        throw DimensionError("adjacency matrix must be square, got " +
                             std::to_string(adj.rows()) + " x " +
                             std::to_string(adj.cols()));
    }
}

// Children lists of the support, including any self-loops.
std::vector<std::vector<int>> support_children(const Eigen::MatrixXd& adj) {
    const int p = static_cast<int>(adj.rows());
    std::vector<std::vector<int>> children(p);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if (adj(i, j) != 0.0) {
                children[i].push_back(j);
            }
        }
    }
    return children;
}

}  // namespace

bool is_acyclic(const Eigen::MatrixXd& adj) {
    require_square(adj);
    const int p = static_cast<int>(adj.rows());
    const auto children = support_children(adj);

    // Kahn's algorithm: repeatedly remove in-degree-zero nodes.
    std::vector<int> in_degree(p, 0);
    for (int i = 0; i < p; ++i) {
        for (int j : children[i]) {
            ++in_degree[j];
        }
    }
    std::vector<int> stack;
    for (int v = 0; v < p; ++v) {
        if (in_degree[v] == 0) {
            stack.push_back(v);
        }
    }
    int removed = 0;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        ++removed;
        for (int j : children[v]) {
            if (--in_degree[j] == 0) {
                stack.push_back(j);
            }
        }
    }
    return removed == p;
}

std::optional<std::vector<int>> find_cycle(const Eigen::MatrixXd& adj) {
    require_square(adj);
    const int p = static_cast<int>(adj.rows());
    const auto children = support_children(adj);

    // Iterative DFS with tricolor marking; a back edge closes a cycle that is
    // recovered from the current path.
    enum { kWhite, kGray, kBlack };
    std::vector<int> color(p, kWhite);
    std::vector<int> path;

    for (int root = 0; root < p; ++root) {
        if (color[root] != kWhite) {
            continue;
        }
        // Frame: node plus index of the next child to visit.
        std::vector<std::pair<int, std::size_t>> frames{{root, 0}};
        color[root] = kGray;
        path = {root};
        while (!frames.empty()) {
            auto& [v, next] = frames.back();
            if (next < children[v].size()) {
                const int w = children[v][next++];
                if (color[w] == kGray) {
                    const auto start = std::find(path.begin(), path.end(), w);
                    return std::vector<int>(start, path.end());
                }
                if (color[w] == kWhite) {
                    color[w] = kGray;
                    frames.push_back({w, 0});
                    path.push_back(w);
                }
            } else {
                color[v] = kBlack;
                frames.pop_back();
                path.pop_back();
            }
        }
    }
    return std::nullopt;
}

std::vector<int> topological_order(const Eigen::MatrixXd& adj) {
    require_square(adj);
    const int p = static_cast<int>(adj.rows());
    const auto children = support_children(adj);

    std::vector<int> in_degree(p, 0);
    for (int i = 0; i < p; ++i) {
        for (int j : children[i]) {
            ++in_degree[j];
        }
    }
    // Min-heap keeps the order deterministic: lowest index first among
    // currently available sources.
    std::priority_queue<int, std::vector<int>, std::greater<>> sources;
    for (int v = 0; v < p; ++v) {
        if (in_degree[v] == 0) {
            sources.push(v);
        }
    }
    std::vector<int> order;
    order.reserve(p);
    while (!sources.empty()) {
        const int v = sources.top();
        sources.pop();
        order.push_back(v);
        for (int j : children[v]) {
            if (--in_degree[j] == 0) {
                sources.push(j);
            }
        }
    }
    if (static_cast<int>(order.size()) != p) {
        auto cycle = find_cycle(adj);
        const std::string msg = "graph has a directed cycle: " + format_cycle(*cycle);
        throw CycleError(msg, std::move(*cycle));
    }
    return order;
}

EdgeSet edge_set(const Eigen::MatrixXd& adj) {
    require_square(adj);
    EdgeSet out(static_cast<int>(adj.rows()));
    for (int i = 0; i < out.p; ++i) {
        for (int j = 0; j < out.p; ++j) {
            if (i != j && adj(i, j) != 0.0) {
                out.edges.insert({i, j});
            }
        }
    }
    return out;
}

std::size_t sym_diff_size(const EdgeSet& a, const EdgeSet& b) {
    if (a.p != b.p) {
        throw DimensionError("edge sets over different node counts: " +
                             std::to_string(a.p) + " vs " + std::to_string(b.p));
    }
    std::size_t diff = 0;
    for (const auto& e : a.edges) {
        diff += b.edges.count(e) == 0;
    }
    for (const auto& e : b.edges) {
        diff += a.edges.count(e) == 0;
    }
    return diff;
}

}  // namespace daggr
