#include "daggr/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>
#include <vector>

#include "daggr/errors.hpp"

namespace daggr {

namespace {

constexpr double kMinGain = 1e-9;   // smallest BIC improvement worth a move
constexpr double kTieEps = 1e-12;   // gains closer than this count as tied

double bic_from_rss(double total_rss, int n, int p, int n_edges) {
    const double np = static_cast<double>(n) * p;
    const double s2 = std::max(total_rss / np, kSigma2Floor);
    const double ll = -(total_rss / (2.0 * s2) + 0.5 * np * std::log(s2));
    return ll - 0.5 * n_edges * std::log(static_cast<double>(n));
}

// True iff `to` is reachable from `from` along the support.
bool reaches(const std::vector<std::vector<char>>& has_edge, int from, int to) {
    if (from == to) {
        return true;
    }
    const int p = static_cast<int>(has_edge.size());
    std::vector<char> seen(p, 0);
    std::vector<int> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w = 0; w < p; ++w) {
            if (has_edge[v][w] && !seen[w]) {
                if (w == to) {
                    return true;
                }
                seen[w] = 1;
                stack.push_back(w);
            }
        }
    }
    return false;
}

void insert_sorted(std::vector<int>& v, int value) {
    v.insert(std::upper_bound(v.begin(), v.end(), value), value);
}

void erase_value(std::vector<int>& v, int value) {
    v.erase(std::find(v.begin(), v.end(), value));
}

void require_rows(const Eigen::MatrixXd& rows, int minimum) {
    if (rows.rows() < minimum) {
        throw DomainError("learner needs at least " + std::to_string(minimum) +
                          " rows, got " + std::to_string(rows.rows()));
    }
    if (rows.cols() < 1) {
        throw DomainError("data has no columns");
    }
    if (!rows.allFinite()) {
        throw DomainError("data contains non-finite values");
    }
}

}  // namespace

double bic_score(const Eigen::MatrixXd& rows, const EdgeSet& structure) {
    const int n = static_cast<int>(rows.rows());
    double total_rss = 0.0;
    std::vector<std::vector<int>> parents(structure.p);
    for (const auto& [i, j] : structure.edges) {
        insert_sorted(parents[j], i);
    }
    for (int j = 0; j < structure.p; ++j) {
        double rss_j = 0.0;
        child_ols(rows, parents[j], j, &rss_j);
        total_rss += rss_j;
    }
    return bic_from_rss(total_rss, n, structure.p,
                        static_cast<int>(structure.size()));
}

WeightedDag hill_climb(const Eigen::MatrixXd& rows, const LearnerConfig& cfg) {
    require_rows(rows, 3);
    if (cfg.max_iters < 1) {
        throw DomainError("move budget must be at least 1, got " +
                          std::to_string(cfg.max_iters));
    }
    const int n = static_cast<int>(rows.rows());
    const int p = static_cast<int>(rows.cols());

    std::vector<std::vector<int>> parents(p);       // sorted parent lists
    std::vector<std::vector<char>> has_edge(p, std::vector<char>(p, 0));
    std::vector<double> rss(p);
    for (int j = 0; j < p; ++j) {
        rss[j] = rows.col(j).squaredNorm();
    }
    double total_rss = std::accumulate(rss.begin(), rss.end(), 0.0);
    int n_edges = 0;
    double bic = bic_from_rss(total_rss, n, p, n_edges);

    enum MoveType { kAdd = 0, kDelete = 1, kReverse = 2 };
    struct Move {
        int i = -1, j = -1;
        MoveType type = kAdd;
        double rss_j = 0.0;   // new RSS of child j
        double rss_i = 0.0;   // new RSS of child i (reverse only)
    };

    for (int accepted = 0; accepted < cfg.max_iters; ++accepted) {
        Move best;
        double best_gain = kMinGain;
        bool found = false;
        // Candidate ordering on exact gain ties: lexicographic (i, j), then
        // add < delete < reverse.
        auto better_key = [&](const Move& a, const Move& b) {
            return std::tuple(a.i, a.j, static_cast<int>(a.type)) <
                   std::tuple(b.i, b.j, static_cast<int>(b.type));
        };
        auto consider = [&](const Move& m, double gain) {
            if (gain > best_gain + kTieEps ||
                (found && std::abs(gain - best_gain) <= kTieEps && better_key(m, best))) {
                best = m;
                best_gain = gain;
                found = true;
            }
        };

        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < p; ++j) {
                if (i == j) {
                    continue;
                }
                if (!has_edge[i][j]) {
                    // Addition i -> j; cyclic iff j already reaches i.
                    if (reaches(has_edge, j, i)) {
                        continue;
                    }
                    Move m{i, j, kAdd};
                    std::vector<int> pa = parents[j];
                    insert_sorted(pa, i);
                    child_ols(rows, pa, j, &m.rss_j);
                    const double new_total = total_rss - rss[j] + m.rss_j;
                    consider(m, bic_from_rss(new_total, n, p, n_edges + 1) - bic);
                } else {
                    // Deletion.
                    {
                        Move m{i, j, kDelete};
                        std::vector<int> pa = parents[j];
                        erase_value(pa, i);
                        child_ols(rows, pa, j, &m.rss_j);
                        const double new_total = total_rss - rss[j] + m.rss_j;
                        consider(m, bic_from_rss(new_total, n, p, n_edges - 1) - bic);
                    }
                    // Reversal to j -> i; cyclic iff i still reaches j without
                    // the direct edge.
                    has_edge[i][j] = 0;
                    const bool cyclic = reaches(has_edge, i, j);
                    has_edge[i][j] = 1;
                    if (!cyclic) {
                        Move m{i, j, kReverse};
                        std::vector<int> pa_j = parents[j];
                        erase_value(pa_j, i);
                        child_ols(rows, pa_j, j, &m.rss_j);
                        std::vector<int> pa_i = parents[i];
                        insert_sorted(pa_i, j);
                        child_ols(rows, pa_i, i, &m.rss_i);
                        const double new_total =
                            total_rss - rss[j] + m.rss_j - rss[i] + m.rss_i;
                        consider(m, bic_from_rss(new_total, n, p, n_edges) - bic);
                    }
                }
            }
        }
        if (!found) {
            break;
        }

        switch (best.type) {
            case kAdd:
                insert_sorted(parents[best.j], best.i);
                has_edge[best.i][best.j] = 1;
                total_rss += best.rss_j - rss[best.j];
                rss[best.j] = best.rss_j;
                ++n_edges;
                break;
            case kDelete:
                erase_value(parents[best.j], best.i);
                has_edge[best.i][best.j] = 0;
                total_rss += best.rss_j - rss[best.j];
                rss[best.j] = best.rss_j;
                --n_edges;
                break;
            case kReverse:
                erase_value(parents[best.j], best.i);
                insert_sorted(parents[best.i], best.j);
                has_edge[best.i][best.j] = 0;
                has_edge[best.j][best.i] = 1;
                total_rss += best.rss_j - rss[best.j] + best.rss_i - rss[best.i];
                rss[best.j] = best.rss_j;
                rss[best.i] = best.rss_i;
                break;
        }
        bic = bic_from_rss(total_rss, n, p, n_edges);
    }

    EdgeSet structure(p);
    for (int j = 0; j < p; ++j) {
        for (int i : parents[j]) {
            structure.insert(i, j);
        }
    }
    return refit(rows, structure, /*hetero=*/false);
}

WeightedDag order_threshold(const Eigen::MatrixXd& rows, const LearnerConfig& cfg) {
    require_rows(rows, 3);
    if (!(cfg.threshold >= 0.0)) {
        throw DomainError("coefficient threshold must be non-negative");
    }
    const int n = static_cast<int>(rows.rows());
    const int p = static_cast<int>(rows.cols());

    Eigen::VectorXd variance(p);
    for (int j = 0; j < p; ++j) {
        const double mean = rows.col(j).mean();
        variance(j) = (rows.col(j).array() - mean).square().sum() / (n - 1);
    }
    std::vector<int> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return variance(a) < variance(b); });

    Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(p, p);
    std::vector<int> preds;
    for (int t = 0; t < p; ++t) {
        const int j = order[t];
        std::vector<int> pa(preds);
        std::sort(pa.begin(), pa.end());
        const Eigen::VectorXd beta = child_ols(rows, pa, j, nullptr);
        for (std::size_t k = 0; k < pa.size(); ++k) {
            const double b = beta(static_cast<Eigen::Index>(k));
            if (std::abs(b) > cfg.threshold) {
                adj(pa[k], j) = b;
            }
        }
        preds.push_back(j);
    }

    WeightedDag out;
    out.adj = std::move(adj);
    const double rss = (rows - rows * out.adj).squaredNorm();
    out.sigma = std::sqrt(std::max(rss / (static_cast<double>(n) * p), kSigma2Floor));
    return out;
}

WeightedDag learn(const Eigen::MatrixXd& rows, const LearnerConfig& cfg) {
    switch (cfg.kind) {
        case LearnerKind::kHillClimb:
            return hill_climb(rows, cfg);
        case LearnerKind::kOrderThreshold:
            return order_threshold(rows, cfg);
    }
    throw DomainError("unknown learner kind");
}

WeightedDag refit_candidate(const Eigen::MatrixXd& rows, const EdgeSet& structure,
                            bool hetero) {
    Eigen::MatrixXd support = Eigen::MatrixXd::Zero(structure.p, structure.p);
    for (const auto& [i, j] : structure.edges) {
        support(i, j) = 1.0;
    }
    if (auto cycle = find_cycle(support)) {
        const std::string msg =
            "candidate contains a directed cycle: " + format_cycle(*cycle);
        throw CycleError(msg, std::move(*cycle));
    }
    return refit(rows, structure, hetero);
}

}  // namespace daggr
