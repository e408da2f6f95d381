#include "daggr/metrics.hpp"

#include <cmath>
#include <string>

#include "daggr/errors.hpp"

namespace daggr {

namespace {

// 0 when the denominator is 0, matching the toolkit's 0/0 convention.
double ratio(double num, double den) {
    return den == 0.0 ? 0.0 : num / den;
}

}  // namespace

ConfusionCounts confusion(const EdgeSet& est, const EdgeSet& truth) {
    if (est.p != truth.p) {
        throw DimensionError("edge sets over different node counts: " +
                             std::to_string(est.p) + " vs " + std::to_string(truth.p));
    }
    ConfusionCounts c;
    for (const auto& e : est.edges) {
        if (truth.edges.count(e) > 0) {
            ++c.tp;
        } else {
            ++c.fp;
        }
    }
    c.fn = static_cast<std::int64_t>(truth.size()) - c.tp;
    const std::int64_t cells =
        static_cast<std::int64_t>(est.p) * (static_cast<std::int64_t>(est.p) - 1);
    c.tn = cells - c.tp - c.fp - c.fn;
    return c;
}

double fnr(const ConfusionCounts& c) {
    return ratio(static_cast<double>(c.fn), static_cast<double>(c.tp + c.fn));
}

double fpr(const ConfusionCounts& c) {
    return ratio(static_cast<double>(c.fp), static_cast<double>(c.fp + c.tn));
}

double fdr(const ConfusionCounts& c) {
    return ratio(static_cast<double>(c.fp), static_cast<double>(c.tp + c.fp));
}

double mcc(const ConfusionCounts& c) {
    const double tp = static_cast<double>(c.tp);
    const double tn = static_cast<double>(c.tn);
    const double fp = static_cast<double>(c.fp);
    const double fn = static_cast<double>(c.fn);
    const double den =
        std::sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn));
    return ratio(tp * tn - fp * fn, den);
}

double f1(const ConfusionCounts& c) {
    return ratio(2.0 * static_cast<double>(c.tp),
                 static_cast<double>(2 * c.tp + c.fp + c.fn));
}

std::size_t shd(const EdgeSet& est, const EdgeSet& truth) {
    // Reversed pairs appear once in each one-sided difference; count each
    // such pair as a single discrepancy.
    std::size_t reversals = 0;
    for (const auto& [i, j] : est.edges) {
        if (truth.edges.count({i, j}) == 0 && truth.edges.count({j, i}) > 0 &&
            est.edges.count({j, i}) == 0) {
            ++reversals;
        }
    }
    return sym_diff_size(est, truth) - reversals;
}

double frob_sq(const Eigen::MatrixXd& est, const Eigen::MatrixXd& truth) {
    if (est.rows() != truth.rows() || est.cols() != truth.cols()) {
        throw DimensionError("matrix shapes disagree");
    }
    return (est - truth).squaredNorm();
}

double pred_mse(const Eigen::MatrixXd& rows, const Eigen::MatrixXd& adj) {
    if (rows.cols() != adj.rows() || adj.rows() != adj.cols()) {
        throw DimensionError("data and adjacency shapes disagree");
    }
    const double n = static_cast<double>(rows.rows());
    const double p = static_cast<double>(rows.cols());
    if (rows.rows() == 0) {
        throw DomainError("no rows to score");
    }
    return (rows - rows * adj).squaredNorm() / (n * p);
}

}  // namespace daggr
