#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>

#include "daggr/graph.hpp"
#include "daggr/sem.hpp"

namespace daggr {

// Edge-level confusion counts over the p(p-1) ordered off-diagonal cells.
// A reversed edge contributes one false positive and one false negative.
struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;
};

ConfusionCounts confusion(const EdgeSet& est, const EdgeSet& truth);

// Ratio conventions: any 0/0 is defined as 0.
double fnr(const ConfusionCounts& c);   // fn / (tp + fn)
double fpr(const ConfusionCounts& c);   // fp / (fp + tn)
double fdr(const ConfusionCounts& c);   // fp / (tp + fp)
double mcc(const ConfusionCounts& c);
double f1(const ConfusionCounts& c);    // 2 tp / (2 tp + fp + fn)

// Structural Hamming distance: symmetric-difference size with each reversed
// pair (i->j estimated, j->i true, or vice versa) counted once, not twice.
std::size_t shd(const EdgeSet& est, const EdgeSet& truth);

// Squared Frobenius norm of the adjacency difference.
double frob_sq(const Eigen::MatrixXd& est, const Eigen::MatrixXd& truth);

// Mean squared structural residual: ||X (I - U)||_F^2 / (n p).
double pred_mse(const Eigen::MatrixXd& rows, const Eigen::MatrixXd& adj);

}  // namespace daggr
