#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "daggr/graph.hpp"
#include "daggr/rng.hpp"

namespace daggr {

// Estimated variances are floored here before use in densities.
inline constexpr double kSigma2Floor = 1e-12;
// Ridge added to a rank-deficient Gram matrix in least-squares fits.
inline constexpr double kRidge = 1e-8;

// Observations are rows: x is n x p, column j = variable j.
struct Dataset {
    Eigen::MatrixXd x;
    std::optional<std::uint64_t> seed;        // generator seed, when simulated
    std::optional<WeightedDag> truth;         // generating model, when known

    int n() const { return static_cast<int>(x.rows()); }
    int p() const { return static_cast<int>(x.cols()); }
};

// Row indices of one half-split; train gets floor(n/2) rows.
struct SplitPlan {
    std::vector<int> train_idx;
    std::vector<int> valid_idx;
};

// Uniformly random half-split of n rows (train floor(n/2), rest validation).
SplitPlan make_split(int n, Rng& rng);

// Rows of x selected by idx, in idx order.
Eigen::MatrixXd take_rows(const Eigen::MatrixXd& x, const std::vector<int>& idx);

// Draws n rows from the linear SEM: X = E (I - U)^{-1} with E row-iid
// N(0, diag(sigma_j^2)). Noise scales come from truth.node_sigmas, else
// truth.sigma, else default to 1. Throws CycleError if truth is cyclic.
Dataset simulate(const WeightedDag& truth, int n, std::uint64_t rng_seed);

// Least-squares refit of a fixed structure: each child is regressed on its
// parent columns (no intercept; the model is zero-mean), non-parent entries
// are exact zeros. hetero=false estimates one shared sigma
// (sigma^2 = total RSS / (n p)); hetero=true estimates per-node sigmas
// (sigma_j^2 = RSS_j / n). Both floored at kSigma2Floor. A rank-deficient
// Gram falls back to a ridge-penalized solve.
WeightedDag refit(const Eigen::MatrixXd& rows, const EdgeSet& structure, bool hetero);

// Least-squares fit of column j on the given parent columns (no intercept),
// in the given parent order; ridge fallback on a rank-deficient Gram.
// Fills *rss with the residual sum of squares when non-null. parents may be
// empty (returns an empty vector, rss = ||column j||^2).
Eigen::VectorXd child_ols(const Eigen::MatrixXd& rows, const std::vector<int>& parents,
                          int j, double* rss = nullptr);

// Gaussian log-likelihood of `rows` under a fitted DAG with shared sigma,
// omitting the additive -(p/2) log(2 pi) per row:
//   sum_rows -( ||x (I - U)||^2 / (2 sigma^2) + (p/2) log sigma^2 ).
// Throws DomainError if dag.sigma is absent or non-positive.
double loglik(const Eigen::MatrixXd& rows, const WeightedDag& dag);

// Per-node-variance validation score
//   L = sum_j ( RSS_j / (2 sigma_j^2) + gamma * n/2 * log sigma_j^2 ),
// to be exponentiated with a minus sign by the aggregator. gamma in [0, 1];
// gamma = 1 with all sigma_j equal reduces to -loglik. Throws DomainError on
// missing/non-positive node_sigmas or gamma outside [0, 1].
double hetero_score(const Eigen::MatrixXd& rows, const WeightedDag& dag, double gamma);

// Implied covariance (I - U)^{-T} diag(sigma_j^2) (I - U)^{-1}.
Eigen::MatrixXd implied_covariance(const WeightedDag& dag);

// KL( N(0, Sigma_truth) || N(0, Sigma_est) ) between the implied Gaussians,
// computed without forming either covariance:
//   with B = (I - U_t)^{-1} (I - U_e),
//   tr(Sigma_e^{-1} Sigma_t) = sum_{i,j} D_t(i) B(i,j)^2 / D_e(j),
//   log det Sigma = sum_j log D(j) - 2 log |det(I - U)|.
// Requires only that both (I - U) be invertible, so a cyclic estimate with
// invertible (I - U) is scored rather than rejected. Throws NumericError on a
// singular (I - U), DomainError on missing/non-positive variances.
double kl_divergence(const WeightedDag& truth, const WeightedDag& est);

// Noise variances of a dag as a vector: node_sigmas^2, else sigma^2
// broadcast, else all ones. Throws DomainError on non-positive entries.
Eigen::VectorXd noise_variances(const WeightedDag& dag);

}  // namespace daggr
