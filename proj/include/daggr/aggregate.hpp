#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "daggr/graph.hpp"
#include "daggr/sem.hpp"

namespace daggr {

// One candidate structure, as ingested or produced by a learner. Coefficients
// are informational; aggregation always refits.
struct Candidate {
    std::string name;
    EdgeSet structure;
    std::optional<Eigen::MatrixXd> coef;
};

using CandidateEnsemble = std::vector<Candidate>;

struct AggregationConfig {
    double lambda = 1.0;               // score temperature, > 0
    double gamma = 1.0;                // variance-penalty weight in [0, 1]
    int splits = 30;                   // number of half-splits L
    std::vector<double> prior;         // per-candidate prior; empty = uniform
    bool hetero = false;               // per-node-variance scoring
    std::uint64_t rng_seed = 0;
};

// Validation score of one fitted candidate on held-out rows: shared-sigma
// log-likelihood, or minus the per-node-variance penalty when hetero.
// Higher is better in both modes.
double validation_score(const Eigen::MatrixXd& valid_rows, const WeightedDag& fitted,
                        bool hetero, double gamma);

// Exponential weighting kernel: w_k proportional to prior_k * exp(lambda *
// score_k), normalized to sum 1; computed in log space with max subtraction.
// prior must be empty (uniform) or strictly positive summing to 1.
Eigen::VectorXd exp_weights(const std::vector<double>& scores,
                            const std::vector<double>& prior, double lambda);

// Weights from a single half-split: refit every candidate on the train rows,
// score on the validation rows, exponentially weight.
Eigen::VectorXd split_weights(const Dataset& data, const CandidateEnsemble& cands,
                              const AggregationConfig& cfg, const SplitPlan& split);

// Full aggregation weights: average split_weights over cfg.splits independent
// uniformly random half-splits (split l uses the stream derived from
// cfg.rng_seed with label "split" and index l), then renormalize.
// Deterministic given cfg.rng_seed.
Eigen::VectorXd daggr_weights(const Dataset& data, const CandidateEnsemble& cands,
                              const AggregationConfig& cfg);

// Edge importance: s(i, j) = sum_k w_k * [candidate k contains i -> j].
Eigen::MatrixXd importance(const std::vector<EdgeSet>& structures,
                           const Eigen::VectorXd& w);
Eigen::MatrixXd importance(const CandidateEnsemble& cands, const Eigen::VectorXd& w);

// Weighted average of refit adjacency matrices: U~ = sum_k w_k U_k.
Eigen::MatrixXd aggregate_matrix(const std::vector<WeightedDag>& refits,
                                 const Eigen::VectorXd& w);

// Zeroes every averaged entry whose importance is not strictly above c.
// c >= 1 - 1/p certifies an acyclic result (asserted); below that the result
// may be cyclic and the caller checks. c in [0, 1].
WeightedDag threshold_aggregate(const std::vector<WeightedDag>& refits,
                                const Eigen::VectorXd& w, double c);

// Full-sample refits of an ensemble (the U_k entering aggregate_matrix).
std::vector<WeightedDag> refit_ensemble(const Eigen::MatrixXd& rows,
                                        const CandidateEnsemble& cands, bool hetero);

}  // namespace daggr
