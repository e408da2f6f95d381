#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "daggr/graph.hpp"
#include "daggr/sem.hpp"

namespace daggr {

enum class LearnerKind { kHillClimb, kOrderThreshold };
enum class ScoreType { kBic };

struct LearnerConfig {
    LearnerKind kind = LearnerKind::kHillClimb;
    int max_iters = 500;               // accepted-move budget (hill climb)
    ScoreType score = ScoreType::kBic;
    double threshold = 0.1;            // coefficient cutoff (order threshold)
    std::uint64_t rng_seed = 0;
};

// BIC of a structure on `rows` at the shared-sigma maximum likelihood:
//   loglik - (|edges| / 2) * log n.
double bic_score(const Eigen::MatrixXd& rows, const EdgeSet& structure);

// Greedy hill climb over single-edge additions, deletions, and reversals,
// maximizing BIC from the empty graph. Moves are scanned deterministically;
// equal-gain moves break toward the lexicographically lowest (i, j), with
// add < delete < reverse on exact ties at the same cell. Stops when no move
// improves BIC by more than 1e-9 or after cfg.max_iters accepted moves.
// Returns the final structure refit on all rows (shared sigma). Requires
// n >= 3 rows.
WeightedDag hill_climb(const Eigen::MatrixXd& rows, const LearnerConfig& cfg);

// Orders nodes by increasing sample variance (ties by index), regresses each
// node on all predecessors, zeroes coefficients with |beta| <= cfg.threshold.
// Output is acyclic by construction; shared sigma comes from the thresholded
// residuals. Requires n >= 3 rows.
WeightedDag order_threshold(const Eigen::MatrixXd& rows, const LearnerConfig& cfg);

WeightedDag learn(const Eigen::MatrixXd& rows, const LearnerConfig& cfg);

// Refits a candidate structure on `rows` (see refit); rejects cyclic
// candidates with a CycleError naming one cycle. Any supplied coefficients
// are discarded -- the refit values replace them.
WeightedDag refit_candidate(const Eigen::MatrixXd& rows, const EdgeSet& structure,
                            bool hetero);

}  // namespace daggr
