#include "daggr/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "daggr/errors.hpp"
#include "daggr/rng.hpp"

namespace daggr {

namespace {

void require_candidates(const CandidateEnsemble& cands) {
    if (cands.empty()) {
        throw DomainError("candidate ensemble is empty");
    }
    const int p = cands.front().structure.p;
    for (const auto& c : cands) {
        if (c.structure.p != p) {
            throw DimensionError("candidate '" + c.name + "' has p = " +
                                 std::to_string(c.structure.p) + ", expected " +
                                 std::to_string(p));
        }
    }
}

std::vector<double> effective_prior(const std::vector<double>& prior, std::size_t k) {
    if (prior.empty()) {
        return std::vector<double>(k, 1.0 / static_cast<double>(k));
    }
    if (prior.size() != k) {
        throw DimensionError("prior has " + std::to_string(prior.size()) +
                             " entries for " + std::to_string(k) + " candidates");
    }
    double sum = 0.0;
    for (double pi : prior) {
        if (!(pi > 0.0) || !std::isfinite(pi)) {
            throw DomainError("prior entries must be strictly positive");
        }
        sum += pi;
    }
    if (std::abs(sum - 1.0) > 1e-8) {
        throw DomainError("prior must sum to 1, got " + std::to_string(sum));
    }
    return prior;
}

void validate_config(const AggregationConfig& cfg) {
    if (!(cfg.lambda > 0.0) || !std::isfinite(cfg.lambda)) {
        throw DomainError("lambda must be positive and finite");
    }
    if (!(cfg.gamma >= 0.0 && cfg.gamma <= 1.0)) {
        throw DomainError("gamma must lie in [0, 1]");
    }
    if (cfg.splits < 1) {
        throw DomainError("number of splits must be at least 1");
    }
}

}  // namespace

double validation_score(const Eigen::MatrixXd& valid_rows, const WeightedDag& fitted,
                        bool hetero, double gamma) {
    if (hetero) {
        return -hetero_score(valid_rows, fitted, gamma);
    }
    return loglik(valid_rows, fitted);
}

Eigen::VectorXd exp_weights(const std::vector<double>& scores,
                            const std::vector<double>& prior, double lambda) {
    const std::size_t k = scores.size();
    if (k == 0) {
        throw DomainError("no scores to weight");
    }
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw DomainError("lambda must be positive and finite");
    }
    const std::vector<double> pi = effective_prior(prior, k);

    // Log-space with max subtraction: a_k = log pi_k + lambda * score_k.
    Eigen::VectorXd log_w(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) {
        if (!std::isfinite(scores[i])) {
            throw NumericError("validation score " + std::to_string(i) +
                               " is not finite");
        }
        log_w(static_cast<Eigen::Index>(i)) = std::log(pi[i]) + lambda * scores[i];
    }
    const double top = log_w.maxCoeff();
    Eigen::VectorXd w = (log_w.array() - top).exp();
    w /= w.sum();
    return w;
}

Eigen::VectorXd split_weights(const Dataset& data, const CandidateEnsemble& cands,
                              const AggregationConfig& cfg, const SplitPlan& split) {
    require_candidates(cands);
    validate_config(cfg);
    if (split.train_idx.empty() || split.valid_idx.empty()) {
        throw DomainError("split must leave both halves non-empty");
    }
    const Eigen::MatrixXd train = take_rows(data.x, split.train_idx);
    const Eigen::MatrixXd valid = take_rows(data.x, split.valid_idx);

    std::vector<double> scores(cands.size());
    for (std::size_t k = 0; k < cands.size(); ++k) {
        const WeightedDag fitted = refit(train, cands[k].structure, cfg.hetero);
        scores[k] = validation_score(valid, fitted, cfg.hetero, cfg.gamma);
    }
    return exp_weights(scores, cfg.prior, cfg.lambda);
}

Eigen::VectorXd daggr_weights(const Dataset& data, const CandidateEnsemble& cands,
                              const AggregationConfig& cfg) {
    require_candidates(cands);
    validate_config(cfg);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cands.size()));
    for (int l = 0; l < cfg.splits; ++l) {
        Rng rng(derive_seed(cfg.rng_seed, "split", static_cast<std::uint64_t>(l)));
        const SplitPlan split = make_split(data.n(), rng);
        sum += split_weights(data, cands, cfg, split);
    }
    Eigen::VectorXd w = sum / static_cast<double>(cfg.splits);
    w /= w.sum();  // counter any accumulated rounding drift
    return w;
}

Eigen::MatrixXd importance(const std::vector<EdgeSet>& structures,
                           const Eigen::VectorXd& w) {
    if (structures.empty()) {
        throw DomainError("no structures to score");
    }
    if (w.size() != static_cast<Eigen::Index>(structures.size())) {
        throw DimensionError("got " + std::to_string(w.size()) + " weights for " +
                             std::to_string(structures.size()) + " structures");
    }
    const int p = structures.front().p;
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(p, p);
    for (std::size_t k = 0; k < structures.size(); ++k) {
        if (structures[k].p != p) {
            throw DimensionError("structure " + std::to_string(k) +
                                 " has mismatched node count");
        }
        for (const auto& [i, j] : structures[k].edges) {
            s(i, j) += w(static_cast<Eigen::Index>(k));
        }
    }
    // Guard against rounding pushing a fully supported edge past 1.
    s = s.cwiseMax(0.0).cwiseMin(1.0);
    return s;
}

Eigen::MatrixXd importance(const CandidateEnsemble& cands, const Eigen::VectorXd& w) {
    std::vector<EdgeSet> structures;
    structures.reserve(cands.size());
    for (const auto& c : cands) {
        structures.push_back(c.structure);
    }
    return importance(structures, w);
}

Eigen::MatrixXd aggregate_matrix(const std::vector<WeightedDag>& refits,
                                 const Eigen::VectorXd& w) {
    if (refits.empty()) {
        throw DomainError("no fitted models to average");
    }
    if (w.size() != static_cast<Eigen::Index>(refits.size())) {
        throw DimensionError("got " + std::to_string(w.size()) + " weights for " +
                             std::to_string(refits.size()) + " models");
    }
    const int p = refits.front().nodes();
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(p, p);
    for (std::size_t k = 0; k < refits.size(); ++k) {
        if (refits[k].nodes() != p) {
            throw DimensionError("fitted model " + std::to_string(k) +
                                 " has mismatched node count");
        }
        u += w(static_cast<Eigen::Index>(k)) * refits[k].adj;
    }
    return u;
}

WeightedDag threshold_aggregate(const std::vector<WeightedDag>& refits,
                                const Eigen::VectorXd& w, double c) {
    if (!(c >= 0.0 && c <= 1.0)) {
        throw DomainError("importance cutoff must lie in [0, 1]");
    }
    std::vector<EdgeSet> structures;
    structures.reserve(refits.size());
    for (const auto& r : refits) {
        structures.push_back(edge_set(r.adj));
    }
    const Eigen::MatrixXd s = importance(structures, w);
    Eigen::MatrixXd u = aggregate_matrix(refits, w);
    const int p = static_cast<int>(u.rows());
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if (!(s(i, j) > c)) {
                u(i, j) = 0.0;
            }
        }
    }
    // At or above 1 - 1/p the retained support is certifiably acyclic.
    if (c >= 1.0 - 1.0 / p && !is_acyclic(u)) {
        throw NumericError("acyclicity certificate violated at cutoff " +
                           std::to_string(c));
    }
    WeightedDag out;
    out.adj = std::move(u);
    return out;
}

std::vector<WeightedDag> refit_ensemble(const Eigen::MatrixXd& rows,
                                        const CandidateEnsemble& cands, bool hetero) {
    require_candidates(cands);
    std::vector<WeightedDag> fits;
    fits.reserve(cands.size());
    for (const auto& c : cands) {
        fits.push_back(refit(rows, c.structure, hetero));
    }
    return fits;
}

}  // namespace daggr
