#include "daggr/sem.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <cmath>
#include <string>

#include "daggr/errors.hpp"

namespace daggr {

namespace {

// log |det(M)| from the U factor of a partial-pivot LU; throws on a
// singular or non-finite factorization.
double log_abs_det(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu, const char* what) {
    double out = 0.0;
    const auto diag = lu.matrixLU().diagonal();
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
        const double d = std::abs(diag(i));
        if (d == 0.0 || !std::isfinite(d)) {
            throw NumericError(std::string(what) + " is singular");
        }
        out += std::log(d);
    }
    return out;
}

}  // namespace

Eigen::VectorXd noise_variances(const WeightedDag& dag) {
    const int p = dag.nodes();
    Eigen::VectorXd var(p);
    if (dag.node_sigmas) {
        if (dag.node_sigmas->size() != p) {
            throw DimensionError("node_sigmas has length " +
                                 std::to_string(dag.node_sigmas->size()) +
                                 ", expected " + std::to_string(p));
        }
        var = dag.node_sigmas->array().square();
    } else if (dag.sigma) {
        var.setConstant(*dag.sigma * *dag.sigma);
    } else {
        var.setOnes();
    }
    for (int j = 0; j < p; ++j) {
        if (!(var(j) > 0.0) || !std::isfinite(var(j))) {
            throw DomainError("noise variance of node " + std::to_string(j) +
                              " must be positive and finite");
        }
    }
    return var;
}

SplitPlan make_split(int n, Rng& rng) {
    if (n < 2) {
        throw DomainError("half-split needs at least 2 rows, got " + std::to_string(n));
    }
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) {
        idx[i] = i;
    }
    rng.shuffle(idx);
    const int n_train = n / 2;
    SplitPlan plan;
    plan.train_idx.assign(idx.begin(), idx.begin() + n_train);
    plan.valid_idx.assign(idx.begin() + n_train, idx.end());
    return plan;
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& x, const std::vector<int>& idx) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), x.cols());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        if (idx[r] < 0 || idx[r] >= x.rows()) {
            throw DimensionError("row index " + std::to_string(idx[r]) +
                                 " out of range for " + std::to_string(x.rows()) +
                                 " rows");
        }
        out.row(static_cast<Eigen::Index>(r)) = x.row(idx[r]);
    }
    return out;
}

Dataset simulate(const WeightedDag& truth, int n, std::uint64_t rng_seed) {
    if (n < 1) {
        throw DomainError("sample size must be positive, got " + std::to_string(n));
    }
    if (auto cycle = find_cycle(truth.adj)) {
        const std::string msg =
            "cannot simulate from a cyclic model: " + format_cycle(*cycle);
        throw CycleError(msg, std::move(*cycle));
    }
    const int p = truth.nodes();
    const Eigen::VectorXd sd = noise_variances(truth).array().sqrt();

    Rng rng(rng_seed);
    Eigen::MatrixXd noise(n, p);
    for (int r = 0; r < n; ++r) {
        for (int j = 0; j < p; ++j) {
            noise(r, j) = rng.normal() * sd(j);
        }
    }

    // X (I - U) = E  =>  (I - U)^T X^T = E^T.
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(p, p) - truth.adj;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m.transpose());
    log_abs_det(lu, "(I - U)");
    Eigen::MatrixXd x = lu.solve(noise.transpose()).transpose();
    if (!x.allFinite()) {
        throw NumericError("simulation produced non-finite values");
    }

    Dataset data;
    data.x = std::move(x);
    data.seed = rng_seed;
    data.truth = truth;
    return data;
}

WeightedDag refit(const Eigen::MatrixXd& rows, const EdgeSet& structure, bool hetero) {
    const int n = static_cast<int>(rows.rows());
    const int p = structure.p;
    if (static_cast<int>(rows.cols()) != p) {
        throw DimensionError("data has " + std::to_string(rows.cols()) +
                             " columns, structure expects " + std::to_string(p));
    }
    if (n < 2) {
        throw DomainError("refit needs at least 2 rows, got " + std::to_string(n));
    }

    std::vector<std::vector<int>> parents(p);
    for (const auto& [i, j] : structure.edges) {
        parents[j].push_back(i);
    }

    WeightedDag out;
    out.adj = Eigen::MatrixXd::Zero(p, p);
    Eigen::VectorXd rss(p);

    for (int j = 0; j < p; ++j) {
        double rss_j = 0.0;
        const Eigen::VectorXd beta = child_ols(rows, parents[j], j, &rss_j);
        for (std::size_t t = 0; t < parents[j].size(); ++t) {
            out.adj(parents[j][t], j) = beta(static_cast<Eigen::Index>(t));
        }
        rss(j) = rss_j;
    }

    if (hetero) {
        Eigen::VectorXd sig(p);
        for (int j = 0; j < p; ++j) {
            sig(j) = std::sqrt(std::max(rss(j) / n, kSigma2Floor));
        }
        out.node_sigmas = std::move(sig);
    } else {
        out.sigma = std::sqrt(std::max(rss.sum() / (static_cast<double>(n) * p),
                                       kSigma2Floor));
    }
    return out;
}

Eigen::VectorXd child_ols(const Eigen::MatrixXd& rows, const std::vector<int>& parents,
                          int j, double* rss) {
    const int n = static_cast<int>(rows.rows());
    if (j < 0 || j >= rows.cols()) {
        throw DimensionError("child index " + std::to_string(j) + " out of range");
    }
    const Eigen::VectorXd y = rows.col(j);
    if (parents.empty()) {
        if (rss != nullptr) {
            *rss = y.squaredNorm();
        }
        return Eigen::VectorXd(0);
    }
    const int d = static_cast<int>(parents.size());
    Eigen::MatrixXd xp(n, d);
    for (int t = 0; t < d; ++t) {
        if (parents[t] < 0 || parents[t] >= rows.cols()) {
            throw DimensionError("parent index " + std::to_string(parents[t]) +
                                 " out of range");
        }
        xp.col(t) = rows.col(parents[t]);
    }
    const Eigen::MatrixXd gram = xp.transpose() * xp;
    const Eigen::VectorXd xty = xp.transpose() * y;

    Eigen::VectorXd beta;
    bool ok = false;
    if (d < n) {
        Eigen::LLT<Eigen::MatrixXd> llt(gram);
        if (llt.info() == Eigen::Success) {
            beta = llt.solve(xty);
            ok = beta.allFinite();
        }
    }
    if (!ok) {
        // Rank-deficient normal equations: ridge keeps the solve defined.
        Eigen::MatrixXd ridged = gram;
        ridged.diagonal().array() += kRidge;
        beta = ridged.ldlt().solve(xty);
        if (!beta.allFinite()) {
            throw NumericError("least-squares fit failed for node " + std::to_string(j));
        }
    }
    if (rss != nullptr) {
        *rss = (y - xp * beta).squaredNorm();
    }
    return beta;
}

double loglik(const Eigen::MatrixXd& rows, const WeightedDag& dag) {
    const int p = dag.nodes();
    if (static_cast<int>(rows.cols()) != p) {
        throw DimensionError("data has " + std::to_string(rows.cols()) +
                             " columns, model expects " + std::to_string(p));
    }
    if (!dag.sigma || !(*dag.sigma > 0.0)) {
        throw DomainError("loglik requires a positive shared sigma");
    }
    const double s2 = *dag.sigma * *dag.sigma;
    const double rss = (rows - rows * dag.adj).squaredNorm();
    const double n = static_cast<double>(rows.rows());
    return -(rss / (2.0 * s2) + 0.5 * n * p * std::log(s2));
}

double hetero_score(const Eigen::MatrixXd& rows, const WeightedDag& dag, double gamma) {
    const int p = dag.nodes();
    if (static_cast<int>(rows.cols()) != p) {
        throw DimensionError("data has " + std::to_string(rows.cols()) +
                             " columns, model expects " + std::to_string(p));
    }
    if (!dag.node_sigmas) {
        throw DomainError("per-node score requires node_sigmas");
    }
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw DomainError("gamma must lie in [0, 1], got " + std::to_string(gamma));
    }
    const Eigen::VectorXd var = noise_variances(dag);
    const Eigen::MatrixXd resid = rows - rows * dag.adj;
    const double n = static_cast<double>(rows.rows());
    double score = 0.0;
    for (int j = 0; j < p; ++j) {
        score += resid.col(j).squaredNorm() / (2.0 * var(j)) +
                 gamma * 0.5 * n * std::log(var(j));
    }
    return score;
}

Eigen::MatrixXd implied_covariance(const WeightedDag& dag) {
    const int p = dag.nodes();
    const Eigen::VectorXd var = noise_variances(dag);
    const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(p, p) - dag.adj;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    log_abs_det(lu, "(I - U)");
    // (I - U)^{-T} D (I - U)^{-1}
    const Eigen::MatrixXd inv = lu.inverse();
    return inv.transpose() * var.asDiagonal() * inv;
}

double kl_divergence(const WeightedDag& truth, const WeightedDag& est) {
    const int p = truth.nodes();
    if (est.nodes() != p) {
        throw DimensionError("models disagree on node count: " + std::to_string(p) +
                             " vs " + std::to_string(est.nodes()));
    }
    const Eigen::VectorXd dt = noise_variances(truth);
    const Eigen::VectorXd de = noise_variances(est);

    const Eigen::MatrixXd mt = Eigen::MatrixXd::Identity(p, p) - truth.adj;
    const Eigen::MatrixXd me = Eigen::MatrixXd::Identity(p, p) - est.adj;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_t(mt);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_e(me);
    const double logdet_t = log_abs_det(lu_t, "truth (I - U)");
    const double logdet_e = log_abs_det(lu_e, "estimate (I - U)");

    // B = (I - U_t)^{-1} (I - U_e); tr(Sigma_e^{-1} Sigma_t) via B.
    const Eigen::MatrixXd b = lu_t.solve(me);
    double trace = 0.0;
    for (int j = 0; j < p; ++j) {
        trace += (b.col(j).array().square() * dt.array()).sum() / de(j);
    }

    const double logdet_sigma_t = dt.array().log().sum() - 2.0 * logdet_t;
    const double logdet_sigma_e = de.array().log().sum() - 2.0 * logdet_e;
    const double kl = 0.5 * (trace - p + logdet_sigma_e - logdet_sigma_t);
    if (!std::isfinite(kl)) {
        throw NumericError("divergence is not finite");
    }
    return kl;
}

}  // namespace daggr
