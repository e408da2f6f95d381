#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <vector>

#include "daggr/errors.hpp"
#include "daggr/learners.hpp"
#include "daggr/metrics.hpp"
#include "daggr/sem.hpp"
#include "helpers.hpp"

using namespace daggr;

namespace {

WeightedDag chain_truth(int p, double coef) {
    WeightedDag truth;
    truth.adj = Eigen::MatrixXd::Zero(p, p);
    for (int t = 0; t + 1 < p; ++t) {
        truth.adj(t, t + 1) = coef;
    }
    truth.sigma = 1.0;
    return truth;
}

LearnerConfig hc_config(int max_iters = 500) {
    LearnerConfig cfg;
    cfg.kind = LearnerKind::kHillClimb;
    cfg.max_iters = max_iters;
    return cfg;
}

LearnerConfig ot_config(double threshold) {
    LearnerConfig cfg;
    cfg.kind = LearnerKind::kOrderThreshold;
    cfg.threshold = threshold;
    return cfg;
}

}  // namespace

TEST_CASE("hill climb recovers a strong chain") {
    std::vector<int> dists;
    const WeightedDag truth = chain_truth(5, 0.9);
    const EdgeSet truth_edges = edge_set(truth.adj);
    for (int seed = 0; seed < 20; ++seed) {
        const Dataset data = simulate(truth, 500, derive_seed(900, "data", seed));
        const WeightedDag got = learn(data.x, hc_config());
        dists.push_back(shd(edge_set(got.adj), truth_edges));
    }
    std::sort(dists.begin(), dists.end());
    CHECK(dists[dists.size() / 2] <= 1);
}

TEST_CASE("hill climb stays near empty under independence") {
    std::vector<int> extra;
    WeightedDag truth;
    truth.adj = Eigen::MatrixXd::Zero(10, 10);
    truth.sigma = 1.0;
    for (int seed = 0; seed < 20; ++seed) {
        const Dataset data = simulate(truth, 500, derive_seed(901, "data", seed));
        const WeightedDag got = learn(data.x, hc_config());
        extra.push_back(static_cast<int>(edge_set(got.adj).size()));
    }
    std::sort(extra.begin(), extra.end());
    CHECK(extra[extra.size() / 2] <= 1);
}

TEST_CASE("hill climb raises the fit score monotonically in its budget") {
    Rng rng(903);
    WeightedDag truth;
    truth.adj = test::random_dag(rng, 6, 0.4);
    truth.sigma = 1.0;
    const Dataset data = simulate(truth, 300, 42);
    double prev = bic_score(data.x, EdgeSet(6));
    for (int budget : {1, 2, 4, 8, 16, 64, 500}) {
        const WeightedDag got = learn(data.x, hc_config(budget));
        const double score = bic_score(data.x, edge_set(got.adj));
        CHECK(score >= prev - 1e-9);
        prev = score;
    }
}

TEST_CASE("hill climb is deterministic") {
    Rng rng(904);
    WeightedDag truth;
    truth.adj = test::random_dag(rng, 7, 0.35);
    truth.sigma = 1.0;
    const Dataset data = simulate(truth, 200, 7);
    const WeightedDag a = learn(data.x, hc_config());
    const WeightedDag b = learn(data.x, hc_config());
    CHECK(a.adj == b.adj);
    REQUIRE(a.sigma.has_value());
    REQUIRE(b.sigma.has_value());
    CHECK(*a.sigma == *b.sigma);
}

TEST_CASE("hill climb output is always acyclic with fitted coefficients") {
    Rng rng(905);
    for (int trial = 0; trial < 25; ++trial) {
        const int p = 3 + static_cast<int>(rng.below(5));
        WeightedDag truth;
        truth.adj = test::random_dag(rng, p, rng.uniform(0.2, 0.7));
        truth.sigma = 1.0;
        const Dataset data =
            simulate(truth, 60 + static_cast<int>(rng.below(100)),
                     derive_seed(905, "data", trial));
        const WeightedDag got = learn(data.x, hc_config());
        CAPTURE(trial);
        CHECK(is_acyclic(got.adj));
        // The search never ends below the empty-graph score.
        CHECK(bic_score(data.x, edge_set(got.adj)) >=
              bic_score(data.x, EdgeSet(p)) - 1e-9);
    }
}

TEST_CASE("bic_score penalizes pure complexity") {
    Rng rng(906);
    // Independent data: adding an edge buys negligible fit but pays log(n)/2.
    const Eigen::MatrixXd x = test::random_matrix(rng, 400, 3);
    EdgeSet one(3);
    one.insert(0, 1);
    CHECK(bic_score(x, EdgeSet(3)) > bic_score(x, one));
}

TEST_CASE("order_threshold extreme thresholds") {
    Rng rng(907);
    const Eigen::MatrixXd x = test::random_matrix(rng, 100, 6);

    // A huge threshold deletes everything.
    const WeightedDag empty = learn(x, ot_config(1e18));
    CHECK(edge_set(empty.adj).size() == 0);

    // Zero threshold keeps every predecessor edge: p(p-1)/2 of them.
    const WeightedDag full = learn(x, ot_config(0.0));
    CHECK(edge_set(full.adj).size() == 6 * 5 / 2);
    CHECK(is_acyclic(full.adj));
}

TEST_CASE("order_threshold recovers a variance-increasing chain") {
    // Coefficients above 1 force variances to grow along the chain, so the
    // variance ordering matches the true topological order.
    const WeightedDag truth = chain_truth(5, 1.2);
    const EdgeSet truth_edges = edge_set(truth.adj);
    std::vector<int> dists;
    for (int seed = 0; seed < 20; ++seed) {
        const Dataset data = simulate(truth, 600, derive_seed(908, "data", seed));
        const WeightedDag got = learn(data.x, ot_config(0.3));
        dists.push_back(shd(edge_set(got.adj), truth_edges));
    }
    std::sort(dists.begin(), dists.end());
    CHECK(dists[dists.size() / 2] <= 1);
}

TEST_CASE("order_threshold output is acyclic and deterministic") {
    Rng rng(909);
    for (int trial = 0; trial < 20; ++trial) {
        const int p = 3 + static_cast<int>(rng.below(5));
        const Eigen::MatrixXd x =
            test::random_matrix(rng, 50 + static_cast<int>(rng.below(80)), p);
        const WeightedDag a = learn(x, ot_config(0.15));
        const WeightedDag b = learn(x, ot_config(0.15));
        CHECK(is_acyclic(a.adj));
        CHECK(a.adj == b.adj);
    }
}

TEST_CASE("learner input validation") {
    Rng rng(910);
    const Eigen::MatrixXd x = test::random_matrix(rng, 30, 3);
    CHECK_THROWS_AS(learn(x, hc_config(0)), DomainError);
    CHECK_THROWS_AS(learn(x, ot_config(-0.5)), DomainError);
    CHECK_THROWS_AS(learn(Eigen::MatrixXd::Zero(1, 3), hc_config()), DomainError);
    Eigen::MatrixXd bad = x;
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(learn(bad, hc_config()), DomainError);
}

TEST_CASE("refit_candidate replaces coefficients and checks acyclicity") {
    Rng rng(911);
    WeightedDag truth;
    truth.adj = test::random_dag(rng, 4, 0.6);
    truth.sigma = 1.0;
    const Dataset data = simulate(truth, 300, 3);

    const EdgeSet structure = edge_set(truth.adj);
    const WeightedDag fit = refit_candidate(data.x, structure, false);
    CHECK(edge_set(fit.adj).edges == structure.edges);
    CHECK((fit.adj - truth.adj).cwiseAbs().maxCoeff() < 0.5);
    CHECK(fit.sigma.has_value());

    const WeightedDag het = refit_candidate(data.x, structure, true);
    CHECK(het.node_sigmas.has_value());

    EdgeSet cyclic(2);
    cyclic.insert(0, 1);
    cyclic.insert(1, 0);
    CHECK_THROWS_AS(refit_candidate(data.x.leftCols(2), cyclic, false), CycleError);
}
