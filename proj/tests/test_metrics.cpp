#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <set>
#include <utility>

#include "daggr/errors.hpp"
#include "daggr/graph.hpp"
#include "daggr/metrics.hpp"
#include "daggr/rng.hpp"
#include "helpers.hpp"

using namespace daggr;

namespace {

EdgeSet from_pairs(int p, const std::set<std::pair<int, int>>& pairs) {
    EdgeSet out(p);
    for (const auto& [i, j] : pairs) {
        out.insert(i, j);
    }
    return out;
}

// Oracle: walk every ordered cell (i, j), i != j, and tally directly.
ConfusionCounts confusion_oracle(const EdgeSet& est, const EdgeSet& truth) {
    ConfusionCounts c{0, 0, 0, 0};
    for (int i = 0; i < est.p; ++i) {
        for (int j = 0; j < est.p; ++j) {
            if (i == j) {
                continue;
            }
            const bool in_est = est.contains(i, j);
            const bool in_truth = truth.contains(i, j);
            if (in_est && in_truth) {
                ++c.tp;
            } else if (in_est && !in_truth) {
                ++c.fp;
            } else if (!in_est && in_truth) {
                ++c.fn;
            } else {
                ++c.tn;
            }
        }
    }
    return c;
}

// Oracle hamming distance: per unordered pair, count cell mismatches, except
// that a pure reversal (single edges in opposite directions) is one move.
int shd_oracle(const EdgeSet& est, const EdgeSet& truth) {
    int total = 0;
    for (int i = 0; i < est.p; ++i) {
        for (int j = i + 1; j < est.p; ++j) {
            const int e_fwd = est.contains(i, j) ? 1 : 0;
            const int e_bwd = est.contains(j, i) ? 1 : 0;
            const int t_fwd = truth.contains(i, j) ? 1 : 0;
            const int t_bwd = truth.contains(j, i) ? 1 : 0;
            const int mism = std::abs(e_fwd - t_fwd) + std::abs(e_bwd - t_bwd);
            if (mism == 2 && e_fwd + e_bwd == 1 && t_fwd + t_bwd == 1) {
                total += 1;  // pure reversal counts once
            } else {
                total += mism;
            }
        }
    }
    return total;
}

EdgeSet random_edges(Rng& rng, int p, double density) {
    EdgeSet out(p);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if (i != j && rng.uniform() < density) {
                out.insert(i, j);
            }
        }
    }
    return out;
}

}  // namespace

TEST_CASE("confusion fixed counts and rates") {
    const EdgeSet est = from_pairs(4, {{0, 1}, {1, 2}, {3, 0}});
    const EdgeSet truth = from_pairs(4, {{0, 1}, {2, 1}, {3, 0}, {3, 2}});
    const ConfusionCounts c = confusion(est, truth);
    CHECK(c.tp == 2);
    CHECK(c.fp == 1);
    CHECK(c.fn == 2);
    CHECK(c.tn == 7);  // 12 ordered cells in total
    CHECK(c.tp + c.fp + c.fn + c.tn == 12);

    CHECK(fnr(c) == doctest::Approx(2.0 / 4.0));
    CHECK(fpr(c) == doctest::Approx(1.0 / 8.0));
    CHECK(fdr(c) == doctest::Approx(1.0 / 3.0));
    CHECK(f1(c) == doctest::Approx(2.0 * 2.0 / (2.0 * 2.0 + 1.0 + 2.0)));
}

TEST_CASE("confusion agrees with the cell-walk oracle") {
    Rng rng(300);
    for (int trial = 0; trial < 1000; ++trial) {
        const int p = 2 + static_cast<int>(rng.below(7));
        const EdgeSet est = random_edges(rng, p, rng.uniform(0.0, 0.7));
        const EdgeSet truth = random_edges(rng, p, rng.uniform(0.0, 0.7));
        const ConfusionCounts got = confusion(est, truth);
        const ConfusionCounts want = confusion_oracle(est, truth);
        CAPTURE(trial);
        CHECK(got.tp == want.tp);
        CHECK(got.fp == want.fp);
        CHECK(got.fn == want.fn);
        CHECK(got.tn == want.tn);
        CHECK(got.tp + got.fp + got.fn + got.tn ==
              static_cast<std::int64_t>(p) * (p - 1));
    }
}

TEST_CASE("zero denominators resolve to zero") {
    // Empty est vs empty truth: every rate is 0/0.
    const ConfusionCounts c = confusion(EdgeSet(3), EdgeSet(3));
    CHECK(c.tn == 6);
    CHECK(fnr(c) == 0.0);
    CHECK(fdr(c) == 0.0);
    CHECK(f1(c) == 0.0);
    CHECK(mcc(c) == 0.0);

    // Complete truth: no true negatives to miss.
    EdgeSet full(2);
    full.insert(0, 1);
    full.insert(1, 0);
    const ConfusionCounts d = confusion(full, full);
    CHECK(fpr(d) == 0.0);
    CHECK(mcc(d) == 0.0);  // tn + fp and tn + fn are both zero
}

TEST_CASE("perfect recovery scores perfectly") {
    Rng rng(301);
    const EdgeSet truth = random_edges(rng, 6, 0.4);
    const ConfusionCounts c = confusion(truth, truth);
    CHECK(c.fp == 0);
    CHECK(c.fn == 0);
    CHECK(fnr(c) == 0.0);
    CHECK(fpr(c) == 0.0);
    CHECK(shd(truth, truth) == 0);
    if (truth.size() > 0 && truth.size() < 30) {
        CHECK(mcc(c) == doctest::Approx(1.0));
        CHECK(f1(c) == doctest::Approx(1.0));
    }
}

TEST_CASE("precision-recall summary from fixed counts") {
    // tp=9, fp=7, fn=8: F1 = 18/33, independent of the true-negative count.
    ConfusionCounts c{9, 7, 8, 86};
    CHECK(f1(c) == doctest::Approx(18.0 / 33.0).epsilon(1e-12));
    CHECK(f1(c) == doctest::Approx(0.55).epsilon(0.01));
    CHECK(mcc(c) == doctest::Approx(0.4656).epsilon(1e-3));

    // Same tp/fp/fn with a different tn moves mcc but not f1.
    ConfusionCounts wide{9, 7, 8, 576};
    CHECK(f1(wide) == doctest::Approx(18.0 / 33.0).epsilon(1e-12));
    CHECK(mcc(wide) > mcc(c));
}

TEST_CASE("mcc and f1 stay within their ranges") {
    Rng rng(302);
    for (int trial = 0; trial < 500; ++trial) {
        const int p = 2 + static_cast<int>(rng.below(6));
        const ConfusionCounts c = confusion(random_edges(rng, p, rng.uniform(0.0, 0.9)),
                                            random_edges(rng, p, rng.uniform(0.0, 0.9)));
        CHECK(mcc(c) >= -1.0 - 1e-12);
        CHECK(mcc(c) <= 1.0 + 1e-12);
        CHECK(f1(c) >= 0.0);
        CHECK(f1(c) <= 1.0 + 1e-12);
    }
}

TEST_CASE("shd fixed cases") {
    // One reversal plus one extra edge: distance 2.
    const EdgeSet est = from_pairs(5, {{1, 2}, {3, 4}});
    const EdgeSet truth = from_pairs(5, {{2, 1}});
    CHECK(shd(est, truth) == 2);

    // Pure reversal counts once.
    CHECK(shd(from_pairs(3, {{0, 1}}), from_pairs(3, {{1, 0}})) == 1);

    // Addition and deletion count once each.
    CHECK(shd(from_pairs(3, {{0, 1}}), EdgeSet(3)) == 1);
    CHECK(shd(EdgeSet(3), from_pairs(3, {{0, 1}})) == 1);

    // Both directions in est vs one in truth: one spurious edge remains.
    CHECK(shd(from_pairs(3, {{0, 1}, {1, 0}}), from_pairs(3, {{0, 1}})) == 1);

    // Both directions vs none: two moves.
    CHECK(shd(from_pairs(3, {{0, 1}, {1, 0}}), EdgeSet(3)) == 2);

    CHECK_THROWS_AS(shd(EdgeSet(3), EdgeSet(4)), DimensionError);
}

TEST_CASE("shd agrees with the pairwise oracle") {
    Rng rng(303);
    for (int trial = 0; trial < 1000; ++trial) {
        const int p = 2 + static_cast<int>(rng.below(7));
        const EdgeSet est = random_edges(rng, p, rng.uniform(0.0, 0.8));
        const EdgeSet truth = random_edges(rng, p, rng.uniform(0.0, 0.8));
        CAPTURE(trial);
        CHECK(shd(est, truth) == shd_oracle(est, truth));
        CHECK(shd(est, truth) == shd(truth, est));
        CHECK(shd(est, est) == 0);
    }
}

TEST_CASE("frob_sq measures coefficient error") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2, 2);
    a(0, 1) = 1.5;
    b(0, 1) = 1.0;
    b(1, 0) = -2.0;
    CHECK(frob_sq(a, b) == doctest::Approx(0.25 + 4.0));
    CHECK(frob_sq(a, a) == 0.0);
    CHECK_THROWS_AS(frob_sq(a, Eigen::MatrixXd::Zero(3, 3)), DimensionError);
}

TEST_CASE("pred_mse hand-computed value") {
    Eigen::MatrixXd x(1, 2);
    x << 1.0, 2.0;
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(2, 2);
    u(0, 1) = 0.5;
    // residual = (1, 2) - (1, 2) U = (1, 1.5); mse = (1 + 2.25) / 2.
    CHECK(pred_mse(x, u) == doctest::Approx(1.625));
    CHECK_THROWS_AS(pred_mse(x, Eigen::MatrixXd::Zero(3, 3)), DimensionError);
}

TEST_CASE("pred_mse is zero for a perfect noiseless model") {
    Rng rng(304);
    const Eigen::MatrixXd u = test::random_dag(rng, 4, 0.6);
    WeightedDag truth;
    truth.adj = u;
    truth.sigma = 1.0;
    // Build x = e (I - U)^{-1} exactly, then the residual by construction is e.
    Eigen::MatrixXd e = test::random_matrix(rng, 10, 4);
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4) - u;
    Eigen::MatrixXd x = m.transpose().partialPivLu().solve(e.transpose()).transpose();
    CHECK(pred_mse(x, u) == doctest::Approx(e.squaredNorm() / 40.0).epsilon(1e-10));
}
