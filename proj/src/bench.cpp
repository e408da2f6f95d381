#include "daggr/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "daggr/errors.hpp"
#include "daggr/metrics.hpp"
#include "daggr/prune.hpp"
#include "daggr/sem.hpp"

namespace daggr {

const char* to_string(StructureKind kind) {
    switch (kind) {
        case StructureKind::kRandom: return "random";
        case StructureKind::kHub: return "hub";
        case StructureKind::kChain: return "chain";
    }
    return "?";
}

const char* to_string(SignalStrength signal) {
    return signal == SignalStrength::kStrong ? "strong" : "weak";
}

WeightedDag gen_structure(const SimSpec& spec, Rng& rng) {
    if (spec.p < 2) {
        throw DomainError("structure needs at least 2 nodes");
    }
    const int p = spec.p;
    double edge_prob = spec.edge_prob;
    if (spec.structure == StructureKind::kRandom) {
        if (edge_prob == 0.0) {
            edge_prob = 1.0 / p;
        }
        if (!(edge_prob > 0.0 && edge_prob <= 1.0)) {
            throw DomainError("edge probability must lie in (0, 1]");
        }
    }

    std::vector<int> perm(p);
    for (int i = 0; i < p; ++i) {
        perm[i] = i;
    }
    rng.shuffle(perm);

    // Edges are generated forward along the permuted order, so the result is
    // acyclic by construction.
    std::vector<Edge> edges;
    switch (spec.structure) {
        case StructureKind::kChain:
            for (int t = 0; t + 1 < p; ++t) {
                edges.push_back({perm[t], perm[t + 1]});
            }
            break;
        case StructureKind::kHub:
            for (int t = 1; t < p; ++t) {
                edges.push_back({perm[0], perm[t]});
            }
            break;
        case StructureKind::kRandom:
            for (int a = 0; a < p; ++a) {
                for (int b = a + 1; b < p; ++b) {
                    if (rng.uniform() < edge_prob) {
                        edges.push_back({perm[a], perm[b]});
                    }
                }
            }
            break;
    }

    const double lo = spec.signal == SignalStrength::kStrong ? 0.5 : 0.1;
    const double hi = spec.signal == SignalStrength::kStrong ? 1.5 : 0.5;
    WeightedDag truth;
    truth.adj = Eigen::MatrixXd::Zero(p, p);
    for (const auto& [i, j] : edges) {
        const double magnitude = rng.uniform(lo, hi);
        const bool negative = rng.uniform() < 0.5;
        truth.adj(i, j) = negative ? -magnitude : magnitude;
    }
    truth.sigma = 1.0;
    return truth;
}

std::vector<MethodSpec> default_methods() {
    std::vector<MethodSpec> methods;
    for (int budget : {30, 40, 500}) {
        MethodSpec m;
        m.name = "hill_climb[" + std::to_string(budget) + "]";
        m.config.kind = LearnerKind::kHillClimb;
        m.config.max_iters = budget;
        methods.push_back(std::move(m));
    }
    for (double cut : {0.1, 0.3}) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "order_threshold[%g]", cut);
        MethodSpec m;
        m.name = buf;
        m.config.kind = LearnerKind::kOrderThreshold;
        m.config.threshold = cut;
        methods.push_back(std::move(m));
    }
    return methods;
}

namespace {

struct RowSample {
    bool has_weight = false;
    double weight = 0.0;
    double frob_val = 0.0;
    double fnr_val = 0.0;
    double mcc_val = 0.0;
    double shd_val = 0.0;
    double fpr_val = 0.0;
    double fdr_val = 0.0;
    double kl_val = 0.0;
};

RowSample score_row(const WeightedDag& truth, const EdgeSet& truth_edges,
                    const Eigen::MatrixXd& est_adj, const WeightedDag& est_model) {
    RowSample out;
    const EdgeSet est_edges = edge_set(est_adj);
    const ConfusionCounts c = confusion(est_edges, truth_edges);
    out.frob_val = frob_sq(est_adj, truth.adj);
    out.fnr_val = fnr(c);
    out.mcc_val = mcc(c);
    out.shd_val = static_cast<double>(shd(est_edges, truth_edges));
    out.fpr_val = fpr(c);
    out.fdr_val = fdr(c);
    out.kl_val = kl_divergence(truth, est_model);
    return out;
}

// Shared-sigma wrapper for an arbitrary (possibly cyclic) adjacency, scaled
// by its structural residuals on the replication's data.
WeightedDag residual_model(const Eigen::MatrixXd& rows, const Eigen::MatrixXd& adj) {
    WeightedDag model;
    model.adj = adj;
    model.sigma = std::sqrt(std::max(pred_mse(rows, adj), kSigma2Floor));
    return model;
}

std::vector<RowSample> run_replication(const SimSpec& spec,
                                       const std::vector<MethodSpec>& methods,
                                       const AggregationConfig& agg,
                                       const std::vector<double>& prune_thresholds,
                                       int replication) {
    const std::uint64_t rep_seed =
        derive_seed(spec.rng_seed, "replication", static_cast<std::uint64_t>(replication));

    Rng structure_rng(derive_seed(rep_seed, "structure"));
    const WeightedDag truth = gen_structure(spec, structure_rng);
    const EdgeSet truth_edges = edge_set(truth.adj);
    const Dataset data = simulate(truth, spec.n, derive_seed(rep_seed, "data"));

    CandidateEnsemble cands;
    for (std::size_t m = 0; m < methods.size(); ++m) {
        Candidate cand;
        cand.name = methods[m].name;
        if (methods[m].kind == MethodSpec::Kind::kTruth) {
            cand.structure = truth_edges;
        } else {
            LearnerConfig cfg = methods[m].config;
            cfg.rng_seed = derive_seed(rep_seed, "learner", static_cast<std::uint64_t>(m));
            cand.structure = edge_set(learn(data.x, cfg).adj);
        }
        cands.push_back(std::move(cand));
    }

    AggregationConfig agg_rep = agg;
    agg_rep.rng_seed = derive_seed(rep_seed, "aggregate");
    const Eigen::VectorXd w = daggr_weights(data, cands, agg_rep);
    const Eigen::MatrixXd s = importance(cands, w);
    const std::vector<WeightedDag> fits = refit_ensemble(data.x, cands, agg_rep.hetero);
    const Eigen::MatrixXd u_raw = aggregate_matrix(fits, w);

    std::vector<RowSample> rows;
    rows.reserve(methods.size() + 1 + prune_thresholds.size());
    for (std::size_t m = 0; m < methods.size(); ++m) {
        RowSample sample = score_row(truth, truth_edges, fits[m].adj, fits[m]);
        sample.has_weight = true;
        sample.weight = w(static_cast<Eigen::Index>(m));
        rows.push_back(sample);
    }
    rows.push_back(score_row(truth, truth_edges, u_raw, residual_model(data.x, u_raw)));
    for (double cut : prune_thresholds) {
        const WeightedDag pruned = prune(u_raw, s, cut);
        rows.push_back(score_row(truth, truth_edges, pruned.adj,
                                 residual_model(data.x, pruned.adj)));
    }
    return rows;
}

MetricSummary summarize(const std::vector<double>& values) {
    const int r = static_cast<int>(values.size());
    MetricSummary out;
    for (double v : values) {
        out.mean += v;
    }
    out.mean /= r;
    if (r > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - out.mean) * (v - out.mean);
        }
        out.se = std::sqrt(ss / (r - 1)) / std::sqrt(static_cast<double>(r));
    }
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    out.median = r % 2 == 1 ? sorted[r / 2]
                            : 0.5 * (sorted[r / 2 - 1] + sorted[r / 2]);
    return out;
}

}  // namespace

BenchReport run_bench(const SimSpec& spec, const std::vector<MethodSpec>& methods,
                      const AggregationConfig& agg, std::vector<double> prune_thresholds,
                      int jobs) {
    if (spec.replications < 1) {
        throw DomainError("need at least one replication");
    }
    if (methods.empty()) {
        throw DomainError("no methods to benchmark");
    }
    for (double cut : prune_thresholds) {
        if (!(cut >= 0.0 && cut <= 1.0)) {
            throw DomainError("prune threshold must lie in [0, 1]");
        }
    }
    const int reps = spec.replications;
    const int workers = std::max(1, std::min(jobs, reps));

    // Every replication derives its own seed from its index, so scheduling
    // cannot change the numbers; results land in a slot per replication and
    // are reduced in index order.
    std::vector<std::vector<RowSample>> results(reps);
    std::vector<std::exception_ptr> failures(reps);
    std::atomic<int> next{0};
    auto work = [&]() {
        for (int r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) {
            try {
                results[r] = run_replication(spec, methods, agg, prune_thresholds, r);
            } catch (...) {
                failures[r] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back(work);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    for (int r = 0; r < reps; ++r) {
        if (failures[r]) {
            try {
                std::rethrow_exception(failures[r]);
            } catch (const std::exception& e) {
                throw Error("replication " + std::to_string(r) + " (seed " +
                            std::to_string(derive_seed(spec.rng_seed, "replication",
                                                       static_cast<std::uint64_t>(r))) +
                            ") failed: " + e.what());
            }
        }
    }

    BenchReport report;
    report.sim = spec;
    report.agg = agg;
    report.prune_thresholds = prune_thresholds;

    std::vector<std::string> row_names;
    for (const auto& m : methods) {
        report.methods.push_back(m.name);
        row_names.push_back(m.name);
    }
    row_names.push_back("daggr_raw");
    for (double cut : prune_thresholds) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "daggr_pruned(%g)", cut);
        row_names.push_back(buf);
    }

    const std::size_t n_rows = row_names.size();
    for (std::size_t row = 0; row < n_rows; ++row) {
        BenchRow out;
        out.method = row_names[row];
        auto collect = [&](auto get) {
            std::vector<double> values(reps);
            for (int r = 0; r < reps; ++r) {
                values[r] = get(results[r][row]);
            }
            return summarize(values);
        };
        if (results[0][row].has_weight) {
            out.weight = collect([](const RowSample& s) { return s.weight; });
        }
        out.frob_sq = collect([](const RowSample& s) { return s.frob_val; });
        out.fnr = collect([](const RowSample& s) { return s.fnr_val; });
        out.mcc = collect([](const RowSample& s) { return s.mcc_val; });
        out.shd = collect([](const RowSample& s) { return s.shd_val; });
        out.fpr = collect([](const RowSample& s) { return s.fpr_val; });
        out.fdr = collect([](const RowSample& s) { return s.fdr_val; });
        out.kl = collect([](const RowSample& s) { return s.kl_val; });
        report.rows.push_back(std::move(out));
    }
    return report;
}

}  // namespace daggr
