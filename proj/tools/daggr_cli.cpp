// Command-line front end: simulate / learn / aggregate / prune / pdag /
// eval / bench. All randomness in a subcommand derives from its --seed.
// Toolkit failures print a JSON error object on stderr and exit 1; usage
// errors keep CLI11's human-readable message and exit code.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "daggr/aggregate.hpp"
#include "daggr/bench.hpp"
#include "daggr/errors.hpp"
#include "daggr/graph.hpp"
#include "daggr/io.hpp"
#include "daggr/learners.hpp"
#include "daggr/metrics.hpp"
#include "daggr/prune.hpp"
#include "daggr/sem.hpp"

namespace {

using daggr::AggregationConfig;
using daggr::CandidateEnsemble;
using daggr::LearnerConfig;
using daggr::SimSpec;
using daggr::WeightedDag;
using ordered_json = nlohmann::ordered_json;

daggr::StructureKind parse_structure(const std::string& name) {
    if (name == "chain") return daggr::StructureKind::kChain;
    if (name == "hub") return daggr::StructureKind::kHub;
    if (name == "random") return daggr::StructureKind::kRandom;
    throw daggr::DomainError("unknown structure '" + name +
                             "' (expected chain, hub, or random)");
}

daggr::SignalStrength parse_signal(const std::string& name) {
    if (name == "strong") return daggr::SignalStrength::kStrong;
    if (name == "weak") return daggr::SignalStrength::kWeak;
    throw daggr::DomainError("unknown signal '" + name +
                             "' (expected strong or weak)");
}

struct SimulateArgs {
    std::string structure = "chain";
    int p = 25;
    int n = 100;
    std::string signal = "strong";
    double edge_prob = 0.0;
    std::uint64_t seed = 0;
    std::string truth_in;
    std::string out;
    std::string truth_out;
};

void run_simulate(const SimulateArgs& args) {
    WeightedDag truth;
    if (!args.truth_in.empty()) {
        const auto doc = daggr::io::load_candidate(args.truth_in);
        if (!doc.candidate.coef) {
            throw daggr::DomainError("truth file '" + args.truth_in +
                                     "' carries no coefficients to simulate from");
        }
        truth.adj = *doc.candidate.coef;
        if (doc.node_sigmas) {
            truth.node_sigmas = doc.node_sigmas;
        } else {
            truth.sigma = 1.0;
        }
    } else {
        SimSpec spec;
        spec.structure = parse_structure(args.structure);
        spec.p = args.p;
        spec.n = args.n;
        spec.signal = parse_signal(args.signal);
        spec.edge_prob = args.edge_prob;
        daggr::Rng rng(daggr::derive_seed(args.seed, "structure"));
        truth = daggr::gen_structure(spec, rng);
    }
    const daggr::Dataset data =
        daggr::simulate(truth, args.n, daggr::derive_seed(args.seed, "data"));
    daggr::io::save_data_csv(args.out, data.x);
    if (!args.truth_out.empty()) {
        std::optional<Eigen::VectorXd> sigmas = truth.node_sigmas;
        if (!sigmas) {
            sigmas = daggr::noise_variances(truth).array().sqrt();
        }
        daggr::io::save_candidate(args.truth_out, "truth", truth.adj, sigmas);
    }
    std::cout << "wrote " << data.n() << " x " << data.p() << " data to " << args.out
              << "\n";
}

struct LearnArgs {
    std::string data;
    std::string method = "hill_climb";
    int max_iters = 500;
    double threshold = 0.1;
    std::uint64_t seed = 0;
    std::string name;
    std::string out;
    bool log_transform = false;
};

void run_learn(const LearnArgs& args) {
    Eigen::MatrixXd x = daggr::io::load_data_csv(args.data);
    if (args.log_transform) {
        daggr::io::log_transform(x);
    }
    LearnerConfig cfg;
    if (args.method == "hill_climb") {
        cfg.kind = daggr::LearnerKind::kHillClimb;
    } else if (args.method == "order_threshold") {
        cfg.kind = daggr::LearnerKind::kOrderThreshold;
    } else {
        throw daggr::DomainError("unknown method '" + args.method +
                                 "' (expected hill_climb or order_threshold)");
    }
    cfg.max_iters = args.max_iters;
    cfg.threshold = args.threshold;
    cfg.rng_seed = args.seed;
    const WeightedDag dag = daggr::learn(x, cfg);
    const std::string name =
        args.name.empty() ? args.method : args.name;
    daggr::io::save_candidate(args.out, name, dag.adj, std::nullopt);
    std::cout << "wrote candidate '" << name << "' with "
              << daggr::edge_set(dag.adj).size() << " edges to " << args.out << "\n";
}

struct AggregateArgs {
    std::string data;
    std::vector<std::string> candidates;
    double lambda = 1.0;
    double gamma = 1.0;
    int splits = 30;
    bool hetero = false;
    std::vector<double> prior;
    std::uint64_t seed = 0;
    std::string weights_out;
    std::string importance_out;
    std::string avg_out;
    bool log_transform = false;
};

void run_aggregate(const AggregateArgs& args) {
    Eigen::MatrixXd x = daggr::io::load_data_csv(args.data);
    if (args.log_transform) {
        daggr::io::log_transform(x);
    }
    CandidateEnsemble ens;
    std::vector<std::string> names;
    for (std::size_t k = 0; k < args.candidates.size(); ++k) {
        auto doc = daggr::io::load_candidate(args.candidates[k]);
        if (doc.candidate.name.empty()) {
            doc.candidate.name =
                std::filesystem::path(args.candidates[k]).stem().string();
        }
        names.push_back(doc.candidate.name);
        ens.push_back(std::move(doc.candidate));
    }

    AggregationConfig cfg;
    cfg.lambda = args.lambda;
    cfg.gamma = args.gamma;
    cfg.splits = args.splits;
    cfg.hetero = args.hetero;
    cfg.prior = args.prior;
    cfg.rng_seed = args.seed;

    daggr::Dataset data;
    data.x = std::move(x);
    const Eigen::VectorXd w = daggr::daggr_weights(data, ens, cfg);
    const Eigen::MatrixXd s = daggr::importance(ens, w);
    const auto fits = daggr::refit_ensemble(data.x, ens, cfg.hetero);
    const Eigen::MatrixXd u = daggr::aggregate_matrix(fits, w);

    if (!args.weights_out.empty()) {
        daggr::io::save_weights(args.weights_out, cfg, names, w);
    }
    if (!args.importance_out.empty()) {
        daggr::io::save_importance(args.importance_out, s);
    }
    if (!args.avg_out.empty()) {
        daggr::io::save_matrix_csv(args.avg_out, u);
    }
    if (args.weights_out.empty()) {
        ordered_json doc;
        doc["names"] = names;
        doc["weights"] = std::vector<double>(w.data(), w.data() + w.size());
        doc["raw_average_acyclic"] = daggr::is_acyclic(u);
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "raw average "
                  << (daggr::is_acyclic(u) ? "is acyclic" : "contains cycles") << "\n";
    }
}

struct PruneArgs {
    std::string u_path;
    std::string importance_path;
    double c = 0.0;
    std::string out;
};

void run_prune(const PruneArgs& args) {
    const Eigen::MatrixXd u = daggr::io::load_matrix_csv(args.u_path);
    const Eigen::MatrixXd s = daggr::io::load_importance(args.importance_path);
    const WeightedDag pruned = daggr::prune(u, s, args.c);
    daggr::io::save_matrix_csv(args.out, pruned.adj);
    std::cout << "kept " << daggr::edge_set(pruned.adj).size() << " edges at cutoff "
              << args.c << "\n";
}

struct PdagArgs {
    std::string importance_path;
    double tau = 0.0;
    double delta = 0.0;
    std::string out;
};

void run_pdag(const PdagArgs& args) {
    const Eigen::MatrixXd s = daggr::io::load_importance(args.importance_path);
    const daggr::Pdag pdag = daggr::classify_edges(s, args.tau, args.delta);
    if (!args.out.empty()) {
        daggr::io::save_pdag(args.out, pdag);
        std::cout << pdag.directed.size() << " directed, " << pdag.undirected.size()
                  << " undirected\n";
    } else {
        ordered_json doc;
        doc["p"] = pdag.directed.p;
        doc["directed"] = ordered_json::array();
        for (const auto& [i, j] : pdag.directed.edges) {
            doc["directed"].push_back({{"from", i}, {"to", j}});
        }
        doc["undirected"] = ordered_json::array();
        for (const auto& [a, b] : pdag.undirected) {
            doc["undirected"].push_back({{"a", a}, {"b", b}});
        }
        std::cout << doc.dump(2) << "\n";
    }
}

struct EvalArgs {
    std::string est;
    std::string truth;
    std::string data;
    bool check_acyclic = false;
    std::string out;
};

void run_eval(const EvalArgs& args) {
    // Estimate: adjacency CSV or candidate JSON (coefficients if present,
    // otherwise 0/1 support).
    Eigen::MatrixXd est_adj;
    bool est_has_coef = true;
    if (std::filesystem::path(args.est).extension() == ".json") {
        const auto doc = daggr::io::load_candidate(args.est);
        const int p = doc.candidate.structure.p;
        if (doc.candidate.coef) {
            est_adj = *doc.candidate.coef;
        } else {
            est_has_coef = false;
            est_adj = Eigen::MatrixXd::Zero(p, p);
            for (const auto& [i, j] : doc.candidate.structure.edges) {
                est_adj(i, j) = 1.0;
            }
        }
    } else {
        est_adj = daggr::io::load_matrix_csv(args.est);
        if (est_adj.rows() != est_adj.cols()) {
            throw daggr::DimensionError("estimate matrix must be square, got " +
                                        std::to_string(est_adj.rows()) + " x " +
                                        std::to_string(est_adj.cols()));
        }
    }

    const auto truth_doc = daggr::io::load_candidate(args.truth);
    const auto& truth_edges = truth_doc.candidate.structure;

    const bool acyclic = daggr::is_acyclic(est_adj);
    if (args.check_acyclic && !acyclic) {
        auto cycle = daggr::find_cycle(est_adj);
        throw daggr::CycleError("estimate contains a directed cycle: " +
                                    daggr::format_cycle(*cycle),
                                std::move(*cycle));
    }

    const auto est_edges = daggr::edge_set(est_adj);
    const auto counts = daggr::confusion(est_edges, truth_edges);

    ordered_json doc;
    doc["tp"] = counts.tp;
    doc["fp"] = counts.fp;
    doc["fn"] = counts.fn;
    doc["tn"] = counts.tn;
    doc["fnr"] = daggr::fnr(counts);
    doc["fpr"] = daggr::fpr(counts);
    doc["fdr"] = daggr::fdr(counts);
    doc["mcc"] = daggr::mcc(counts);
    doc["f1"] = daggr::f1(counts);
    doc["shd"] = daggr::shd(est_edges, truth_edges);
    doc["acyclic"] = acyclic;

    if (truth_doc.candidate.coef && est_has_coef) {
        doc["frob_sq"] = daggr::frob_sq(est_adj, *truth_doc.candidate.coef);
    }

    std::optional<Eigen::MatrixXd> x;
    if (!args.data.empty()) {
        x = daggr::io::load_data_csv(args.data);
        doc["pred_mse"] = daggr::pred_mse(*x, est_adj);
    }

    // Divergence from the truth model needs truth coefficients; the estimate
    // side needs coefficients plus a noise scale (from data when available).
    if (truth_doc.candidate.coef && est_has_coef) {
        WeightedDag truth_model;
        truth_model.adj = *truth_doc.candidate.coef;
        if (truth_doc.node_sigmas) {
            truth_model.node_sigmas = truth_doc.node_sigmas;
        } else {
            truth_model.sigma = 1.0;
        }
        WeightedDag est_model;
        est_model.adj = est_adj;
        if (x) {
            est_model.sigma = std::sqrt(
                std::max(daggr::pred_mse(*x, est_adj), daggr::kSigma2Floor));
        } else {
            est_model.sigma = 1.0;
        }
        doc["kl"] = daggr::kl_divergence(truth_model, est_model);
    }

    const std::string text = doc.dump(2) + "\n";
    if (!args.out.empty()) {
        std::ofstream out(args.out);
        if (!out) {
            throw daggr::Error("cannot open '" + args.out + "' for writing");
        }
        out << text;
    } else {
        std::cout << text;
    }
}

struct BenchArgs {
    std::string structure = "chain";
    int p = 25;
    int n = 100;
    std::string signal = "strong";
    double edge_prob = 0.0;
    int replications = 20;
    std::uint64_t seed = 0;
    double lambda = 1.0;
    double gamma = 1.0;
    int splits = 30;
    bool hetero = false;
    std::vector<int> hc_iters = {30, 40, 500};
    std::vector<double> ot_thresholds = {0.1, 0.3};
    bool oracle_candidate = false;
    std::vector<double> prune_thresholds = {0.5, 0.8};
    int jobs = 1;
    std::string json_out;
    std::string table_out;
};

void run_bench(const BenchArgs& args) {
    SimSpec spec;
    spec.structure = parse_structure(args.structure);
    spec.p = args.p;
    spec.n = args.n;
    spec.signal = parse_signal(args.signal);
    spec.edge_prob = args.edge_prob;
    spec.replications = args.replications;
    spec.rng_seed = args.seed;

    std::vector<daggr::MethodSpec> methods;
    for (int budget : args.hc_iters) {
        daggr::MethodSpec m;
        m.name = "hill_climb[" + std::to_string(budget) + "]";
        m.config.kind = daggr::LearnerKind::kHillClimb;
        m.config.max_iters = budget;
        methods.push_back(std::move(m));
    }
    for (double cut : args.ot_thresholds) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "order_threshold[%g]", cut);
        daggr::MethodSpec m;
        m.name = buf;
        m.config.kind = daggr::LearnerKind::kOrderThreshold;
        m.config.threshold = cut;
        methods.push_back(std::move(m));
    }
    if (args.oracle_candidate) {
        daggr::MethodSpec m;
        m.name = "oracle_truth";
        m.kind = daggr::MethodSpec::Kind::kTruth;
        methods.push_back(std::move(m));
    }

    AggregationConfig agg;
    agg.lambda = args.lambda;
    agg.gamma = args.gamma;
    agg.splits = args.splits;
    agg.hetero = args.hetero;

    const daggr::BenchReport report =
        daggr::run_bench(spec, methods, agg, args.prune_thresholds, args.jobs);

    const std::string table = daggr::io::bench_report_table(report);
    std::cout << table;
    if (!args.json_out.empty()) {
        std::ofstream out(args.json_out);
        if (!out) {
            throw daggr::Error("cannot open '" + args.json_out + "' for writing");
        }
        out << daggr::io::bench_report_json(report);
    }
    if (!args.table_out.empty()) {
        std::ofstream out(args.table_out);
        if (!out) {
            throw daggr::Error("cannot open '" + args.table_out + "' for writing");
        }
        out << table;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DAG ensemble aggregation toolkit"};
    app.require_subcommand(1);

    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "Draw data from a linear SEM");
    sim->add_option("--structure", sim_args.structure, "chain, hub, or random");
    sim->add_option("--p", sim_args.p, "number of nodes");
    sim->add_option("--n", sim_args.n, "number of rows");
    sim->add_option("--signal", sim_args.signal, "strong or weak coefficients");
    sim->add_option("--edge-prob", sim_args.edge_prob,
                    "edge probability for random structure (default 1/p)");
    sim->add_option("--seed", sim_args.seed, "RNG seed");
    sim->add_option("--truth", sim_args.truth_in,
                    "simulate from this candidate JSON instead of generating");
    sim->add_option("--out", sim_args.out, "output data CSV")->required();
    sim->add_option("--truth-out", sim_args.truth_out, "write the truth as candidate JSON");
    sim->callback([&]() { run_simulate(sim_args); });

    LearnArgs learn_args;
    auto* learn = app.add_subcommand("learn", "Fit a candidate structure from data");
    learn->add_option("--data", learn_args.data, "input data CSV")->required();
    learn->add_option("--method", learn_args.method, "hill_climb or order_threshold");
    learn->add_option("--max-iters", learn_args.max_iters, "hill-climb move budget");
    learn->add_option("--threshold", learn_args.threshold,
                      "order-threshold coefficient cutoff");
    learn->add_option("--seed", learn_args.seed, "RNG seed");
    learn->add_option("--name", learn_args.name, "candidate name");
    learn->add_option("--out", learn_args.out, "output candidate JSON")->required();
    learn->add_flag("--log-transform", learn_args.log_transform,
                    "log-transform the data first (requires positive entries)");
    learn->callback([&]() { run_learn(learn_args); });

    AggregateArgs agg_args;
    auto* agg = app.add_subcommand("aggregate",
                                   "Weight candidates by out-of-sample fit");
    agg->add_option("--data", agg_args.data, "input data CSV")->required();
    agg->add_option("--candidates", agg_args.candidates, "candidate JSON files")
        ->required()
        ->expected(-1);
    agg->add_option("--lambda", agg_args.lambda, "score temperature");
    agg->add_option("--gamma", agg_args.gamma, "variance penalty weight in [0, 1]");
    agg->add_option("--splits", agg_args.splits, "number of half-splits");
    agg->add_flag("--hetero", agg_args.hetero, "per-node-variance scoring");
    agg->add_option("--prior", agg_args.prior, "candidate prior (must sum to 1)")
        ->delimiter(',');
    agg->add_option("--seed", agg_args.seed, "RNG seed");
    agg->add_option("--weights-out", agg_args.weights_out, "weights JSON path");
    agg->add_option("--importance-out", agg_args.importance_out,
                    "edge importance JSON path");
    agg->add_option("--avg-out", agg_args.avg_out, "averaged adjacency CSV path");
    agg->add_flag("--log-transform", agg_args.log_transform,
                  "log-transform the data first (requires positive entries)");
    agg->callback([&]() { run_aggregate(agg_args); });

    PruneArgs prune_args;
    auto* prune = app.add_subcommand("prune",
                                     "Threshold an averaged adjacency to a DAG");
    prune->add_option("--u", prune_args.u_path, "averaged adjacency CSV")->required();
    prune->add_option("--importance", prune_args.importance_path,
                      "edge importance JSON")
        ->required();
    prune->add_option("--c", prune_args.c, "importance cutoff in [0, 1]")->required();
    prune->add_option("--out", prune_args.out, "pruned adjacency CSV")->required();
    prune->callback([&]() { run_prune(prune_args); });

    PdagArgs pdag_args;
    auto* pdag = app.add_subcommand("pdag",
                                    "Classify edges as directed/undirected");
    pdag->add_option("--importance", pdag_args.importance_path,
                     "edge importance JSON")
        ->required();
    pdag->add_option("--tau", pdag_args.tau, "support threshold in (0, 1]")->required();
    pdag->add_option("--delta", pdag_args.delta, "orientation margin in [0, 1)")
        ->required();
    pdag->add_option("--out", pdag_args.out, "output JSON path (default stdout)");
    pdag->callback([&]() { run_pdag(pdag_args); });

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Score an estimate against a truth");
    eval->add_option("--est", eval_args.est,
                     "estimate (adjacency CSV or candidate JSON)")
        ->required();
    eval->add_option("--truth", eval_args.truth, "truth candidate JSON")->required();
    eval->add_option("--data", eval_args.data, "data CSV for predictive metrics");
    eval->add_flag("--check-acyclic", eval_args.check_acyclic,
                   "fail if the estimate contains a cycle");
    eval->add_option("--out", eval_args.out, "metrics JSON path (default stdout)");
    eval->callback([&]() { run_eval(eval_args); });

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "Simulation benchmark harness");
    bench->add_option("--structure", bench_args.structure, "chain, hub, or random");
    bench->add_option("--p", bench_args.p, "number of nodes");
    bench->add_option("--n", bench_args.n, "number of rows");
    bench->add_option("--signal", bench_args.signal, "strong or weak coefficients");
    bench->add_option("--edge-prob", bench_args.edge_prob,
                      "edge probability for random structure (default 1/p)");
    bench->add_option("--replications", bench_args.replications, "replication count");
    bench->add_option("--seed", bench_args.seed, "RNG seed");
    bench->add_option("--lambda", bench_args.lambda, "score temperature");
    bench->add_option("--gamma", bench_args.gamma, "variance penalty weight");
    bench->add_option("--splits", bench_args.splits, "number of half-splits");
    bench->add_flag("--hetero", bench_args.hetero, "per-node-variance scoring");
    bench->add_option("--hc-iters", bench_args.hc_iters,
                      "hill-climb move budgets (one method each)")
        ->delimiter(',');
    bench->add_option("--ot-thresholds", bench_args.ot_thresholds,
                      "order-threshold cutoffs (one method each)")
        ->delimiter(',');
    bench->add_flag("--oracle-candidate", bench_args.oracle_candidate,
                    "include the generating structure as a candidate");
    bench->add_option("--prune-thresholds", bench_args.prune_thresholds,
                      "importance cutoffs for pruned rows")
        ->delimiter(',');
    bench->add_option("--jobs", bench_args.jobs, "worker threads");
    bench->add_option("--json-out", bench_args.json_out, "report JSON path");
    bench->add_option("--table-out", bench_args.table_out, "report table path");
    bench->callback([&]() { run_bench(bench_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << daggr::io::error_json(e);
        return 1;
    }
    return 0;
}
