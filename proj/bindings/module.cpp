#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "daggr/aggregate.hpp"
#include "daggr/bench.hpp"
#include "daggr/errors.hpp"
#include "daggr/graph.hpp"
#include "daggr/io.hpp"
#include "daggr/learners.hpp"
#include "daggr/metrics.hpp"
#include "daggr/prune.hpp"
#include "daggr/sem.hpp"

namespace py = pybind11;

namespace {

using EdgePairs = std::set<std::pair<int, int>>;

daggr::EdgeSet make_edge_set(int p, const EdgePairs& edges) {
    daggr::EdgeSet out(p);
    for (const auto& [i, j] : edges) {
        out.insert(i, j);
    }
    return out;
}

daggr::CandidateEnsemble make_ensemble(int p, const std::vector<EdgePairs>& structures,
                                       const std::vector<std::string>& names) {
    daggr::CandidateEnsemble ens;
    for (std::size_t k = 0; k < structures.size(); ++k) {
        daggr::Candidate cand;
        cand.name = k < names.size() ? names[k] : "cand" + std::to_string(k);
        cand.structure = make_edge_set(p, structures[k]);
        ens.push_back(std::move(cand));
    }
    return ens;
}

daggr::AggregationConfig make_agg_config(double lambda, double gamma, int splits,
                                         const std::vector<double>& prior, bool hetero,
                                         std::uint64_t seed) {
    daggr::AggregationConfig cfg;
    cfg.lambda = lambda;
    cfg.gamma = gamma;
    cfg.splits = splits;
    cfg.prior = prior;
    cfg.hetero = hetero;
    cfg.rng_seed = seed;
    return cfg;
}

void init_graph(py::module_& m) {
    py::class_<daggr::WeightedDag>(m, "WeightedDag")
        .def(py::init([](const Eigen::MatrixXd& adj,
                         const std::optional<Eigen::VectorXd>& node_sigmas,
                         const std::optional<double>& sigma) {
                 daggr::WeightedDag dag;
                 dag.adj = adj;
                 dag.node_sigmas = node_sigmas;
                 dag.sigma = sigma;
                 return dag;
             }),
             py::arg("adj"), py::arg("node_sigmas") = std::nullopt,
             py::arg("sigma") = std::nullopt)
        .def_readonly("adj", &daggr::WeightedDag::adj)
        .def_readonly("node_sigmas", &daggr::WeightedDag::node_sigmas)
        .def_readonly("sigma", &daggr::WeightedDag::sigma)
        .def_property_readonly("p", &daggr::WeightedDag::nodes);

    m.def("is_acyclic", &daggr::is_acyclic, py::arg("adj"));
    m.def("topological_order", &daggr::topological_order, py::arg("adj"));
    m.def(
        "edge_set",
        [](const Eigen::MatrixXd& adj) { return daggr::edge_set(adj).edges; },
        py::arg("adj"));
    m.def(
        "sym_diff_size",
        [](int p, const EdgePairs& a, const EdgePairs& b) {
            return daggr::sym_diff_size(make_edge_set(p, a), make_edge_set(p, b));
        },
        py::arg("p"), py::arg("a"), py::arg("b"));
    m.def("derive_seed", &daggr::derive_seed, py::arg("root"), py::arg("label"),
          py::arg("index") = 0);
}

void init_sem(py::module_& m) {
    m.def(
        "simulate",
        [](const daggr::WeightedDag& truth, int n, std::uint64_t seed) {
            return daggr::simulate(truth, n, seed).x;
        },
        py::arg("truth"), py::arg("n"), py::arg("seed"));
    m.def(
        "refit",
        [](const Eigen::MatrixXd& rows, int p, const EdgePairs& edges, bool hetero) {
            return daggr::refit(rows, make_edge_set(p, edges), hetero);
        },
        py::arg("rows"), py::arg("p"), py::arg("edges"), py::arg("hetero") = false);
    m.def("loglik", &daggr::loglik, py::arg("rows"), py::arg("dag"));
    m.def("hetero_score", &daggr::hetero_score, py::arg("rows"), py::arg("dag"),
          py::arg("gamma"));
    m.def("kl_divergence", &daggr::kl_divergence, py::arg("truth"), py::arg("est"));
    m.def("implied_covariance", &daggr::implied_covariance, py::arg("dag"));
}

void init_learners(py::module_& m) {
    m.def(
        "hill_climb",
        [](const Eigen::MatrixXd& rows, int max_iters, std::uint64_t seed) {
            daggr::LearnerConfig cfg;
            cfg.kind = daggr::LearnerKind::kHillClimb;
            cfg.max_iters = max_iters;
            cfg.rng_seed = seed;
            return daggr::hill_climb(rows, cfg);
        },
        py::arg("rows"), py::arg("max_iters") = 500, py::arg("seed") = 0);
    m.def(
        "order_threshold",
        [](const Eigen::MatrixXd& rows, double threshold, std::uint64_t seed) {
            daggr::LearnerConfig cfg;
            cfg.kind = daggr::LearnerKind::kOrderThreshold;
            cfg.threshold = threshold;
            cfg.rng_seed = seed;
            return daggr::order_threshold(rows, cfg);
        },
        py::arg("rows"), py::arg("threshold") = 0.1, py::arg("seed") = 0);
    m.def(
        "refit_candidate",
        [](const Eigen::MatrixXd& rows, int p, const EdgePairs& edges, bool hetero) {
            return daggr::refit_candidate(rows, make_edge_set(p, edges), hetero);
        },
        py::arg("rows"), py::arg("p"), py::arg("edges"), py::arg("hetero") = false);
}

void init_aggregate(py::module_& m) {
    m.def(
        "daggr_weights",
        [](const Eigen::MatrixXd& x, int p, const std::vector<EdgePairs>& structures,
           const std::vector<std::string>& names, double lambda, double gamma,
           int splits, const std::vector<double>& prior, bool hetero,
           std::uint64_t seed) {
            daggr::Dataset data;
            data.x = x;
            return daggr::daggr_weights(
                data, make_ensemble(p, structures, names),
                make_agg_config(lambda, gamma, splits, prior, hetero, seed));
        },
        py::arg("x"), py::arg("p"), py::arg("structures"),
        py::arg("names") = std::vector<std::string>{}, py::arg("lambda_") = 1.0,
        py::arg("gamma") = 1.0, py::arg("splits") = 30,
        py::arg("prior") = std::vector<double>{}, py::arg("hetero") = false,
        py::arg("seed") = 0);
    m.def(
        "importance",
        [](int p, const std::vector<EdgePairs>& structures, const Eigen::VectorXd& w) {
            std::vector<daggr::EdgeSet> sets;
            sets.reserve(structures.size());
            for (const auto& s : structures) {
                sets.push_back(make_edge_set(p, s));
            }
            return daggr::importance(sets, w);
        },
        py::arg("p"), py::arg("structures"), py::arg("w"));
    m.def(
        "aggregate_refits",
        [](const Eigen::MatrixXd& x, int p, const std::vector<EdgePairs>& structures,
           const Eigen::VectorXd& w, bool hetero) {
            const auto fits =
                daggr::refit_ensemble(x, make_ensemble(p, structures, {}), hetero);
            return daggr::aggregate_matrix(fits, w);
        },
        py::arg("x"), py::arg("p"), py::arg("structures"), py::arg("w"),
        py::arg("hetero") = false);
    m.def(
        "threshold_aggregate",
        [](const Eigen::MatrixXd& x, int p, const std::vector<EdgePairs>& structures,
           const Eigen::VectorXd& w, double c, bool hetero) {
            const auto fits =
                daggr::refit_ensemble(x, make_ensemble(p, structures, {}), hetero);
            return daggr::threshold_aggregate(fits, w, c);
        },
        py::arg("x"), py::arg("p"), py::arg("structures"), py::arg("w"), py::arg("c"),
        py::arg("hetero") = false);
    m.def("exp_weights", &daggr::exp_weights, py::arg("scores"), py::arg("prior"),
          py::arg("lambda_"));
}

void init_prune(py::module_& m) {
    m.def(
        "prune",
        [](const Eigen::MatrixXd& u, const Eigen::MatrixXd& s, double c) {
            return daggr::prune(u, s, c).adj;
        },
        py::arg("u"), py::arg("s"), py::arg("c"));
    m.def(
        "classify_edges",
        [](const Eigen::MatrixXd& s, double tau, double delta) {
            const daggr::Pdag pdag = daggr::classify_edges(s, tau, delta);
            return py::make_tuple(pdag.directed.edges, pdag.undirected);
        },
        py::arg("s"), py::arg("tau"), py::arg("delta"));
}

void init_metrics(py::module_& m) {
    m.def(
        "confusion",
        [](int p, const EdgePairs& est, const EdgePairs& truth) {
            const auto c =
                daggr::confusion(make_edge_set(p, est), make_edge_set(p, truth));
            py::dict out;
            out["tp"] = c.tp;
            out["fp"] = c.fp;
            out["fn"] = c.fn;
            out["tn"] = c.tn;
            out["fnr"] = daggr::fnr(c);
            out["fpr"] = daggr::fpr(c);
            out["fdr"] = daggr::fdr(c);
            out["mcc"] = daggr::mcc(c);
            out["f1"] = daggr::f1(c);
            return out;
        },
        py::arg("p"), py::arg("est"), py::arg("truth"));
    m.def(
        "shd",
        [](int p, const EdgePairs& est, const EdgePairs& truth) {
            return daggr::shd(make_edge_set(p, est), make_edge_set(p, truth));
        },
        py::arg("p"), py::arg("est"), py::arg("truth"));
    m.def("frob_sq", &daggr::frob_sq, py::arg("est"), py::arg("truth"));
    m.def("pred_mse", &daggr::pred_mse, py::arg("rows"), py::arg("adj"));
}

void init_bench(py::module_& m) {
    m.def(
        "gen_structure",
        [](const std::string& structure, int p, const std::string& signal,
           double edge_prob, std::uint64_t seed) {
            daggr::SimSpec spec;
            if (structure == "chain") {
                spec.structure = daggr::StructureKind::kChain;
            } else if (structure == "hub") {
                spec.structure = daggr::StructureKind::kHub;
            } else if (structure == "random") {
                spec.structure = daggr::StructureKind::kRandom;
            } else {
                throw daggr::DomainError("unknown structure '" + structure + "'");
            }
            spec.signal = signal == "weak" ? daggr::SignalStrength::kWeak
                                           : daggr::SignalStrength::kStrong;
            spec.p = p;
            spec.edge_prob = edge_prob;
            daggr::Rng rng(seed);
            return daggr::gen_structure(spec, rng);
        },
        py::arg("structure"), py::arg("p"), py::arg("signal") = "strong",
        py::arg("edge_prob") = 0.0, py::arg("seed") = 0);
    m.def(
        "run_bench_json",
        [](const std::string& structure, int p, int n, const std::string& signal,
           int replications, std::uint64_t seed, double lambda, int splits,
           const std::vector<double>& prune_thresholds, int jobs) {
            daggr::SimSpec spec;
            spec.structure = structure == "hub"   ? daggr::StructureKind::kHub
                             : structure == "random"
                                 ? daggr::StructureKind::kRandom
                                 : daggr::StructureKind::kChain;
            spec.signal = signal == "weak" ? daggr::SignalStrength::kWeak
                                           : daggr::SignalStrength::kStrong;
            spec.p = p;
            spec.n = n;
            spec.replications = replications;
            spec.rng_seed = seed;
            daggr::AggregationConfig agg;
            agg.lambda = lambda;
            agg.splits = splits;
            const auto report = daggr::run_bench(spec, daggr::default_methods(), agg,
                                                 prune_thresholds, jobs);
            return daggr::io::bench_report_json(report);
        },
        py::arg("structure"), py::arg("p"), py::arg("n"), py::arg("signal") = "strong",
        py::arg("replications") = 20, py::arg("seed") = 0, py::arg("lambda_") = 1.0,
        py::arg("splits") = 30,
        py::arg("prune_thresholds") = std::vector<double>{0.5, 0.8},
        py::arg("jobs") = 1);
}

}  // namespace

PYBIND11_MODULE(_daggr, m) {
    m.doc() = "DAG ensemble aggregation toolkit";

    // Translators run newest-first, so the base class must be registered
    // before the specific kinds or it would swallow all of them.
    py::register_exception<daggr::Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<daggr::CycleError>(m, "CycleError", PyExc_ValueError);
    py::register_exception<daggr::DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<daggr::DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<daggr::NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<daggr::ParseError>(m, "ParseError", PyExc_ValueError);

    init_graph(m);
    init_sem(m);
    init_learners(m);
    init_aggregate(m);
    init_prune(m);
    init_metrics(m);
    init_bench(m);
}
