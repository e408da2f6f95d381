#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "daggr/aggregate.hpp"
#include "daggr/graph.hpp"
#include "daggr/learners.hpp"
#include "daggr/rng.hpp"

namespace daggr {

enum class StructureKind { kRandom, kHub, kChain };
enum class SignalStrength { kStrong, kWeak };

// Simulation scenario. edge_prob applies to the random structure only;
// 0 means the default 1/p. Noise is always unit variance.
struct SimSpec {
    StructureKind structure = StructureKind::kChain;
    int p = 25;
    int n = 100;
    SignalStrength signal = SignalStrength::kStrong;
    double edge_prob = 0.0;
    int replications = 20;
    std::uint64_t rng_seed = 0;
};

// Draws a ground-truth DAG: a uniformly random node permutation defines the
// topological order; chain links consecutive nodes, hub makes the first node
// parent of all others, random includes each forward pair independently with
// edge_prob. Coefficients are uniform on +/-[0.5, 1.5] (strong) or
// +/-[0.1, 0.5] (weak); noise sd 1.
WeightedDag gen_structure(const SimSpec& spec, Rng& rng);

// One benchmark method: either a baseline learner or the truth oracle (which
// emits the generating structure as its candidate).
struct MethodSpec {
    enum class Kind { kLearner, kTruth };

    std::string name;
    Kind kind = Kind::kLearner;
    LearnerConfig config;
};

// Desk-scale default panel: three hill-climb budgets, two order thresholds.
std::vector<MethodSpec> default_methods();

struct MetricSummary {
    double mean = 0.0;
    double se = 0.0;  // standard error of the mean; 0 when replications == 1
    double median = 0.0;
};

struct BenchRow {
    std::string method;
    std::optional<MetricSummary> weight;  // aggregation weight; candidates only
    MetricSummary frob_sq;
    MetricSummary fnr;
    MetricSummary mcc;
    MetricSummary shd;
    MetricSummary fpr;
    MetricSummary fdr;
    MetricSummary kl;
};

struct BenchReport {
    SimSpec sim;
    AggregationConfig agg;
    std::vector<double> prune_thresholds;
    std::vector<std::string> methods;
    std::vector<BenchRow> rows;
};

// Runs `spec.replications` independent replications (parallel across `jobs`
// worker threads; replication r always uses the stream derived from
// spec.rng_seed with label "replication" and index r, so the report is
// byte-identical for any jobs value). Each replication draws a truth and a
// dataset, runs every method, aggregates the resulting ensemble, and scores
// candidate rows plus a raw-average row and one pruned row per threshold.
// A failing replication aborts the run with the replication index and seed
// in the error message.
BenchReport run_bench(const SimSpec& spec, const std::vector<MethodSpec>& methods,
                      const AggregationConfig& agg, std::vector<double> prune_thresholds,
                      int jobs = 1);

const char* to_string(StructureKind kind);
const char* to_string(SignalStrength signal);

}  // namespace daggr
