#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "daggr/aggregate.hpp"
#include "daggr/bench.hpp"
#include "daggr/graph.hpp"
#include "daggr/prune.hpp"

namespace daggr::io {

// --- CSV ---------------------------------------------------------------
// Data files carry a header row "x0,x1,...,x{p-1}"; matrix files (adjacency,
// importance) are headerless p x p grids. All values are written with 17
// significant digits, so write -> read round-trips bit-exactly.

void save_data_csv(const std::string& path, const Eigen::MatrixXd& x);
Eigen::MatrixXd load_data_csv(const std::string& path);

void save_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd load_matrix_csv(const std::string& path);

// Element-wise natural log, in place. Throws DomainError (with the offending
// row/column) unless every entry is strictly positive.
void log_transform(Eigen::MatrixXd& x);

// --- Candidate JSON ----------------------------------------------------
// {"p": int, "name": str?, "edges": [{"from": int, "to": int, "coef": num?}],
//  "node_sigmas": [num]?}
// Endpoints are 0-based; self-loops, duplicate edges, out-of-range endpoints
// and cyclic structures are rejected (cycles by name, in edge order). Either
// every edge carries a coef or none does.

struct CandidateDoc {
    Candidate candidate;
    std::optional<Eigen::VectorXd> node_sigmas;
};

CandidateDoc load_candidate(const std::string& path);
void save_candidate(const std::string& path, const std::string& name,
                    const Eigen::MatrixXd& adj,
                    const std::optional<Eigen::VectorXd>& node_sigmas);

// --- Aggregation artifacts ----------------------------------------------

void save_weights(const std::string& path, const AggregationConfig& cfg,
                  const std::vector<std::string>& names, const Eigen::VectorXd& w);
Eigen::VectorXd load_weights(const std::string& path);

void save_importance(const std::string& path, const Eigen::MatrixXd& s);
Eigen::MatrixXd load_importance(const std::string& path);

void save_pdag(const std::string& path, const Pdag& pdag);

// --- Bench report --------------------------------------------------------

std::string bench_report_json(const BenchReport& report);
std::string bench_report_table(const BenchReport& report);

// --- Errors --------------------------------------------------------------

// Machine-readable error object: {"error": {"type": ..., "message": ...,
// "cycle"?: [...], "line"?: n, "column"?: n}}.
std::string error_json(const std::exception& e);

}  // namespace daggr::io
