"""Ensemble aggregation for candidate DAGs.

Thin Python face over the compiled core: simulate linear SEM data, learn
candidate structures, weight them by out-of-sample fit, and collapse the
ensemble into a single acyclic graph or a partially directed summary.
"""

import json as _json

try:
    from . import _daggr as _impl  # packaged wheel layout
except ImportError:  # pragma: no cover - in-tree builds put it on sys.path
    import _daggr as _impl

__version__ = "0.1.0"

# Structures and errors.
WeightedDag = _impl.WeightedDag
CycleError = _impl.CycleError
DimensionError = _impl.DimensionError
DomainError = _impl.DomainError
NumericError = _impl.NumericError
ParseError = _impl.ParseError
Error = _impl.Error

# Graphs.
is_acyclic = _impl.is_acyclic
topological_order = _impl.topological_order
edge_set = _impl.edge_set
sym_diff_size = _impl.sym_diff_size
derive_seed = _impl.derive_seed

# Simulation and scoring.
simulate = _impl.simulate
refit = _impl.refit
loglik = _impl.loglik
hetero_score = _impl.hetero_score
kl_divergence = _impl.kl_divergence
implied_covariance = _impl.implied_covariance
gen_structure = _impl.gen_structure

# Candidate learners.
hill_climb = _impl.hill_climb
order_threshold = _impl.order_threshold
refit_candidate = _impl.refit_candidate

# Aggregation.
daggr_weights = _impl.daggr_weights
exp_weights = _impl.exp_weights
importance = _impl.importance
aggregate_refits = _impl.aggregate_refits
threshold_aggregate = _impl.threshold_aggregate
prune = _impl.prune
classify_edges = _impl.classify_edges

# Structure metrics.
confusion = _impl.confusion
shd = _impl.shd
frob_sq = _impl.frob_sq
pred_mse = _impl.pred_mse

run_bench_json = _impl.run_bench_json


def run_bench(**kwargs):
    """Run the replication benchmark and return the report as a dict.

    Accepts the keyword arguments of ``run_bench_json`` (structure, p, n,
    signal, replications, seed, lambda_, splits, prune_thresholds, jobs).
    """
    return _json.loads(_impl.run_bench_json(**kwargs))


__all__ = [
    "WeightedDag",
    "CycleError",
    "DimensionError",
    "DomainError",
    "NumericError",
    "ParseError",
    "Error",
    "is_acyclic",
    "topological_order",
    "edge_set",
    "sym_diff_size",
    "derive_seed",
    "simulate",
    "refit",
    "loglik",
    "hetero_score",
    "kl_divergence",
    "implied_covariance",
    "gen_structure",
    "hill_climb",
    "order_threshold",
    "refit_candidate",
    "daggr_weights",
    "exp_weights",
    "importance",
    "aggregate_refits",
    "threshold_aggregate",
    "prune",
    "classify_edges",
    "confusion",
    "shd",
    "frob_sq",
    "pred_mse",
    "run_bench_json",
    "run_bench",
]
