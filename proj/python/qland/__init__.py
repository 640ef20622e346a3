"""Loss-landscape analysis for learning unitaries with entangled training samples."""

import json

from ._core import (
    DimensionError,
    DomainError,
    InvariantError,
    ball_max_fidelity_entangled_ub,
    ball_max_fidelity_separable,
    build_unitary,
    entanglement_entropy,
    expressivity,
    frobenius_phase_distance,
    haar_bin_probability,
    haar_random_unitary,
    improvement_entangled_ub,
    improvement_ratio_bound,
    improvement_separable,
    landscape_grid,
    maxent_loss_from_trace,
    min_distance_entangled_lb,
    min_distance_separable,
    param_count,
    qnfl_lower_bound,
    sample_loss,
)
from ._core import _run_experiment_json, _verify_bounds_json


def run_experiment(config):
    """Run a distance / improvement / nme_sweep config (dict) and return its records."""
    return json.loads(_run_experiment_json(json.dumps(config)))


def verify_bounds(dims=(2, 4, 8), trials=100, seed=0):
    return json.loads(_verify_bounds_json(list(dims), trials, seed))


__all__ = [
    "DimensionError",
    "DomainError",
    "InvariantError",
    "ball_max_fidelity_entangled_ub",
    "ball_max_fidelity_separable",
    "build_unitary",
    "entanglement_entropy",
    "expressivity",
    "frobenius_phase_distance",
    "haar_bin_probability",
    "haar_random_unitary",
    "improvement_entangled_ub",
    "improvement_ratio_bound",
    "improvement_separable",
    "landscape_grid",
    "maxent_loss_from_trace",
    "min_distance_entangled_lb",
    "min_distance_separable",
    "param_count",
    "qnfl_lower_bound",
    "run_experiment",
    "sample_loss",
    "verify_bounds",
]
