"""Simulation and verification toolkit for phi-normalized strong laws.

Thin wrapper over the C++ core. JSON-returning calls are decoded here so
callers get plain dicts.
"""

import json as _json

from ._core import (
    GrowthFunction,
    GuardError,
    anderson_darling_2sample,
    block_base,
    contraction_constant,
    doubling_bounds,
    partial_sum,
    quantile,
    recursion_certificate,
    running_max,
    sample_stable,
    simulate_iid,
    simulate_lfsm,
    simulate_quasi_stationary,
    simulate_stable_levy,
    sssi_moment_identity,
    tail_exponent,
)
from . import _core


def moment_series(increments, p, phi, a, levels, k_window=0, meta=""):
    if isinstance(meta, dict):
        meta = _json.dumps(meta)
    return _json.loads(_core.moment_series(increments, p, phi, a, levels, k_window, meta))


def decay_diagnostic(increments, phi, a, levels):
    return _json.loads(_core.decay_diagnostic(increments, phi, a, levels))


__all__ = [
    "GrowthFunction",
    "GuardError",
    "anderson_darling_2sample",
    "block_base",
    "contraction_constant",
    "decay_diagnostic",
    "doubling_bounds",
    "moment_series",
    "partial_sum",
    "quantile",
    "recursion_certificate",
    "running_max",
    "sample_stable",
    "simulate_iid",
    "simulate_lfsm",
    "simulate_quasi_stationary",
    "simulate_stable_levy",
    "sssi_moment_identity",
    "tail_exponent",
]
