"""Spectral statistics of unitary Brownian motion started at the identity."""

import json as _json

from ._ubmot import (  # noqa: F401
    ConvergenceError,
    DomainError,
    StabilityError,
    critical_mus,
    density,
    density_finite_N,
    density_profile,
    drp_curve,
    edge_amplitude,
    gue_char_avg,
    gue_drp_curve,
    gue_sff_limit,
    herglotz,
    mc_observables,
    moment,
    moment_asymptotic,
    moment_jacobi,
    moment_limit,
    sff_exact,
    sff_fixed_k_limit,
    sff_heuristic,
    sff_integral_form,
    sff_scaled_limit,
    simulate,
    sum_rule_integral,
    support_edge,
    t_star,
)
from ._ubmot import validate as _validate

__version__ = "0.1.0"


def validate(suite="all", small=True):
    """Run an acceptance suite; returns the parsed JSON report."""
    return _json.loads(_validate(suite, small))
