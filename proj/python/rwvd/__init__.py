"""Random walks in varying dimensions: criteria, exact oracles and Monte Carlo."""

from ._core import (
    ConfigError,
    Error,
    LatticeDistribution,
    ScheduleFamily,
    bound_bands,
    classify,
    criterion_partial_sums,
    exact_hitting,
    exact_return_prob,
    lazy_walk,
    lclt_fit,
    lemma46,
    mc_hitting,
    phi,
    product_walk,
    prop61,
    run_cli,
    second_moment,
    simple_walk,
    simulate,
)

__all__ = [
    "ConfigError",
    "Error",
    "LatticeDistribution",
    "ScheduleFamily",
    "bound_bands",
    "classify",
    "criterion_partial_sums",
    "exact_hitting",
    "exact_return_prob",
    "lazy_walk",
    "lclt_fit",
    "lemma46",
    "mc_hitting",
    "phi",
    "product_walk",
    "prop61",
    "run_cli",
    "second_moment",
    "simple_walk",
    "simulate",
]
