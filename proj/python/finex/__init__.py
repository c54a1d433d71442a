"""Localized financial-exclusion index toolkit.

Thin Python surface over the C++ core: geometry kernels, AvCash scoring,
lonely-ATM analysis, Clark-Evans statistics, min-max normalization, weighted
aggregation, Jenks natural breaks, ward-rank validation and the full pipeline
runner.
"""

from ._core import (
    FinexError,
    aggregate,
    align_polarity,
    avcash,
    default_score_table,
    default_weights,
    distance,
    jenks_breaks,
    lonely_atms,
    minmax,
    nearest_neighbor,
    nn_stats,
    pearson,
    points_within,
    rank_and_compare,
    run_pipeline,
)

__all__ = [
    "FinexError",
    "aggregate",
    "align_polarity",
    "avcash",
    "default_score_table",
    "default_weights",
    "distance",
    "jenks_breaks",
    "lonely_atms",
    "minmax",
    "nearest_neighbor",
    "nn_stats",
    "pearson",
    "points_within",
    "rank_and_compare",
    "run_pipeline",
]
