"""Comparison scores computed from recorded series."""

from .scores import vvs, gcs, lcs, cus, acps, jain_fairness, cos, power_distribution, score_run

__all__ = [
    "vvs",
    "gcs",
    "lcs",
    "cus",
    "acps",
    "jain_fairness",
    "cos",
    "power_distribution",
    "score_run",
]
