"""Per-node voltage models of substation loading and their trigger thresholds."""

from .regression import build_design_matrix, fit_polynomial, estimate_load
from .threshold import solve_threshold
from .training import extract_training_set, train_node, train_all
from .storage import thresholds_hash, save_thresholds, load_thresholds

__all__ = [
    "build_design_matrix",
    "fit_polynomial",
    "estimate_load",
    "solve_threshold",
    "extract_training_set",
    "train_node",
    "train_all",
    "thresholds_hash",
    "save_thresholds",
    "load_thresholds",
]
