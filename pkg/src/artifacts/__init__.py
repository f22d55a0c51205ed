"""Run directories, manifests and content hashing."""

from .hashing import canonical_json, sha256_json, sha256_arrays, sha256_file, write_json
from .plot_data import sampled_ev, write_run_plot_data, write_training_scatter
from .run_store import RunStore

__all__ = [
    "canonical_json",
    "sha256_json",
    "sha256_arrays",
    "sha256_file",
    "write_json",
    "sampled_ev",
    "write_run_plot_data",
    "write_training_scatter",
    "RunStore",
]
