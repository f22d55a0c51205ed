"""Time-stepped co-simulation, controller sweeps and run comparison."""

from .engine import CoSimulation, run, baseline_inputs, run_baseline
from .compare import ComparisonTable, check_compatible, order_rows, compare, table_from_reports
from .sweep import run_controllers

__all__ = [
    "CoSimulation",
    "run",
    "baseline_inputs",
    "run_baseline",
    "ComparisonTable",
    "check_compatible",
    "order_rows",
    "compare",
    "table_from_reports",
    "run_controllers",
]
