"""Radial power flow: the nonlinear sweep and the analytic linear relations."""

from .sweep import (
    S_BASE,
    SolverOptions,
    SweepState,
    RadialSweep,
    compile_network,
    injection_arrays,
    solve_distflow,
    residuals,
)
from .linear import (
    apparent_power,
    lindistflow_voltages,
    closed_form_terms,
    closed_form_voltage,
    feeder_line_from_path,
)
from .export import solution_frame, dump_solution_csv

__all__ = [
    "S_BASE",
    "SolverOptions",
    "SweepState",
    "RadialSweep",
    "compile_network",
    "injection_arrays",
    "solve_distflow",
    "residuals",
    "apparent_power",
    "lindistflow_voltages",
    "closed_form_terms",
    "closed_form_voltage",
    "feeder_line_from_path",
    "solution_frame",
    "dump_solution_csv",
]
