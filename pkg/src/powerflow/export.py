"""CSV debug dump of a solved power flow."""

from pathlib import Path

import pandas as pd

from ..models.power import PowerFlowSolution


def solution_frame(solution: PowerFlowSolution) -> pd.DataFrame:
    """
    One row per bus: voltage and the flow on the branch feeding it.

    The root row carries the total flow leaving the root.
    """
    root = solution.bus_ids[0]
    incoming = {}
    root_p = root_q = 0.0
    for key, p, q in zip(solution.branch_keys, solution.p_flow, solution.q_flow):
        from_bus, to_bus = key.split("->", 1)
        incoming[to_bus] = (float(p), float(q))
        if from_bus == root:
            root_p += float(p)
            root_q += float(q)
    incoming[root] = (root_p, root_q)
    rows = [{"bus": bus_id, "V": float(v), "P_L": incoming[bus_id][0], "Q_L": incoming[bus_id][1]}
            for bus_id, v in zip(solution.bus_ids, solution.voltages)]
    return pd.DataFrame(rows, columns=["bus", "V", "P_L", "Q_L"])


def dump_solution_csv(solution: PowerFlowSolution, path) -> Path:
    path = Path(path)
    solution_frame(solution).to_csv(path, index=False, float_format="%.10g")
    return path
