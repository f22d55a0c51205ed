"""
Backward/forward sweep solution of the branch-flow (DistFlow) equations.

Everything inside the sweep is per-unit on a 1 MVA base with each branch's
impedance base taken from its receiving bus. Buses are numbered in
breadth-first order from the root, and branch ``b`` feeds bus ``b + 1``.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional

import numpy as np
from scipy import sparse

from ..grid.topology import validate_radial
from ..models.network import Network
from ..models.power import InjectionSet, PowerFlowSolution
from ..utils.exceptions import PowerFlowError, VoltageCollapseError

logger = logging.getLogger(__name__)

S_BASE = 1.0e6


@dataclass(frozen=True)
class SolverOptions:
    """Convergence settings of the sweep."""

    tolerance_pu: float = 1e-8
    max_iterations: int = 100


@dataclass
class SweepState:
    """Per-unit fixed point reached by one solve."""

    v2: np.ndarray
    p: np.ndarray
    q: np.ndarray
    current2: np.ndarray
    load_p: np.ndarray
    source_v2: float
    iterations: int
    max_residual: float


class RadialSweep:
    """
    A network compiled for repeated power-flow solves.

    The subtree matrix ``T`` (``T[b, j] = 1`` when bus ``j + 1`` lies below
    branch ``b``) sums loads into branch flows; its transpose sums branch
    voltage drops along root paths.
    """

    def __init__(self, net: Network, options: SolverOptions = None):
        validate_radial(net)
        self.net = net
        self.options = options or SolverOptions()

        order: List[str] = [net.root]
        head = 0
        while head < len(order):
            order.extend(branch.to_bus for branch in net.children(order[head]))
            head += 1
        self.bus_ids = tuple(order)
        self.index: Dict[str, int] = {bus_id: i for i, bus_id in enumerate(order)}
        self.branches = tuple(net.parent_branch(bus_id) for bus_id in order[1:])
        self.branch_keys = tuple(branch.key for branch in self.branches)
        self.branch_index: Dict[str, int] = {key: b for b, key in enumerate(self.branch_keys)}

        n = len(order)
        m = n - 1
        self.v_base = np.array([net.bus(bus_id).nominal_voltage for bus_id in order])
        self.parent = np.array([self.index[branch.from_bus] for branch in self.branches], dtype=int)
        z_base = self.v_base[1:] ** 2 / S_BASE
        self.r = np.array([branch.resistance for branch in self.branches]) / z_base
        self.x = np.array([branch.reactance for branch in self.branches]) / z_base
        self.z2 = self.r ** 2 + self.x ** 2

        rows, cols = [], []
        for j in range(1, n):
            bus = j
            while bus != 0:
                rows.append(bus - 1)
                cols.append(j - 1)
                bus = self.parent[bus - 1]
        data = np.ones(len(rows))
        self.subtree = sparse.csr_matrix((data, (rows, cols)), shape=(m, m))
        self.path = self.subtree.T.tocsr()
        child_rows = [self.parent[c] - 1 for c in range(m) if self.parent[c] != 0]
        child_cols = [c for c in range(m) if self.parent[c] != 0]
        self.children = sparse.csr_matrix((np.ones(len(child_rows)), (child_rows, child_cols)),
                                          shape=(m, m))
        self.head_branches = np.flatnonzero(self.parent == 0)
        logger.debug("Compiled sweep: %d buses, %d subtree entries", n, self.subtree.nnz)

    @property
    def size(self) -> int:
        return len(self.bus_ids)

    def bus_positions(self, bus_ids) -> np.ndarray:
        return np.array([self.index[bus_id] for bus_id in bus_ids], dtype=int)

    def branch_positions(self, keys) -> np.ndarray:
        return np.array([self.branch_index[key] for key in keys], dtype=int)

    def solve_arrays(
        self,
        p_w: np.ndarray,
        q_var: np.ndarray,
        source_voltage_pu: float = 1.0,
        current_a: Optional[np.ndarray] = None,
        warm: Optional[SweepState] = None,
    ) -> SweepState:
        """
        Solve for per-bus consumption arrays aligned with ``bus_ids``.

        ``current_a`` adds constant-current unity power factor draws whose
        active power follows the solved voltage. Entries at the root bus are
        ignored here and added to the substation totals by the caller.

        Raises:
            VoltageCollapseError: If a squared voltage turns non-positive
            PowerFlowError: If the iteration limit is reached
        """
        tol = self.options.tolerance_pu
        p_fixed = np.asarray(p_w, dtype=float)[1:] / S_BASE
        q = np.asarray(q_var, dtype=float)[1:] / S_BASE
        cc = None
        if current_a is not None:
            cc = np.asarray(current_a, dtype=float)[1:] * self.v_base[1:] / S_BASE
            if not np.any(cc):
                cc = None
        v0sq = float(source_voltage_pu) ** 2

        if warm is not None and len(warm.v2) == len(q):
            v2 = warm.v2.copy()
            p_flow, q_flow = warm.p.copy(), warm.q.copy()
        else:
            v2 = np.full(len(q), v0sq)
            p_load0 = p_fixed if cc is None else p_fixed + cc * np.sqrt(v0sq)
            p_flow = self.subtree @ p_load0
            q_flow = self.subtree @ q

        iterations = 0
        for iterations in range(1, self.options.max_iterations + 1):
            p_flow, q_flow, current2, p_load, v2_new = self._iterate(p_fixed, q, cc, v0sq,
                                                                      v2, p_flow, q_flow)
            change = float(np.max(np.abs(np.sqrt(v2_new) - np.sqrt(v2)))) if len(v2) else 0.0
            v2 = v2_new
            if change < tol:
                break
        else:
            raise PowerFlowError("Power flow did not converge",
                                 f"{self.options.max_iterations} iterations, last change {change:.3e} pu")

        residual = self._residual(p_fixed, q, cc, v0sq, v2, p_flow, q_flow)
        polish = 0
        while residual > tol and polish < 5:
            p_flow, q_flow, current2, p_load, v2 = self._iterate(p_fixed, q, cc, v0sq,
                                                                  v2, p_flow, q_flow)
            residual = self._residual(p_fixed, q, cc, v0sq, v2, p_flow, q_flow)
            polish += 1
        logger.debug("Sweep converged in %d iterations, residual %.2e", iterations, residual)
        return SweepState(v2=v2, p=p_flow, q=q_flow, current2=current2, load_p=p_load,
                          source_v2=v0sq, iterations=iterations, max_residual=residual)

    def _iterate(self, p_fixed, q, cc, v0sq, v2, p_flow, q_flow):
        v_full = np.concatenate(([v0sq], v2))
        current2 = (p_flow ** 2 + q_flow ** 2) / v_full[self.parent]
        p_load = p_fixed if cc is None else p_fixed + cc * np.sqrt(v2)
        p_new = self.subtree @ (p_load + self.r * current2)
        q_new = self.subtree @ (q + self.x * current2)
        drop = self.path @ (2.0 * (self.r * p_new + self.x * q_new) - self.z2 * current2)
        v2_new = v0sq - drop
        if np.any(v2_new <= 0):
            worst = int(np.argmin(v2_new))
            raise VoltageCollapseError("Voltage collapse", f"bus {self.bus_ids[worst + 1]}")
        return p_new, q_new, current2, p_load, v2_new

    def _residual(self, p_fixed, q, cc, v0sq, v2, p_flow, q_flow) -> float:
        """Largest per-unit violation of the three branch-flow equations."""
        if not len(v2):
            return 0.0
        v_full = np.concatenate(([v0sq], v2))
        v_from = v_full[self.parent]
        current2 = (p_flow ** 2 + q_flow ** 2) / v_from
        p_load = p_fixed if cc is None else p_fixed + cc * np.sqrt(v2)
        res_p = p_flow - (p_load + self.children @ p_flow + self.r * current2)
        res_q = q_flow - (q + self.children @ q_flow + self.x * current2)
        res_v = v2 - (v_from - 2.0 * (self.r * p_flow + self.x * q_flow) + self.z2 * current2)
        return float(max(np.max(np.abs(res_p)), np.max(np.abs(res_q)), np.max(np.abs(res_v))))

    def residuals(self, state: SweepState, p_w: np.ndarray, q_var: np.ndarray,
                  current_a: Optional[np.ndarray] = None) -> float:
        p_fixed = np.asarray(p_w, dtype=float)[1:] / S_BASE
        q = np.asarray(q_var, dtype=float)[1:] / S_BASE
        cc = None
        if current_a is not None:
            cc = np.asarray(current_a, dtype=float)[1:] * self.v_base[1:] / S_BASE
        return self._residual(p_fixed, q, cc, state.source_v2, state.v2, state.p, state.q)

    # -- views of a state in physical units ------------------------------

    def voltages(self, state: SweepState) -> np.ndarray:
        """Bus voltage magnitudes in volts, aligned with ``bus_ids``."""
        return np.sqrt(np.concatenate(([state.source_v2], state.v2))) * self.v_base

    def branch_apparent(self, state: SweepState, positions: np.ndarray = None) -> np.ndarray:
        """Sending-end apparent power of branches in VA."""
        if positions is None:
            return np.hypot(state.p, state.q) * S_BASE
        return np.hypot(state.p[positions], state.q[positions]) * S_BASE

    def substation_flow(self, state: SweepState, root_p_w: float = 0.0,
                        root_q_var: float = 0.0):
        p = float(np.sum(state.p[self.head_branches])) * S_BASE + root_p_w
        q = float(np.sum(state.q[self.head_branches])) * S_BASE + root_q_var
        return p, q

    def substation_apparent(self, state: SweepState, root_p_w: float = 0.0,
                            root_q_var: float = 0.0) -> float:
        return float(np.hypot(*self.substation_flow(state, root_p_w, root_q_var)))

    def to_solution(self, state: SweepState, root_p_w: float = 0.0,
                    root_q_var: float = 0.0) -> PowerFlowSolution:
        load_p = np.concatenate(([root_p_w], state.load_p * S_BASE))
        return PowerFlowSolution(
            bus_ids=self.bus_ids,
            voltages=self.voltages(state),
            branch_keys=self.branch_keys,
            p_flow=state.p * S_BASE,
            q_flow=state.q * S_BASE,
            losses=self.r * state.current2 * S_BASE,
            substation_apparent=self.substation_apparent(state, root_p_w, root_q_var),
            iterations=state.iterations,
            max_residual=state.max_residual,
            load_p=load_p,
        )


@lru_cache(maxsize=8)
def compile_network(net: Network, tolerance_pu: float = 1e-8, max_iterations: int = 100) -> RadialSweep:
    """Cached ``RadialSweep`` for a network and solver settings."""
    return RadialSweep(net, SolverOptions(tolerance_pu, max_iterations))


def injection_arrays(sweep: RadialSweep, inj: InjectionSet):
    """Per-bus ``(P, Q, I)`` arrays of an injection set."""
    n = sweep.size
    p = np.zeros(n)
    q = np.zeros(n)
    current = np.zeros(n)
    for bus_id, (p_w, q_var) in inj.loads.items():
        sweep.net.bus(bus_id)
        i = sweep.index[bus_id]
        p[i] += p_w
        q[i] += q_var
    for bus_id, amps in inj.currents.items():
        sweep.net.bus(bus_id)
        current[sweep.index[bus_id]] += amps
    return p, q, current


def solve_distflow(net: Network, inj: InjectionSet, options: SolverOptions = None,
                   warm: Optional[SweepState] = None) -> PowerFlowSolution:
    """
    Solve the radial power flow for one instant.

    Args:
        net: A valid radial network
        inj: Bus consumption and the source voltage in volts
        options: Tolerance (max voltage change in pu) and iteration cap
        warm: Optional previous state to start from

    Returns:
        The converged solution

    Raises:
        TopologyError: If an injection names an unknown bus
        VoltageCollapseError: If a squared voltage turns non-positive
        PowerFlowError: If the sweep does not converge
    """
    options = options or SolverOptions()
    sweep = compile_network(net, options.tolerance_pu, options.max_iterations)
    p, q, current = injection_arrays(sweep, inj)
    v0_pu = inj.source_voltage / sweep.v_base[0]
    root_p = p[0] + current[0] * sweep.v_base[0] * v0_pu
    state = sweep.solve_arrays(p, q, v0_pu, current if np.any(current) else None, warm)
    return sweep.to_solution(state, root_p, q[0])


def residuals(net: Network, inj: InjectionSet, solution: PowerFlowSolution,
              options: SolverOptions = None) -> float:
    """
    Largest per-unit violation of the branch-flow equations by ``solution``.

    The solution is mapped back onto the sweep variables, so this also checks
    solutions produced elsewhere.
    """
    options = options or SolverOptions()
    sweep = compile_network(net, options.tolerance_pu, options.max_iterations)
    p, q, current = injection_arrays(sweep, inj)
    pos = np.array([solution.bus_ids.index(b) for b in sweep.bus_ids])
    v = np.asarray(solution.voltages)[pos] / sweep.v_base
    branch_pos = np.array([solution.branch_keys.index(k) for k in sweep.branch_keys])
    state = SweepState(
        v2=v[1:] ** 2,
        p=np.asarray(solution.p_flow)[branch_pos] / S_BASE,
        q=np.asarray(solution.q_flow)[branch_pos] / S_BASE,
        current2=np.zeros(len(branch_pos)),
        load_p=np.zeros(len(branch_pos)),
        source_v2=float(v[0] ** 2),
        iterations=solution.iterations,
        max_residual=solution.max_residual,
    )
    return sweep.residuals(state, p, q, current if np.any(current) else None)
