"""Power-flow inputs and results."""

from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Tuple

import numpy as np

from ..utils.exceptions import InvalidInputError


@dataclass(frozen=True)
class InjectionSet:
    """
    Bus consumption for one instant.

    ``loads`` maps a bus id to ``(P watts, Q vars)`` consumed at that bus.
    ``currents`` maps a bus id to a constant-current draw in amps at unity
    power factor (EV chargers under the constant-current load model).
    """

    loads: Mapping[str, Tuple[float, float]] = field(default_factory=dict)
    source_voltage: float = 4800.0
    currents: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not self.source_voltage > 0:
            raise InvalidInputError("Source voltage must be positive", f"{self.source_voltage}")
        for bus_id, (p, q) in self.loads.items():
            if not (np.isfinite(p) and np.isfinite(q)):
                raise InvalidInputError(f"Load at bus {bus_id} is not finite", f"P={p}, Q={q}")
        for bus_id, amps in self.currents.items():
            if not np.isfinite(amps) or amps < 0:
                raise InvalidInputError(f"Current draw at bus {bus_id} is invalid", f"{amps}")

    def total_active(self) -> float:
        return float(sum(p for p, _ in self.loads.values()))

    def total_reactive(self) -> float:
        return float(sum(q for _, q in self.loads.values()))


@dataclass
class PowerFlowSolution:
    """
    Solved state of the network for one instant.

    Arrays are aligned with ``bus_ids`` (voltages, volts) and ``branch_keys``
    (sending-end flows, watts and vars). ``losses`` holds the series loss of
    each branch in watts.
    """

    bus_ids: Tuple[str, ...]
    voltages: np.ndarray
    branch_keys: Tuple[str, ...]
    p_flow: np.ndarray
    q_flow: np.ndarray
    losses: np.ndarray
    substation_apparent: float
    iterations: int
    max_residual: float
    load_p: Optional[np.ndarray] = None

    def __post_init__(self):
        self._bus_pos = {bus_id: i for i, bus_id in enumerate(self.bus_ids)}
        self._branch_pos = {key: i for i, key in enumerate(self.branch_keys)}

    @property
    def voltage(self) -> Dict[str, float]:
        """Bus id to voltage magnitude in volts."""
        return {bus_id: float(v) for bus_id, v in zip(self.bus_ids, self.voltages)}

    @property
    def branch_flow(self) -> Dict[str, Tuple[float, float]]:
        """Branch key to sending-end (P, Q)."""
        return {key: (float(p), float(q))
                for key, p, q in zip(self.branch_keys, self.p_flow, self.q_flow)}

    def voltage_at(self, bus_id: str) -> float:
        try:
            return float(self.voltages[self._bus_pos[bus_id]])
        except KeyError:
            raise InvalidInputError("Unknown bus id", str(bus_id)) from None

    def flow_on(self, branch_key: str) -> Tuple[float, float]:
        try:
            i = self._branch_pos[branch_key]
        except KeyError:
            raise InvalidInputError("Unknown branch", str(branch_key)) from None
        return float(self.p_flow[i]), float(self.q_flow[i])

    def branch_losses(self) -> Dict[str, float]:
        """Active series loss per branch in watts."""
        return {key: float(loss) for key, loss in zip(self.branch_keys, self.losses)}

    @property
    def total_losses(self) -> float:
        return float(np.sum(self.losses))

    def min_voltage(self) -> Tuple[str, float]:
        i = int(np.argmin(self.voltages))
        return self.bus_ids[i], float(self.voltages[i])


@dataclass
class FeederLine:
    """
    A single-chain feeder for the analytic voltage relations.

    Node 0 is the source. Branch ``i`` (1-based) connects node ``i-1`` to
    node ``i`` with impedance ``r[i-1] + j x[i-1]`` ohms. ``phi_p[i-1]`` is
    the share of the head active power consumed at node ``i``; ``phi_q``
    likewise for reactive power.
    """

    r: np.ndarray
    x: np.ndarray
    phi_p: np.ndarray
    phi_q: np.ndarray
    source_voltage: float

    def __post_init__(self):
        self.r = np.asarray(self.r, dtype=float)
        self.x = np.asarray(self.x, dtype=float)
        self.phi_p = np.asarray(self.phi_p, dtype=float)
        self.phi_q = np.asarray(self.phi_q, dtype=float)
        n = len(self.r)
        if n == 0:
            raise InvalidInputError("Feeder line needs at least one branch")
        for name in ("x", "phi_p", "phi_q"):
            if len(getattr(self, name)) != n:
                raise InvalidInputError(f"Feeder line vector {name} has the wrong length",
                                        f"{len(getattr(self, name))} != {n}")
        if np.any(self.r < 0) or np.any(self.x < 0):
            raise InvalidInputError("Feeder line impedances must be non-negative")
        for name in ("phi_p", "phi_q"):
            phi = getattr(self, name)
            if np.any(phi < -1e-12) or np.any(phi > 1 + 1e-12):
                raise InvalidInputError(f"{name} components must lie in [0, 1]")
            if phi.sum() > 1 + 1e-9:
                raise InvalidInputError(f"{name} must sum to at most 1", f"{phi.sum()}")
        if not self.source_voltage > 0:
            raise InvalidInputError("Source voltage must be positive", f"{self.source_voltage}")

    @property
    def nodes(self) -> int:
        return len(self.r)

    @property
    def resistance_total(self) -> float:
        return float(self.r.sum())

    @property
    def reactance_total(self) -> float:
        return float(self.x.sum())

    @classmethod
    def from_loads(cls, r, x, p_loads, q_loads, source_voltage: float) -> 'FeederLine':
        """Build a line from per-node consumption instead of shares."""
        p_loads = np.asarray(p_loads, dtype=float)
        q_loads = np.asarray(q_loads, dtype=float)
        p_total = p_loads.sum()
        q_total = q_loads.sum()
        phi_p = p_loads / p_total if p_total > 0 else np.zeros_like(p_loads)
        phi_q = q_loads / q_total if q_total > 0 else np.zeros_like(q_loads)
        return cls(r=r, x=x, phi_p=phi_p, phi_q=phi_q, source_voltage=source_voltage)
