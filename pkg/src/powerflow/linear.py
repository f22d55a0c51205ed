"""Loss-free analytic voltage relations on a single feeder chain."""

import math
from typing import Tuple

import numpy as np

from ..grid.topology import path_branches
from ..models.network import Network
from ..models.power import FeederLine, InjectionSet
from ..utils.exceptions import InvalidInputError, VoltageCollapseError


def apparent_power(p: float, q: float) -> float:
    """Magnitude of the complex power ``p + jq``."""
    return math.hypot(p, q)


def lindistflow_voltages(line: FeederLine, p_head: float, q_head: float) -> np.ndarray:
    """
    Node voltages from the linearized recursion, nodes 1..n.

    The flow into branch ``i + 1`` is the head flow minus everything consumed
    at nodes 1..i; losses are neglected.

    Raises:
        VoltageCollapseError: If a squared voltage turns negative
    """
    p_nodes = line.phi_p * p_head
    q_nodes = line.phi_q * q_head if q_head != 0 else np.zeros(line.nodes)
    v2 = line.source_voltage ** 2
    p_flow = p_head
    q_flow = q_head
    voltages = np.empty(line.nodes)
    for i in range(line.nodes):
        v2 = v2 - 2.0 * (line.r[i] * p_flow + line.x[i] * q_flow)
        if v2 < 0:
            raise VoltageCollapseError("Squared voltage turned negative", f"node {i + 1}")
        voltages[i] = math.sqrt(v2)
        p_flow -= p_nodes[i]
        q_flow -= q_nodes[i]
    return voltages


def closed_form_terms(line: FeederLine, node: int) -> Tuple[float, float, float, float]:
    """
    Cumulative impedances and consumption-weighted sums up to ``node``.

    Returns ``(R, X, PP, QQ)`` where ``PP = sum_{j<node} (phi_1 + .. + phi_j) r_{j+1}``
    and ``QQ`` is the reactive counterpart.
    """
    if not 1 <= node <= line.nodes:
        raise InvalidInputError("Node index out of range", f"{node} not in [1, {line.nodes}]")
    resistance = float(np.sum(line.r[:node]))
    reactance = float(np.sum(line.x[:node]))
    cum_p = np.cumsum(line.phi_p)[:node - 1]
    cum_q = np.cumsum(line.phi_q)[:node - 1]
    weighted_p = float(np.dot(cum_p, line.r[1:node]))
    weighted_q = float(np.dot(cum_q, line.x[1:node]))
    return resistance, reactance, weighted_p, weighted_q


def closed_form_voltage(line: FeederLine, node: int, p_head: float, q_head: float) -> float:
    """
    Voltage at ``node`` as an affine function of the head flow.

    ``V^2 = V0^2 - 2 P (R - PP) - 2 Q (X - QQ)``; with no reactive head flow
    the reactive term vanishes whatever the reactive shares are.

    Raises:
        InvalidInputError: If ``node`` is outside 1..n
        VoltageCollapseError: If the squared voltage is negative
    """
    resistance, reactance, weighted_p, weighted_q = closed_form_terms(line, node)
    v2 = line.source_voltage ** 2 - 2.0 * p_head * (resistance - weighted_p)
    if q_head != 0:
        v2 -= 2.0 * q_head * (reactance - weighted_q)
    if v2 < 0:
        raise VoltageCollapseError("Squared voltage turned negative", f"node {node}")
    return math.sqrt(v2)


def feeder_line_from_path(net: Network, bus_id: str, inj: InjectionSet) -> FeederLine:
    """
    Reduce the root path of ``bus_id`` to a single chain.

    Loads hanging off the path are lumped into the path node where their
    subtree branches off. Impedances and the source voltage are referred to
    the voltage base of ``bus_id``.
    """
    target = net.bus(bus_id)
    keys = path_branches(net, bus_id)
    if not keys:
        raise InvalidInputError("Bus has no root path", bus_id)
    by_key = {branch.key: branch for branch in net.branches}
    chain = [by_key[key] for key in keys]
    path_nodes = [branch.to_bus for branch in chain]

    p_bus = {}
    q_bus = {}
    for load_bus, (p, q) in inj.loads.items():
        net.bus(load_bus)
        p_bus[load_bus] = p_bus.get(load_bus, 0.0) + p
        q_bus[load_bus] = q_bus.get(load_bus, 0.0) + q
    for load_bus, amps in inj.currents.items():
        p_bus[load_bus] = p_bus.get(load_bus, 0.0) + net.bus(load_bus).nominal_voltage * amps

    def subtree_sum(start: str, skip: str, values) -> float:
        total = 0.0
        stack = [start]
        while stack:
            bus = stack.pop()
            if bus == skip:
                continue
            total += values.get(bus, 0.0)
            stack.extend(branch.to_bus for branch in net.children(bus))
        return total

    p_lumped = []
    q_lumped = []
    for k, node in enumerate(path_nodes):
        skip = path_nodes[k + 1] if k + 1 < len(path_nodes) else None
        p_lumped.append(subtree_sum(node, skip, p_bus))
        q_lumped.append(subtree_sum(node, skip, q_bus))

    scale = np.array([(target.nominal_voltage / net.bus(b.to_bus).nominal_voltage) ** 2 for b in chain])
    r = np.array([b.resistance for b in chain]) * scale
    x = np.array([b.reactance for b in chain]) * scale
    v0 = inj.source_voltage / net.bus(net.root).nominal_voltage * target.nominal_voltage
    return FeederLine.from_loads(r, x, p_lumped, q_lumped, v0)
