"""Radial structure checks and path quantities."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import networkx as nx

from ..models.network import BranchKind, BusKind, Network
from ..utils.exceptions import TopologyError

logger = logging.getLogger(__name__)


def _name_ids(ids: List[str], limit: int = 10) -> str:
    ids = sorted(ids)
    shown = ", ".join(ids[:limit])
    if len(ids) > limit:
        shown += f" (+{len(ids) - limit} more)"
    return shown


@dataclass
class RadialReport:
    """Outcome of a successful radial validation."""

    root: str
    bus_count: int
    branch_count: int
    paths: Dict[str, List[str]] = field(default_factory=dict)
    transformers_on_path: Dict[str, int] = field(default_factory=dict)

    @property
    def depths(self) -> Dict[str, int]:
        return {bus: len(path) - 1 for bus, path in self.paths.items()}

    @property
    def max_depth(self) -> int:
        return max(self.depths.values()) if self.paths else 0

    def path(self, bus_id: str) -> List[str]:
        try:
            return list(self.paths[bus_id])
        except KeyError:
            raise TopologyError("Unknown bus id", bus_id) from None

    def to_dict(self) -> dict:
        return {
            "root": self.root,
            "buses": self.bus_count,
            "branches": self.branch_count,
            "max_depth": self.max_depth,
            "depths": self.depths,
            "paths": self.paths,
            "transformers_on_path": self.transformers_on_path,
        }


def _graphs(net: Network) -> Tuple[nx.MultiGraph, nx.DiGraph]:
    undirected = nx.MultiGraph()
    directed = nx.DiGraph()
    for bus in net.buses:
        undirected.add_node(bus.id)
        directed.add_node(bus.id)
    for branch in net.branches:
        undirected.add_edge(branch.from_bus, branch.to_bus, key=branch.key)
        directed.add_edge(branch.from_bus, branch.to_bus, key=branch.key)
    return undirected, directed


def validate_radial(net: Network) -> RadialReport:
    """
    Confirm that ``net`` is a tree hanging from its root.

    Returns:
        A report with the root path of every bus

    Raises:
        TopologyError: On a cycle, a disconnected bus or more than one root,
            naming the offending ids; also when a service bus feeds a
            non-leaf or an EV connection is not a leaf behind a service bus
    """
    undirected, directed = _graphs(net)

    try:
        cycle = nx.find_cycle(undirected)
    except nx.NetworkXNoCycle:
        cycle = None
    if cycle:
        edges = [key for _, _, key, *_ in cycle]
        raise TopologyError("Cycle detected", _name_ids(edges))

    root_kind = [bus.id for bus in net.buses if bus.kind is BusKind.SUBSTATION_ROOT]
    if net.bus(net.root).kind is not BusKind.SUBSTATION_ROOT:
        raise TopologyError("Root bus is not a substation root", net.root)
    if len(root_kind) > 1:
        raise TopologyError("Multiple roots", _name_ids(root_kind))
    if directed.in_degree(net.root) > 0:
        raise TopologyError("Root bus has an incoming branch", net.root)
    sources = [node for node in directed.nodes
               if node != net.root and directed.in_degree(node) == 0 and directed.out_degree(node) > 0]
    if sources:
        raise TopologyError("Multiple roots", _name_ids(sources + [net.root]))

    reachable = nx.node_connected_component(undirected, net.root)
    disconnected = [bus.id for bus in net.buses if bus.id not in reachable]
    if disconnected:
        raise TopologyError("Disconnected bus", _name_ids(disconnected))

    for bus in net.buses:
        if bus.kind is not BusKind.SERVICE:
            continue
        for branch in net.children(bus.id):
            if net.children(branch.to_bus):
                raise TopologyError("Service bus feeds a non-leaf bus", branch.key)
    for bus in net.buses:
        if bus.kind is not BusKind.EV_CONNECTION:
            continue
        if net.children(bus.id):
            raise TopologyError("EV connection bus is not a leaf", bus.id)
        if net.bus(net.parent_branch(bus.id).from_bus).kind is not BusKind.SERVICE:
            raise TopologyError("EV connection bus is not fed by a service bus", bus.id)

    paths = nx.single_source_shortest_path(directed, net.root)
    transformer_edges = {(b.from_bus, b.to_bus) for b in net.branches
                         if b.kind is BranchKind.TRANSFORMER}
    on_path = {}
    for bus_id in net.houses:
        path = paths[bus_id]
        on_path[bus_id] = sum(1 for edge in zip(path, path[1:]) if edge in transformer_edges)

    ordered = {bus.id: paths[bus.id] for bus in net.buses}
    report = RadialReport(root=net.root, bus_count=len(net.buses), branch_count=len(net.branches),
                          paths=ordered, transformers_on_path=on_path)
    logger.debug("Radial check passed: %d buses, max depth %d", report.bus_count, report.max_depth)
    return report


def path_impedance(net: Network, bus_id: str, refer_to_bus: bool = False) -> Tuple[float, float]:
    """
    Cumulative series impedance from the root to ``bus_id`` in ohms.

    With ``refer_to_bus`` each branch impedance is first referred to the
    voltage base of ``bus_id``, which makes the sum meaningful across
    transformer branches.

    Raises:
        TopologyError: If the bus is unknown
    """
    target = net.bus(bus_id)
    resistance = 0.0
    reactance = 0.0
    current = bus_id
    visited = set()
    while current != net.root:
        if current in visited:
            raise TopologyError("Cycle detected", current)
        visited.add(current)
        branch = net.parent_branch(current)
        if branch is None:
            raise TopologyError("Disconnected bus", current)
        scale = 1.0
        if refer_to_bus:
            scale = (target.nominal_voltage / net.bus(branch.to_bus).nominal_voltage) ** 2
        resistance += branch.resistance * scale
        reactance += branch.reactance * scale
        current = branch.from_bus
    return resistance, reactance


def path_branches(net: Network, bus_id: str) -> List[str]:
    """Branch keys from the root down to ``bus_id``."""
    net.bus(bus_id)
    keys = []
    current = bus_id
    while current != net.root:
        branch = net.parent_branch(current)
        if branch is None:
            raise TopologyError("Disconnected bus", current)
        keys.append(branch.key)
        current = branch.from_bus
    return list(reversed(keys))
