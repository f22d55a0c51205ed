"""Radial distribution network data model."""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple

from ..utils.exceptions import TopologyError


class BusKind(Enum):
    """Role of a bus in the feeder."""
    SUBSTATION_ROOT = "substation-root"
    PRIMARY = "primary"
    TRANSFORMER_SECONDARY = "transformer-secondary"
    SERVICE = "service"
    EV_CONNECTION = "ev-connection"


class BranchKind(Enum):
    """Series element type."""
    LINE = "line"
    TRANSFORMER = "transformer"


@dataclass(frozen=True)
class Bus:
    """A network node with its local nominal voltage in volts."""

    id: str
    kind: BusKind
    nominal_voltage: float

    def __post_init__(self):
        if not self.id:
            raise TopologyError("Bus id cannot be empty")
        if not self.nominal_voltage > 0:
            raise TopologyError(f"Bus {self.id} has invalid nominal voltage", f"{self.nominal_voltage}")

    def to_dict(self) -> dict:
        return {"id": self.id, "kind": self.kind.value, "nominal_voltage": self.nominal_voltage}

    @classmethod
    def from_dict(cls, data: dict) -> 'Bus':
        return cls(id=str(data["id"]), kind=BusKind(data["kind"]),
                   nominal_voltage=float(data["nominal_voltage"]))


@dataclass(frozen=True)
class Branch:
    """
    A series impedance between two buses.

    Resistance and reactance are in ohms; transformer impedances are referred
    to the secondary (``to_bus``) side. ``rating`` is in VA.
    """

    from_bus: str
    to_bus: str
    resistance: float
    reactance: float
    kind: BranchKind = BranchKind.LINE
    rating: Optional[float] = None
    neighborhood: Optional[int] = None

    def __post_init__(self):
        if self.resistance < 0 or self.reactance < 0:
            raise TopologyError(f"Branch {self.key} has negative impedance",
                                f"r={self.resistance}, x={self.reactance}")
        if self.resistance == 0 and self.reactance == 0:
            raise TopologyError(f"Branch {self.key} has zero impedance")
        if self.kind is BranchKind.TRANSFORMER and not (self.rating and self.rating > 0):
            raise TopologyError(f"Transformer branch {self.key} needs a positive rating")

    @property
    def key(self) -> str:
        """Stable identifier ``from->to``."""
        return f"{self.from_bus}->{self.to_bus}"

    def to_dict(self) -> dict:
        data = {
            "from": self.from_bus,
            "to": self.to_bus,
            "r": self.resistance,
            "x": self.reactance,
            "kind": self.kind.value,
            "rating": self.rating,
        }
        if self.neighborhood is not None:
            data["neighborhood"] = self.neighborhood
        return data

    @classmethod
    def from_dict(cls, data: dict) -> 'Branch':
        rating = data.get("rating")
        neighborhood = data.get("neighborhood")
        return cls(
            from_bus=str(data["from"]),
            to_bus=str(data["to"]),
            resistance=float(data["r"]),
            reactance=float(data["x"]),
            kind=BranchKind(data.get("kind", "line")),
            rating=float(rating) if rating is not None else None,
            neighborhood=int(neighborhood) if neighborhood is not None else None,
        )


class Network:
    """
    Immutable radial network of buses and branches.

    Construction checks that ids are unique and branch endpoints exist; the
    tree property itself is checked by ``src.grid.validate_radial``.
    """

    def __init__(
        self,
        buses: Iterable[Bus],
        branches: Iterable[Branch],
        root: str,
        substation_rating: float = 2.5e6,
    ):
        self._buses: Tuple[Bus, ...] = tuple(buses)
        self._branches: Tuple[Branch, ...] = tuple(branches)
        self._root = root
        self._substation_rating = float(substation_rating)

        self._bus_index: Dict[str, Bus] = {}
        for bus in self._buses:
            if bus.id in self._bus_index:
                raise TopologyError("Duplicate bus id", bus.id)
            self._bus_index[bus.id] = bus

        if root not in self._bus_index:
            raise TopologyError("Root bus is not part of the network", root)
        if not self._substation_rating > 0:
            raise TopologyError("Substation rating must be positive", f"{substation_rating}")

        self._children: Dict[str, List[Branch]] = {bus.id: [] for bus in self._buses}
        self._incoming: Dict[str, List[Branch]] = {bus.id: [] for bus in self._buses}
        for branch in self._branches:
            for end in (branch.from_bus, branch.to_bus):
                if end not in self._bus_index:
                    raise TopologyError(f"Branch {branch.key} references unknown bus", end)
            self._children[branch.from_bus].append(branch)
            self._incoming[branch.to_bus].append(branch)

    # -- basic accessors -------------------------------------------------

    @property
    def buses(self) -> Tuple[Bus, ...]:
        return self._buses

    @property
    def branches(self) -> Tuple[Branch, ...]:
        return self._branches

    @property
    def root(self) -> str:
        return self._root

    @property
    def substation_rating(self) -> float:
        return self._substation_rating

    def bus(self, bus_id: str) -> Bus:
        """Look up a bus by id."""
        try:
            return self._bus_index[bus_id]
        except KeyError:
            raise TopologyError("Unknown bus id", str(bus_id)) from None

    def has_bus(self, bus_id: str) -> bool:
        return bus_id in self._bus_index

    def children(self, bus_id: str) -> List[Branch]:
        """Branches leaving ``bus_id`` away from the root."""
        self.bus(bus_id)
        return list(self._children[bus_id])

    def parent_branch(self, bus_id: str) -> Optional[Branch]:
        """The branch feeding ``bus_id``, or None for the root."""
        self.bus(bus_id)
        incoming = self._incoming[bus_id]
        return incoming[0] if incoming else None

    def incoming(self, bus_id: str) -> List[Branch]:
        return list(self._incoming[bus_id])

    # -- derived views ---------------------------------------------------

    @property
    def houses(self) -> List[str]:
        """Service bus ids in construction order; one per house."""
        return [bus.id for bus in self._buses if bus.kind is BusKind.SERVICE]

    def ev_node(self, house_id: str) -> str:
        """
        Bus where the EV charger of ``house_id`` connects.

        That is the house's EV connection bus when it has one, otherwise the
        service bus itself.
        """
        for branch in self.children(house_id):
            if self._bus_index[branch.to_bus].kind is BusKind.EV_CONNECTION:
                return branch.to_bus
        return house_id

    @property
    def end_nodes(self) -> List[str]:
        """EV connection point of every house, in house order."""
        return [self.ev_node(house) for house in self.houses]

    @property
    def transformers(self) -> List[Branch]:
        """Local distribution transformer branches in construction order."""
        return [branch for branch in self._branches if branch.kind is BranchKind.TRANSFORMER]

    @property
    def house_count(self) -> int:
        return len(self.houses)

    @property
    def load_point_count(self) -> int:
        """Household plus EV connection points; a shared bus counts once."""
        return len(set(self.houses) | set(self.end_nodes))

    @property
    def transformer_count(self) -> int:
        return len(self.transformers)

    @property
    def neighborhood_count(self) -> int:
        groups = {b.neighborhood for b in self.transformers if b.neighborhood is not None}
        return len(groups)

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        """Topology document: buses, branches, root, substation rating."""
        return {
            "buses": [bus.to_dict() for bus in self._buses],
            "branches": [branch.to_dict() for branch in self._branches],
            "root": self._root,
            "substation_rating": self._substation_rating,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'Network':
        try:
            return cls(
                buses=[Bus.from_dict(b) for b in data["buses"]],
                branches=[Branch.from_dict(b) for b in data["branches"]],
                root=str(data["root"]),
                substation_rating=float(data.get("substation_rating", 2.5e6)),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise TopologyError("Malformed topology document", str(e)) from e

    def __eq__(self, other) -> bool:
        if not isinstance(other, Network):
            return False
        return self.to_dict() == other.to_dict()

    def __hash__(self) -> int:
        return hash((self._root, self._buses, self._branches))

    def __repr__(self) -> str:
        return (f"Network(buses={len(self._buses)}, branches={len(self._branches)}, "
                f"houses={self.house_count}, transformers={self.transformer_count})")


def to_per_unit(volts: float, nominal_voltage: float) -> float:
    """Convert a voltage in volts to per-unit of its nominal base."""
    return volts / nominal_voltage


def from_per_unit(per_unit: float, nominal_voltage: float) -> float:
    """Convert a per-unit voltage back to volts."""
    return per_unit * nominal_voltage
