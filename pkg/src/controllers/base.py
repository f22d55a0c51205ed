"""Abstract base class for charging controllers."""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..models.charging import ControllerKind
from ..models.config import ControllerConfig
from ..models.learning import ThresholdTable


@dataclass
class FleetContext:
    """What a controller learns about the fleet before a run."""

    ev_ids: Tuple[str, ...]
    ev_nodes: Tuple[str, ...]
    max_current: np.ndarray
    substation_rating: float
    thresholds: Optional[ThresholdTable] = None

    @property
    def size(self) -> int:
        return len(self.ev_ids)


@dataclass
class Observation:
    """Measurements available at a decision tick."""

    time_s: float
    ev_voltage: np.ndarray
    substation_apparent: float


class ChargingController(ABC):
    """
    Decides commanded currents for the whole fleet.

    Controllers are stateful only in their communication counter; commanded
    currents are owned by the engine and passed in on every call. Each
    charger runs its own T_a clock, so a call covers only the chargers
    whose tick it is.
    """

    kind: ControllerKind

    def __init__(self, config: ControllerConfig = None):
        self.config = config or ControllerConfig(controller=self.kind.value)
        self.comm_events = 0
        self._fleet: Optional[FleetContext] = None

    @property
    def params(self):
        return self.config.aimd

    def prepare(self, fleet: FleetContext) -> None:
        """Bind the controller to a fleet; resets the communication counter."""
        self._fleet = fleet
        self.comm_events = 0

    @abstractmethod
    def arrival_current(self, voltage: np.ndarray, max_current: np.ndarray) -> np.ndarray:
        """Currents of chargers plugging in, given their last local voltages.

        Args:
            voltage: Local voltage of each arriving charger
            max_current: Current limit of each arriving charger

        Returns:
            Commanded currents in amps
        """

    def period_started(self, time_s: float) -> None:
        """Called at the start of every global T_a period."""

    @abstractmethod
    def decide(self, observation: Observation, currents: np.ndarray, due: np.ndarray) -> np.ndarray:
        """New commanded currents for the chargers whose decision tick it is.

        Args:
            observation: Measurements from the latest solved state
            currents: Currently commanded currents of the whole fleet
            due: Mask of plugged-in, not full chargers at their tick

        Returns:
            Commanded currents of the whole fleet; chargers outside ``due``
            keep their current command
        """

    def name(self) -> str:
        return self.kind.label

    def __str__(self) -> str:
        return self.name()
