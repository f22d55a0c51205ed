"""Charger state and congestion feedback."""

from dataclasses import dataclass
from enum import Enum

from ..utils.exceptions import InvalidInputError


class ControllerKind(Enum):
    """Available charging controllers, in comparison-table order."""
    NO_CONTROL = "no_control"
    DROOP = "droop"
    C_AIMD = "c_aimd"
    D_AIMD = "d_aimd"

    @property
    def label(self) -> str:
        return _LABELS[self]


_LABELS = {
    ControllerKind.NO_CONTROL: "No-Control",
    ControllerKind.DROOP: "Droop",
    ControllerKind.C_AIMD: "C-AIMD",
    ControllerKind.D_AIMD: "D-AIMD",
}


class SignalOrigin(Enum):
    """Where a congestion decision came from."""
    BROADCAST = "broadcast"
    LOCAL_THRESHOLD = "local-threshold"


@dataclass(frozen=True)
class ChargerState:
    """Commanded current and battery state of one EV charger."""

    ev_id: str
    commanded_current: float
    soc: float
    plugged: bool = True
    max_current: float = 41.0

    def __post_init__(self):
        if not 0 <= self.commanded_current <= self.max_current + 1e-12:
            raise InvalidInputError(f"Commanded current of {self.ev_id} out of range",
                                    f"{self.commanded_current} not in [0, {self.max_current}]")
        if not 0 <= self.soc <= 1:
            raise InvalidInputError(f"SOC of {self.ev_id} out of range", f"{self.soc}")
        if (not self.plugged or self.soc >= 1) and self.commanded_current != 0:
            raise InvalidInputError(f"Charger {self.ev_id} draws current while idle",
                                    f"{self.commanded_current}")

    @property
    def active(self) -> bool:
        """Plugged in and not yet full."""
        return self.plugged and self.soc < 1

    def with_current(self, current: float) -> 'ChargerState':
        return ChargerState(self.ev_id, current, self.soc, self.plugged, self.max_current)


@dataclass(frozen=True)
class CongestionSignal:
    """Binary congestion feedback delivered to chargers."""

    congested: bool
    origin: SignalOrigin
    timestamp: float
