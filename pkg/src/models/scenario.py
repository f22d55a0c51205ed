"""Household load profiles and EV fleet specifications."""

from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from ..utils.exceptions import ScenarioError


@dataclass
class HouseholdProfile:
    """Per-minute active power of one house, in watts."""

    house_id: str
    power_w: np.ndarray
    power_factor: float = 0.9

    def __post_init__(self):
        self.power_w = np.asarray(self.power_w, dtype=float)
        if self.power_w.ndim != 1 or len(self.power_w) == 0:
            raise ScenarioError(f"Profile for house {self.house_id} must be a non-empty series")
        if not np.all(np.isfinite(self.power_w)):
            raise ScenarioError(f"Profile for house {self.house_id} has non-finite values")
        negative = np.flatnonzero(self.power_w < 0)
        if negative.size:
            raise ScenarioError(f"Negative power for house {self.house_id}",
                                f"minute {int(negative[0])}")
        if not 0 < self.power_factor <= 1:
            raise ScenarioError(f"Invalid power factor for house {self.house_id}",
                                f"{self.power_factor}")

    @property
    def minutes(self) -> int:
        return len(self.power_w)

    @property
    def reactive_var(self) -> np.ndarray:
        """Lagging reactive power implied by the power factor."""
        return self.power_w * np.tan(np.arccos(self.power_factor))

    def __eq__(self, other) -> bool:
        if not isinstance(other, HouseholdProfile):
            return NotImplemented
        return (self.house_id == other.house_id
                and self.power_factor == other.power_factor
                and np.array_equal(self.power_w, other.power_w))


@dataclass(frozen=True)
class EvSpec:
    """One electric vehicle and its charging session."""

    ev_id: str
    house_id: str
    arrival_s: int
    departure_s: int
    initial_soc: float
    battery_capacity_wh: float = 72000.0
    charger_rating_w: float = 10000.0
    max_current_a: float = 41.0

    def __post_init__(self):
        if not self.arrival_s < self.departure_s:
            raise ScenarioError(f"EV {self.ev_id} must arrive before it departs",
                                f"arrival={self.arrival_s}, departure={self.departure_s}")
        if self.arrival_s < 0:
            raise ScenarioError(f"EV {self.ev_id} arrives before the start", f"{self.arrival_s}")
        if not 0 <= self.initial_soc < 1:
            raise ScenarioError(f"EV {self.ev_id} initial SOC must lie in [0, 1)",
                                f"{self.initial_soc}")
        for name in ("battery_capacity_wh", "charger_rating_w", "max_current_a"):
            if not getattr(self, name) > 0:
                raise ScenarioError(f"EV {self.ev_id} {name} must be positive")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ev_id": self.ev_id,
            "house_id": self.house_id,
            "arrival_s": self.arrival_s,
            "departure_s": self.departure_s,
            "initial_soc": self.initial_soc,
            "battery_capacity_wh": self.battery_capacity_wh,
            "charger_rating_w": self.charger_rating_w,
            "max_current_a": self.max_current_a,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'EvSpec':
        return cls(
            ev_id=str(data["ev_id"]),
            house_id=str(data["house_id"]),
            arrival_s=int(data["arrival_s"]),
            departure_s=int(data["departure_s"]),
            initial_soc=float(data["initial_soc"]),
            battery_capacity_wh=float(data.get("battery_capacity_wh", 72000.0)),
            charger_rating_w=float(data.get("charger_rating_w", 10000.0)),
            max_current_a=float(data.get("max_current_a", 41.0)),
        )


@dataclass
class Scenario:
    """
    Seeded dataset shared by every controller run.

    ``ev_order`` lists house ids in the order houses receive an EV as
    penetration grows, so lower-penetration variants are nested subsets.
    """

    seed: int
    horizon_s: int
    profiles: List[HouseholdProfile]
    evs: List[EvSpec]
    ev_penetration: float
    start_hour: float = 16.0
    scale_factor: float = 1.0
    ev_order: List[str] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.horizon_s <= 0 or self.horizon_s % 60:
            raise ScenarioError("Horizon must be a positive whole number of minutes",
                                f"{self.horizon_s}")
        if not 0 <= self.ev_penetration <= 1:
            raise ScenarioError("EV penetration must lie in [0, 1]", f"{self.ev_penetration}")
        houses = [p.house_id for p in self.profiles]
        if len(set(houses)) != len(houses):
            raise ScenarioError("Duplicate household profile")
        minutes = self.horizon_s // 60
        for profile in self.profiles:
            if profile.minutes < minutes:
                raise ScenarioError(f"Profile for house {profile.house_id} does not cover the horizon",
                                    f"{profile.minutes} < {minutes} minutes")
        known = set(houses)
        seen = set()
        for ev in self.evs:
            if ev.house_id not in known:
                raise ScenarioError(f"EV {ev.ev_id} is attached to an unknown house", ev.house_id)
            if ev.ev_id in seen:
                raise ScenarioError("Duplicate EV id", ev.ev_id)
            seen.add(ev.ev_id)
            if ev.departure_s > self.horizon_s:
                raise ScenarioError(f"EV {ev.ev_id} departs after the horizon",
                                    f"{ev.departure_s} > {self.horizon_s}")

    @property
    def house_ids(self) -> List[str]:
        return [p.house_id for p in self.profiles]

    @property
    def minutes(self) -> int:
        return self.horizon_s // 60

    def profile(self, house_id: str) -> HouseholdProfile:
        for profile in self.profiles:
            if profile.house_id == house_id:
                return profile
        raise ScenarioError("Unknown house id", house_id)

    def load_matrix(self) -> np.ndarray:
        """Household active power as a (minutes, houses) array in watts."""
        return np.column_stack([p.power_w[:self.minutes] for p in self.profiles])

    def power_factors(self) -> np.ndarray:
        return np.array([p.power_factor for p in self.profiles])

    def spec_dict(self) -> Dict[str, Any]:
        """JSON document of everything except the profile values."""
        return {
            "seed": self.seed,
            "horizon_s": self.horizon_s,
            "start_hour": self.start_hour,
            "ev_penetration": self.ev_penetration,
            "scale_factor": self.scale_factor,
            "houses": [{"house_id": p.house_id, "power_factor": p.power_factor}
                       for p in self.profiles],
            "ev_order": list(self.ev_order),
            "evs": [ev.to_dict() for ev in self.evs],
            "metadata": dict(self.metadata),
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scenario):
            return NotImplemented
        return self.spec_dict() == other.spec_dict() and self.profiles == other.profiles

    def __repr__(self) -> str:
        return (f"Scenario(seed={self.seed}, houses={len(self.profiles)}, evs={len(self.evs)}, "
                f"penetration={self.ev_penetration})")

