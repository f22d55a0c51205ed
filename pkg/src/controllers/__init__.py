"""Charging controllers behind one vectorized contract."""

from .base import ChargingController, FleetContext, Observation
from .decisions import (
    aimd_step,
    aimd_currents,
    daimd_decide,
    caimd_decide,
    droop_power,
    no_control_current,
)
from .local import NoControlController, DroopController
from .aimd import CentralizedAimdController, DistributedAimdController
from .manager import ControllerManager
from .harness import ToyRunResult, fairness_toy_harness

__all__ = [
    "ChargingController",
    "FleetContext",
    "Observation",
    "aimd_step",
    "aimd_currents",
    "daimd_decide",
    "caimd_decide",
    "droop_power",
    "no_control_current",
    "NoControlController",
    "DroopController",
    "CentralizedAimdController",
    "DistributedAimdController",
    "ControllerManager",
    "ToyRunResult",
    "fairness_toy_harness",
]
