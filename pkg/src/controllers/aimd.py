"""Centralized and distributed AIMD charging."""

import logging

import numpy as np

from ..models.charging import ControllerKind
from ..utils.exceptions import InvalidConfigurationError
from .base import ChargingController, FleetContext, Observation
from .decisions import aimd_currents, caimd_decide, daimd_decide

logger = logging.getLogger(__name__)


class _AimdController(ChargingController):

    def arrival_current(self, voltage, max_current):
        return np.minimum(np.full(len(max_current), self.params.i_init_a), max_current)

    def _update(self, currents, congested, due):
        new = aimd_currents(currents, congested, self.params, self._fleet.max_current)
        return np.where(due, new, currents)


class CentralizedAimdController(_AimdController):
    """
    Every charger follows the congestion flag of the substation.

    Chargers request the flag at their own ticks and read it from the latest
    solved state. Each global T_a period with a non-empty fleet counts as
    one broadcast.
    """

    kind = ControllerKind.C_AIMD

    def prepare(self, fleet: FleetContext) -> None:
        super().prepare(fleet)
        self.capacity = self.config.capacity_target(fleet.substation_rating)

    def period_started(self, time_s: float) -> None:
        if self._fleet.size:
            self.comm_events += 1

    def decide(self, observation: Observation, currents, due):
        signal = caimd_decide(observation.substation_apparent, self.capacity, observation.time_s)
        return self._update(currents, signal.congested, due)


class DistributedAimdController(_AimdController):
    """
    Each charger compares its local voltage with its trained threshold.

    The thresholds come from one fetch of historical substation data, which
    is the only communication of the run.
    """

    kind = ControllerKind.D_AIMD

    def prepare(self, fleet: FleetContext) -> None:
        super().prepare(fleet)
        if not fleet.size:
            self.v_th = np.zeros(0)
            return
        if fleet.thresholds is None:
            raise InvalidConfigurationError("D-AIMD requires trained thresholds")
        self.v_th = fleet.thresholds.thresholds_for(list(fleet.ev_nodes))
        self.comm_events = 1
        logger.debug("D-AIMD thresholds bound for %d chargers", fleet.size)

    def decide(self, observation: Observation, currents, due):
        congested = daimd_decide(observation.ev_voltage, self.v_th, self.params.v_min_v)
        return self._update(currents, congested, due)
