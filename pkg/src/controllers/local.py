"""Controllers that need no congestion feedback: uncontrolled charging and voltage droop."""

import numpy as np

from ..models.charging import ControllerKind
from .base import ChargingController, Observation
from .decisions import droop_power


class NoControlController(ChargingController):
    """Charge at the full current from plug-in until full."""

    kind = ControllerKind.NO_CONTROL

    def arrival_current(self, voltage, max_current):
        return np.minimum(self.params.i_max_a, max_current)

    def decide(self, observation: Observation, currents, due):
        return np.where(due, np.minimum(self.params.i_max_a, self._fleet.max_current), currents)


class DroopController(ChargingController):
    """
    Charging power follows the local voltage along the droop curve.

    Power is converted to current at the nominal charger voltage and capped
    at the charger's current limit. On each of its ticks a charger closes the
    ``smoothing`` fraction of the gap between its command and the curve; a
    charger plugging in starts from 0 A.
    """

    kind = ControllerKind.DROOP

    def _target(self, voltage, max_current):
        power = droop_power(voltage, self.config.droop)
        return np.minimum(power / self.config.nominal_ev_voltage, max_current)

    def arrival_current(self, voltage, max_current):
        return self.config.droop.smoothing * self._target(voltage, max_current)

    def decide(self, observation: Observation, currents, due):
        target = self._target(observation.ev_voltage, self._fleet.max_current)
        stepped = currents + self.config.droop.smoothing * (target - currents)
        return np.where(due, stepped, currents)
