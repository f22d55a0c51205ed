"""Pure charging decisions shared by the controllers."""

import numpy as np

from ..models.charging import ChargerState, CongestionSignal, SignalOrigin
from ..models.config import AimdParams, DroopCurve


def aimd_step(state: ChargerState, congested: bool, params: AimdParams) -> ChargerState:
    """
    One additive-increase / multiplicative-decrease update.

    ``I' = min(I + alpha, I_max)`` without congestion and ``I' = beta I``
    with it. An idle charger stays at 0 A.
    """
    if not state.active:
        return state.with_current(0.0)
    limit = min(params.i_max_a, state.max_current)
    if congested:
        current = params.beta * state.commanded_current
    else:
        current = min(state.commanded_current + params.alpha, limit)
    return state.with_current(current)


def aimd_currents(currents: np.ndarray, congested, params: AimdParams,
                  max_current: np.ndarray) -> np.ndarray:
    """Vectorized ``aimd_step``; ``congested`` is a flag or a per-charger mask."""
    limit = np.minimum(params.i_max_a, max_current)
    return np.where(congested, params.beta * currents, np.minimum(currents + params.alpha, limit))


def daimd_decide(voltage, v_th, v_min):
    """
    Local congestion test of a distributed AIMD charger.

    Not congested only when the voltage is strictly above both the trained
    threshold and the minimum voltage. Works elementwise on arrays.
    """
    clear = np.logical_and(np.greater(voltage, v_th), np.greater(voltage, v_min))
    result = np.logical_not(clear)
    return bool(result) if np.ndim(result) == 0 else result


def caimd_decide(substation_apparent: float, rating: float, timestamp: float = 0.0) -> CongestionSignal:
    """Broadcast congestion once the substation loading reaches ``rating``."""
    return CongestionSignal(
        congested=bool(substation_apparent >= rating),
        origin=SignalOrigin.BROADCAST,
        timestamp=float(timestamp),
    )


def droop_power(voltage, curve: DroopCurve):
    """Charging power in watts: 0 below ``v_cut``, rated above ``v_full``, linear between."""
    fraction = np.clip((np.asarray(voltage, dtype=float) - curve.v_cut) / (curve.v_full - curve.v_cut),
                       0.0, 1.0)
    power = curve.p_rated * fraction
    return float(power) if np.ndim(power) == 0 else power


def no_control_current(state: ChargerState) -> float:
    """Full current whenever the charger is plugged in and not full."""
    return state.max_current if state.active else 0.0
