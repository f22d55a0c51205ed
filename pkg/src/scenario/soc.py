"""Battery state-of-charge integration."""

import numpy as np


def soc_update(soc: float, power_w: float, dt_s: float, capacity_wh: float) -> float:
    """
    Advance a state of charge by ``power_w`` drawn for ``dt_s`` seconds.

    Charging is lossless and the result saturates at 1.
    """
    return min(1.0, soc + power_w * dt_s / 3600.0 / capacity_wh)


def soc_update_array(soc: np.ndarray, power_w: np.ndarray, dt_s: float,
                     capacity_wh: np.ndarray) -> np.ndarray:
    """Vectorized ``soc_update`` over a fleet."""
    return np.minimum(1.0, soc + power_w * dt_s / 3600.0 / capacity_wh)
