"""Grid-free shared-capacity AIMD harness."""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..metrics.scores import jain_fairness
from ..models.config import AimdParams
from ..utils.exceptions import InvalidInputError
from .decisions import aimd_currents


@dataclass
class ToyRunResult:
    """Trajectory of a capacity toy run."""

    currents: np.ndarray
    congested: np.ndarray
    shares: np.ndarray
    fairness: float
    burn_in: int


def fairness_toy_harness(
    n_agents: int,
    capacity: float,
    params: AimdParams = None,
    steps: int = 2000,
    initial_currents: Optional[Sequence[float]] = None,
    burn_in: int = 100,
) -> ToyRunResult:
    """
    Run ``n_agents`` AIMD chargers against a fixed shared capacity.

    Every agent sees the same congestion flag, raised when the summed current
    reaches ``capacity``. Shares are time averages after ``burn_in`` decision
    periods.
    """
    params = params or AimdParams()
    if n_agents < 1:
        raise InvalidInputError("Need at least one agent", f"{n_agents}")
    if not burn_in < steps:
        raise InvalidInputError("Burn-in must be shorter than the run", f"{burn_in} >= {steps}")
    currents = np.full(n_agents, params.i_init_a, dtype=float)
    if initial_currents is not None:
        currents = np.asarray(initial_currents, dtype=float).copy()
        if currents.shape != (n_agents,):
            raise InvalidInputError("One initial current per agent", f"{currents.shape}")
    limit = np.full(n_agents, params.i_max_a)

    history = np.empty((steps, n_agents))
    flags = np.empty(steps, dtype=bool)
    for step in range(steps):
        congested = bool(currents.sum() >= capacity)
        flags[step] = congested
        currents = aimd_currents(currents, congested, params, limit)
        history[step] = currents

    shares = history[burn_in:].mean(axis=0)
    return ToyRunResult(currents=history, congested=flags, shares=shares,
                        fairness=jain_fairness(shares), burn_in=burn_in)
