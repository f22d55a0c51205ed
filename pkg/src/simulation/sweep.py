"""Running several controllers over the same inputs."""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, Iterable, Optional

from ..models.config import SimConfig
from ..models.learning import ThresholdTable
from ..models.network import Network
from ..models.scenario import Scenario
from .engine import run

logger = logging.getLogger(__name__)


def _run_one(net, scenario, cfg, thresholds, sink):
    result = run(net, scenario, cfg, thresholds)
    return sink(result, cfg) if sink is not None else result


def run_controllers(
    net: Network,
    scenario: Scenario,
    cfg: SimConfig,
    kinds: Iterable[str],
    thresholds: Optional[ThresholdTable] = None,
    workers: int = 1,
    sink: Optional[Callable] = None,
) -> Dict[str, object]:
    """
    Run one simulation per controller kind.

    With ``workers > 1`` the runs execute in separate processes. ``sink``,
    when given, is called in the worker as ``sink(result, cfg)`` and its
    return value replaces the result; it must be picklable.

    Returns:
        Mapping of controller kind to result (or sink output), in input order
    """
    kinds = list(kinds)
    configs = {kind: cfg.with_controller(kind) for kind in kinds}
    if workers > 1 and len(kinds) > 1:
        logger.info("Running %d controllers on %d workers", len(kinds), workers)
        with ProcessPoolExecutor(max_workers=min(workers, len(kinds))) as executor:
            futures = {kind: executor.submit(_run_one, net, scenario, configs[kind],
                                             thresholds, sink)
                       for kind in kinds}
            return {kind: futures[kind].result() for kind in kinds}
    return {kind: _run_one(net, scenario, configs[kind], thresholds, sink) for kind in kinds}
