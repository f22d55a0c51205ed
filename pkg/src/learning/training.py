"""Training every end node from a baseline recording."""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Optional, Tuple

import numpy as np

from ..grid.storage import network_hash
from ..models.config import LearningConfig
from ..models.learning import NodeModel, RegressionSamples, ThresholdTable
from ..models.network import Network
from ..models.results import Recording
from ..utils.exceptions import DegenerateDataError, InvalidInputError, ThresholdError
from .regression import fit_polynomial
from .threshold import solve_threshold

logger = logging.getLogger(__name__)


def extract_training_set(recording: Recording, node_id: str, sampling_s: float = 60) -> RegressionSamples:
    """
    Time-aligned voltage and substation power pairs of one node.

    Args:
        recording: Baseline run channels
        node_id: End node whose voltage is the regressor
        sampling_s: Training period; a multiple of the recording interval

    Raises:
        InvalidInputError: Missing channel, or a period that does not divide
            onto the recording grid
    """
    voltages = recording.node_series(node_id)
    interval = recording.interval_s
    stride = 1
    if interval > 0:
        ratio = sampling_s / interval
        if ratio < 1 or abs(ratio - round(ratio)) > 1e-9:
            raise InvalidInputError("Sampling period must be a multiple of the recording interval",
                                    f"{sampling_s} vs {interval}")
        stride = int(round(ratio))
    rows = slice(None, None, stride)
    return RegressionSamples(
        node_id=node_id,
        voltages=np.asarray(voltages[rows], dtype=float),
        apparent=np.asarray(recording.substation_apparent[rows], dtype=float),
        times_s=np.asarray(recording.times_s[rows]),
    )


def train_node(samples: RegressionSamples, cfg: LearningConfig, rating: float,
               band: Tuple[float, float]) -> NodeModel:
    """Fit one node and solve its threshold."""
    coefficients = fit_polynomial(samples, cfg.degree, cfg.degeneracy_floor, cfg.curvature_penalty)
    threshold = solve_threshold(coefficients, rating, band, cfg.theta3_floor, cfg.theta2_floor)
    return NodeModel(coefficients=coefficients, threshold=threshold)


def _train_entry(args):
    samples, cfg, rating, band = args
    try:
        return samples.node_id, train_node(samples, cfg, rating, band), None
    except (DegenerateDataError, ThresholdError) as e:
        return samples.node_id, None, f"{type(e).__name__}: {e}"


def train_all(
    recording: Recording,
    net: Network,
    cfg: LearningConfig = None,
    rating: Optional[float] = None,
    node_ids: Optional[Iterable[str]] = None,
) -> ThresholdTable:
    """
    Train every end node of a baseline recording.

    Nodes whose data is degenerate or whose model has no in-band threshold
    are reported in ``failures`` rather than aborting the run.

    Args:
        recording: Baseline (no-EV) channels
        net: The feeder the recording was made on
        cfg: Sampling, degree, band and floors
        rating: Substation loading the thresholds target; defaults to the
            substation rating
        node_ids: Subset of recorded nodes to train

    Returns:
        The threshold table
    """
    cfg = cfg or LearningConfig()
    nodes = list(node_ids) if node_ids is not None else list(recording.node_ids)
    if not nodes:
        raise InvalidInputError("No nodes to train")
    if rating is None:
        rating = net.substation_rating
    nominal = net.bus(nodes[0]).nominal_voltage
    table = ThresholdTable(
        rating=float(rating),
        band_pu=tuple(cfg.band_pu),
        nominal_voltage=nominal,
        degree=cfg.degree,
        network_hash=network_hash(net),
        baseline_hash=recording.scenario_hash,
    )
    band = table.band_volts
    jobs = [(extract_training_set(recording, node, cfg.sampling_s), cfg, table.rating, band)
            for node in nodes]

    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as executor:
            outcomes = list(executor.map(_train_entry, jobs, chunksize=max(1, len(jobs) // (4 * cfg.workers))))
    else:
        outcomes = [_train_entry(job) for job in jobs]

    for node, model, error in outcomes:
        if model is not None:
            table.models[node] = model
        else:
            table.failures[node] = error
            logger.warning("Training failed at node %s: %s", node, error)

    summary = table.summary()
    logger.info("Trained %d nodes (%d failed); V_th %s", summary["nodes"], summary["failures"],
                "n/a" if not table.models else
                f"{summary['v_th_min']:.1f}/{summary['v_th_median']:.1f}/{summary['v_th_max']:.1f} V")
    return table

