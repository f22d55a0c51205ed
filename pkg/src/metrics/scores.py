"""The seven comparison scores of a co-simulation run."""

import logging
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ..models.results import PLUGGED_INTERVAL_NOTE, ScoreReport, SimResult
from ..utils.exceptions import MetricsError

logger = logging.getLogger(__name__)


def _series(values, name: str) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if array.size == 0:
        raise MetricsError(f"Empty {name} series")
    return array


def vvs(node_voltage, v_min: float, dt_s: float = 1.0, n: Optional[int] = None) -> float:
    """
    Voltage violation score in volt-seconds.

    ``node_voltage`` is ``(steps, nodes)``; each node's undershoot below
    ``v_min`` is integrated by the left rectangle rule and the sum is divided
    by ``n`` (default: the number of nodes).
    """
    voltage = _series(node_voltage, "voltage")
    if voltage.ndim == 1:
        voltage = voltage[:, None]
    n = voltage.shape[1] if n is None else n
    if n < 1:
        raise MetricsError("Node count must be positive", f"{n}")
    return float(np.sum(np.maximum(0.0, v_min - voltage)) * dt_s / n)


def gcs(substation_apparent, rating: float, dt_s: float = 1.0) -> float:
    """Energy above the substation rating, in MVAh."""
    series = _series(substation_apparent, "substation")
    return float(np.sum(np.maximum(0.0, series - rating)) * dt_s / 3600.0 / 1e6)


def lcs(transformer_apparent, ratings, dt_s: float = 1.0,
        neighborhoods: Optional[Sequence[int]] = None) -> Tuple[float, Dict[int, float]]:
    """
    Average transformer energy above rating, in kVAh.

    Returns:
        The average over all transformers and, when ``neighborhoods`` is
        given, the average over each neighbourhood's transformers
    """
    series = _series(transformer_apparent, "transformer")
    if series.ndim == 1:
        series = series[:, None]
    ratings = np.asarray(ratings, dtype=float)
    if ratings.shape != (series.shape[1],):
        raise MetricsError("Transformer channels and ratings do not match",
                           f"{series.shape[1]} channels, {ratings.size} ratings")
    overload = np.sum(np.maximum(0.0, series - ratings), axis=0) * dt_s / 3600.0 / 1e3
    breakdown: Dict[int, float] = {}
    if neighborhoods is not None:
        groups = np.asarray(neighborhoods)
        if groups.shape != ratings.shape:
            raise MetricsError("One neighbourhood per transformer required")
        for group in sorted(set(groups.tolist())):
            breakdown[int(group)] = float(np.mean(overload[groups == group]))
    return float(np.mean(overload)), breakdown


def cus(substation_apparent, rating: float) -> float:
    """Peak substation loading as a percentage of its rating."""
    return float(np.max(_series(substation_apparent, "substation")) / rating * 100.0)


def acps(average_powers_w) -> float:
    """Mean of the per-EV average charging powers, in kW."""
    powers = np.asarray(average_powers_w, dtype=float)
    if powers.size == 0:
        raise MetricsError("No EVs to average")
    return float(np.mean(powers) / 1000.0)


def jain_fairness(shares) -> float:
    """Jain's index ``(sum w)^2 / (N sum w^2)``; 1 when equal, 1/N when one user takes all."""
    w = np.asarray(shares, dtype=float)
    if w.size == 0:
        raise MetricsError("No shares to rate")
    if np.any(w < 0):
        raise MetricsError("Shares must be non-negative")
    squares = float(np.sum(w * w))
    if squares == 0:
        raise MetricsError("All shares are zero")
    return float(np.sum(w) ** 2 / (w.size * squares))


def cos(result: SimResult) -> int:
    return int(result.comm_events)


def power_distribution(average_powers_w) -> Dict[str, float]:
    """Minimum, quartiles and maximum of per-EV average power, in kW."""
    powers = np.asarray(average_powers_w, dtype=float) / 1000.0
    if powers.size == 0:
        return {}
    q1, median, q3 = np.percentile(powers, [25, 50, 75])
    return {"min": float(powers.min()), "q1": float(q1), "median": float(median),
            "q3": float(q3), "max": float(powers.max())}


def score_run(result: SimResult, v_min: float = 216.0, rating: Optional[float] = None) -> ScoreReport:
    """
    Compute every score of ``result``.

    Runs without EVs get ACPS 0; runs in which no EV charged get fairness 1.
    """
    dt = result.record_every_s
    rating = result.substation_rating if rating is None else rating
    lcs_avg, lcs_groups = 0.0, {}
    if len(result.transformer_ids):
        lcs_avg, lcs_groups = lcs(result.transformer_apparent, result.transformer_ratings, dt,
                                  result.transformer_neighborhoods)
    averages = result.ev_average_powers()
    charging = acps(averages) if averages.size else 0.0
    # No charging at all counts as an equal split
    fairness = jain_fairness(averages) if np.any(averages > 0) else 1.0
    report = ScoreReport(
        algorithm=result.controller,
        vvs=vvs(result.node_voltage, v_min, dt),
        gcs=gcs(result.substation_apparent, rating, dt),
        lcs=lcs_avg,
        cus=cus(result.substation_apparent, rating),
        acps=charging,
        fs=fairness,
        cos=cos(result),
        lcs_neighborhoods=lcs_groups,
        metadata={
            "fairness_window": PLUGGED_INTERVAL_NOTE,
            "ev_power_kw": power_distribution(averages),
            "v_min_v": v_min,
            "rating_va": rating,
            "dt_s": dt,
        },
    )
    logger.info("%s: VVS %.1f V-s, GCS %.3f MVAh, LCS %.2f kVAh, CUS %.1f%%, ACPS %.2f kW, FS %.3f, COS %d",
                report.algorithm, report.vvs, report.gcs, report.lcs, report.cus,
                report.acps, report.fs, report.cos)
    return report
