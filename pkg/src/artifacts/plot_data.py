"""Tidy CSV tables for charting a run or a training fit."""

from pathlib import Path
from typing import List, Optional

import numpy as np
import pandas as pd

from ..models.learning import PolyCoefficients, RegressionSamples
from ..models.results import ScoreReport, SimResult


def _write(frame: pd.DataFrame, path: Path) -> Path:
    frame.to_csv(path, index=False, float_format="%.10g")
    return path


def sampled_ev(result: SimResult) -> Optional[int]:
    """Index of the EV whose current waveform is charted: the earliest arrival."""
    if not len(result.ev_ids):
        return None
    return int(np.lexsort((np.arange(len(result.ev_ids)), result.ev_arrival_s))[0])


def write_run_plot_data(result: SimResult, report: ScoreReport, directory) -> List[Path]:
    """Minimum voltage, substation loading, a sampled EV's current, EV averages and LCS by neighbourhood."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = [
        _write(pd.DataFrame({"time_s": result.times_s, "min_voltage_v": result.min_voltage_series()}),
               directory / "min_voltage.csv"),
        _write(pd.DataFrame({"time_s": result.times_s,
                             "substation_apparent_va": result.substation_apparent}),
               directory / "substation_apparent.csv"),
    ]
    index = sampled_ev(result)
    if index is not None:
        paths.append(_write(pd.DataFrame({
            "time_s": result.times_s,
            "ev_id": result.ev_ids[index],
            "current_a": result.ev_current[:, index].astype(float),
        }), directory / "ev_current_sample.csv"))
    paths.append(_write(pd.DataFrame({
        "ev_id": list(result.ev_ids),
        "node_id": list(result.ev_nodes),
        "average_power_kw": result.ev_average_powers() / 1000.0,
    }), directory / "ev_average_power.csv"))
    paths.append(_write(pd.DataFrame(
        sorted(report.lcs_neighborhoods.items()), columns=["neighborhood", "lcs_kvah"]),
        directory / "lcs_neighborhoods.csv"))
    return paths


def write_training_scatter(samples: RegressionSamples, coefficients: PolyCoefficients, path) -> Path:
    """Training pairs of one node next to the fitted curve."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fitted = (coefficients.theta1 + coefficients.theta2 * samples.voltages
              + coefficients.theta3 * samples.voltages ** 2)
    return _write(pd.DataFrame({
        "node_id": samples.node_id,
        "voltage_v": samples.voltages,
        "substation_apparent_va": samples.apparent,
        "fitted_va": fitted,
    }), path)
