"""Simulation recordings, score reports and run manifests."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from ..utils.exceptions import InvalidInputError, MetricsError

PLUGGED_INTERVAL_NOTE = (
    "per-EV average power and fairness shares are taken over the plugged interval "
    "[arrival, min(departure, full charge))"
)


@dataclass
class Recording:
    """Node voltages and substation apparent power on a shared time axis."""

    times_s: np.ndarray
    node_ids: Tuple[str, ...]
    node_voltage: np.ndarray
    substation_apparent: np.ndarray
    scenario_hash: Optional[str] = None
    network_hash: Optional[str] = None

    def __post_init__(self):
        self.times_s = np.asarray(self.times_s)
        if self.node_voltage.shape != (len(self.times_s), len(self.node_ids)):
            raise InvalidInputError("Voltage channels do not match the time axis",
                                    f"{self.node_voltage.shape}")
        if len(self.substation_apparent) != len(self.times_s):
            raise InvalidInputError("Substation channel does not match the time axis",
                                    f"{len(self.substation_apparent)} != {len(self.times_s)}")
        self._node_pos = {node: i for i, node in enumerate(self.node_ids)}

    def node_series(self, node_id: str) -> np.ndarray:
        try:
            return self.node_voltage[:, self._node_pos[node_id]]
        except KeyError:
            raise InvalidInputError("Recording has no channel for node", node_id) from None

    @property
    def interval_s(self) -> float:
        if len(self.times_s) < 2:
            return 0.0
        return float(self.times_s[1] - self.times_s[0])


@dataclass
class SimResult:
    """
    Everything recorded during one co-simulation run.

    Per-node and per-EV channels are ``(records, channels)`` arrays sharing
    ``times_s``. SOC is recorded on its own, coarser axis ``soc_times_s``.
    """

    controller: str
    dt_s: float
    times_s: np.ndarray
    node_ids: Tuple[str, ...]
    node_voltage: np.ndarray
    substation_apparent: np.ndarray
    substation_rating: float
    transformer_ids: Tuple[str, ...]
    transformer_ratings: np.ndarray
    transformer_neighborhoods: np.ndarray
    transformer_apparent: np.ndarray
    ev_ids: Tuple[str, ...]
    ev_nodes: Tuple[str, ...]
    ev_current: np.ndarray
    ev_power: np.ndarray
    soc_times_s: np.ndarray
    ev_soc: np.ndarray
    ev_arrival_s: np.ndarray
    ev_departure_s: np.ndarray
    ev_full_s: np.ndarray
    ev_energy_wh: np.ndarray
    comm_events: int = 0
    solves: int = 0
    wall_time_s: float = 0.0
    scenario_hash: Optional[str] = None
    network_hash: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def record_every_s(self) -> float:
        if len(self.times_s) < 2:
            return self.dt_s
        return float(self.times_s[1] - self.times_s[0])

    @property
    def horizon_s(self) -> float:
        return float(self.times_s[-1] + self.record_every_s) if len(self.times_s) else 0.0

    def recording(self) -> Recording:
        return Recording(
            times_s=self.times_s,
            node_ids=self.node_ids,
            node_voltage=self.node_voltage,
            substation_apparent=self.substation_apparent,
            scenario_hash=self.scenario_hash,
            network_hash=self.network_hash,
        )

    def plugged_end_s(self) -> np.ndarray:
        """End of each EV's plugged interval: full charge or departure."""
        full = np.where(np.isnan(self.ev_full_s), np.inf, self.ev_full_s)
        return np.minimum(self.ev_departure_s, full)

    def ev_average_powers(self) -> np.ndarray:
        """Average charging power of each EV over its plugged interval, in watts."""
        if not len(self.ev_ids):
            return np.zeros(0)
        duration = self.plugged_end_s() - self.ev_arrival_s
        energy_j = self.ev_energy_wh * 3600.0
        with np.errstate(divide="ignore", invalid="ignore"):
            average = np.where(duration > 0, energy_j / duration, 0.0)
        return average

    def min_voltage_series(self) -> np.ndarray:
        """Lowest end-node voltage at each recorded instant."""
        if self.node_voltage.shape[1] == 0:
            raise MetricsError("No end-node voltage channels recorded")
        return self.node_voltage.min(axis=1).astype(float)

    def to_frames(self, every_s: Optional[float] = None) -> Dict[str, pd.DataFrame]:
        """
        Long-format ``time_s,node_id,value`` tables of every channel.

        ``every_s`` thins the per-second channels to the given period; it
        must be a multiple of the recording interval.
        """
        step = 1
        if every_s is not None:
            ratio = every_s / self.record_every_s
            if ratio < 1 or abs(ratio - round(ratio)) > 1e-9:
                raise InvalidInputError("Series period must be a multiple of the recording interval",
                                        f"{every_s} vs {self.record_every_s}")
            step = int(round(ratio))
        rows = slice(None, None, step)
        times = self.times_s[rows]
        soc_rows = slice(None)
        if every_s is not None and len(self.soc_times_s) > 1:
            soc_step = max(1, int(round(every_s / float(self.soc_times_s[1] - self.soc_times_s[0]))))
            soc_rows = slice(None, None, soc_step)
        return {
            "node_voltage": _long_frame(times, self.node_ids, self.node_voltage[rows]),
            "substation_apparent": _long_frame(times, ("substation",),
                                               self.substation_apparent[rows][:, None]),
            "transformer_apparent": _long_frame(times, self.transformer_ids,
                                                self.transformer_apparent[rows]),
            "ev_current": _long_frame(times, self.ev_ids, self.ev_current[rows]),
            "ev_power": _long_frame(times, self.ev_ids, self.ev_power[rows]),
            "ev_soc": _long_frame(self.soc_times_s[soc_rows], self.ev_ids, self.ev_soc[soc_rows]),
        }


def _long_frame(times: np.ndarray, ids, values: np.ndarray) -> pd.DataFrame:
    ids = list(ids)
    return pd.DataFrame({
        "time_s": np.repeat(np.asarray(times), len(ids)),
        "node_id": np.tile(np.array(ids, dtype=object), len(times)),
        "value": np.asarray(values, dtype=float).reshape(-1),
    })


SCORE_COLUMNS = ("algorithm", "vvs_vs", "gcs_mvah", "lcs_kvah", "cus_pct", "acps_kw", "fs", "cos")


@dataclass
class ScoreReport:
    """The seven comparison scores of one run."""

    algorithm: str
    vvs: float
    gcs: float
    lcs: float
    cus: float
    acps: float
    fs: float
    cos: int
    lcs_neighborhoods: Dict[int, float] = field(default_factory=dict)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("vvs", "gcs", "lcs", "cus"):
            if getattr(self, name) < 0:
                raise MetricsError(f"Score {name} cannot be negative", f"{getattr(self, name)}")
        if not 0 < self.fs <= 1 + 1e-12:
            raise MetricsError("Fairness score must lie in (0, 1]", f"{self.fs}")

    def csv_row(self) -> List[Any]:
        return [self.algorithm, self.vvs, self.gcs, self.lcs, self.cus, self.acps, self.fs, self.cos]

    def to_dict(self) -> Dict[str, Any]:
        data = dict(zip(SCORE_COLUMNS, self.csv_row()))
        data["lcs_neighborhoods"] = {str(k): v for k, v in sorted(self.lcs_neighborhoods.items())}
        data["metadata"] = dict(self.metadata)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ScoreReport':
        try:
            return cls(
                algorithm=str(data["algorithm"]),
                vvs=float(data["vvs_vs"]),
                gcs=float(data["gcs_mvah"]),
                lcs=float(data["lcs_kvah"]),
                cus=float(data["cus_pct"]),
                acps=float(data["acps_kw"]),
                fs=float(data["fs"]),
                cos=int(data["cos"]),
                lcs_neighborhoods={int(k): float(v)
                                   for k, v in data.get("lcs_neighborhoods", {}).items()},
                metadata=dict(data.get("metadata", {})),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidInputError("Malformed score report", str(e)) from e


@dataclass
class RunManifest:
    """Provenance and outputs of one simulation run directory."""

    controller: str
    config_hash: str
    scenario_hash: str
    network_hash: str
    thresholds_hash: Optional[str] = None
    outputs: Dict[str, str] = field(default_factory=dict)
    scores: Dict[str, Any] = field(default_factory=dict)
    comm_events: int = 0
    solves: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "controller": self.controller,
            "config_hash": self.config_hash,
            "scenario_hash": self.scenario_hash,
            "network_hash": self.network_hash,
            "thresholds_hash": self.thresholds_hash,
            "outputs": dict(sorted(self.outputs.items())),
            "scores": dict(self.scores),
            "comm_events": self.comm_events,
            "solves": self.solves,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RunManifest':
        try:
            return cls(
                controller=str(data["controller"]),
                config_hash=str(data["config_hash"]),
                scenario_hash=str(data["scenario_hash"]),
                network_hash=str(data["network_hash"]),
                thresholds_hash=data.get("thresholds_hash"),
                outputs=dict(data.get("outputs", {})),
                scores=dict(data.get("scores", {})),
                comm_events=int(data.get("comm_events", 0)),
                solves=int(data.get("solves", 0)),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidInputError("Malformed run manifest", str(e)) from e
