"""Data types for the voltage-to-substation-power models and thresholds."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..utils.exceptions import DegenerateDataError, InvalidInputError


class RootProvenance(Enum):
    """Which solution of the threshold equation was kept."""
    QUADRATIC_UPPER = "quadratic-upper"
    QUADRATIC_LOWER = "quadratic-lower"
    LINEAR_FALLBACK = "linear-fallback"


@dataclass
class RegressionSamples:
    """Time-aligned (local voltage, substation apparent power) pairs for one node."""

    node_id: str
    voltages: np.ndarray
    apparent: np.ndarray
    times_s: Optional[np.ndarray] = None

    def __post_init__(self):
        self.voltages = np.asarray(self.voltages, dtype=float)
        self.apparent = np.asarray(self.apparent, dtype=float)
        if self.voltages.shape != self.apparent.shape or self.voltages.ndim != 1:
            raise InvalidInputError(f"Training channels for node {self.node_id} are misaligned",
                                    f"{self.voltages.shape} vs {self.apparent.shape}")
        if np.any(self.voltages <= 0):
            raise InvalidInputError(f"Training voltages for node {self.node_id} must be positive")
        if np.any(self.apparent < 0):
            raise InvalidInputError(f"Training powers for node {self.node_id} must be non-negative")

    def __len__(self) -> int:
        return len(self.voltages)


@dataclass
class DesignMatrix:
    """Rows ``[1, V, V^2]`` in sample order."""

    rows: np.ndarray

    def __post_init__(self):
        if self.rows.ndim != 2 or self.rows.shape[1] != 3:
            raise DegenerateDataError("Design matrix must have three columns", f"{self.rows.shape}")
        if self.rows.shape[0] < 3:
            raise DegenerateDataError("Design matrix needs at least 3 samples",
                                      f"got {self.rows.shape[0]}")

    @property
    def samples(self) -> int:
        return self.rows.shape[0]

    def columns(self, degree: int) -> np.ndarray:
        return self.rows[:, :degree + 1]

    def rank(self) -> int:
        return int(np.linalg.matrix_rank(self.rows))


@dataclass
class FitDiagnostics:
    """Quality figures of one least-squares fit."""

    rmse: float
    r_squared: float
    samples: int
    condition: float
    v_mean: float
    v_min: float
    v_max: float
    sensitivity: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rmse": self.rmse,
            "r_squared": self.r_squared,
            "samples": self.samples,
            "condition": self.condition,
            "v_mean": self.v_mean,
            "v_min": self.v_min,
            "v_max": self.v_max,
            "sensitivity": self.sensitivity,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'FitDiagnostics':
        return cls(**{key: data[key] for key in (
            "rmse", "r_squared", "samples", "condition", "v_mean", "v_min", "v_max", "sensitivity")})


@dataclass
class PolyCoefficients:
    """
    Coefficients of ``S = theta1 + theta2 V + theta3 V^2`` for one node.

    ``condition`` is the condition number of the scaled design matrix; the
    normal equations are squared from it.
    """

    node_id: str
    theta1: float
    theta2: float
    theta3: float
    condition: float = 1.0
    degree: int = 2
    diagnostics: Optional[FitDiagnostics] = None

    def __post_init__(self):
        if not np.all(np.isfinite(self.theta)):
            raise DegenerateDataError(f"Non-finite coefficients for node {self.node_id}",
                                      f"{self.theta}")

    @property
    def theta(self) -> Tuple[float, float, float]:
        return (self.theta1, self.theta2, self.theta3)

    def sensitivity_at(self, voltage: float) -> float:
        """dS/dV of the model at ``voltage``, in VA per volt."""
        return self.theta2 + 2.0 * self.theta3 * voltage


@dataclass(frozen=True)
class VoltageThreshold:
    """Trigger voltage at which the model predicts the rated substation loading."""

    v_th: float
    provenance: RootProvenance
    rating: float
    band: Tuple[float, float]

    def __post_init__(self):
        low, high = self.band
        if not low <= self.v_th <= high:
            raise InvalidInputError("Threshold lies outside its plausibility band",
                                    f"{self.v_th} not in [{low}, {high}]")


@dataclass
class NodeModel:
    """Trained entry of one end node."""

    coefficients: PolyCoefficients
    threshold: VoltageThreshold

    @property
    def node_id(self) -> str:
        return self.coefficients.node_id

    def to_dict(self) -> Dict[str, Any]:
        c = self.coefficients
        data = {
            "node_id": c.node_id,
            "theta": [c.theta1, c.theta2, c.theta3],
            "v_th": self.threshold.v_th,
            "root_provenance": self.threshold.provenance.value,
            "rmse": c.diagnostics.rmse if c.diagnostics else None,
            "samples": c.diagnostics.samples if c.diagnostics else None,
            "degree": c.degree,
            "condition": c.condition,
        }
        if c.diagnostics:
            data["diagnostics"] = c.diagnostics.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any], rating: float, band: Tuple[float, float]) -> 'NodeModel':
        theta = data["theta"]
        diagnostics = data.get("diagnostics")
        coefficients = PolyCoefficients(
            node_id=str(data["node_id"]),
            theta1=float(theta[0]),
            theta2=float(theta[1]),
            theta3=float(theta[2]),
            condition=float(data.get("condition", 1.0)),
            degree=int(data.get("degree", 2)),
            diagnostics=FitDiagnostics.from_dict(diagnostics) if diagnostics else None,
        )
        threshold = VoltageThreshold(
            v_th=float(data["v_th"]),
            provenance=RootProvenance(data["root_provenance"]),
            rating=rating,
            band=band,
        )
        return cls(coefficients=coefficients, threshold=threshold)


@dataclass
class ThresholdTable:
    """Trained models for every end node plus the nodes that failed."""

    rating: float
    band_pu: Tuple[float, float]
    nominal_voltage: float
    models: Dict[str, NodeModel] = field(default_factory=dict)
    failures: Dict[str, str] = field(default_factory=dict)
    degree: int = 2
    network_hash: Optional[str] = None
    baseline_hash: Optional[str] = None

    @property
    def band_volts(self) -> Tuple[float, float]:
        return (self.band_pu[0] * self.nominal_voltage, self.band_pu[1] * self.nominal_voltage)

    def v_th(self, node_id: str) -> float:
        try:
            return self.models[node_id].threshold.v_th
        except KeyError:
            raise InvalidInputError("No trained threshold for node", node_id) from None

    def thresholds_for(self, node_ids: List[str]) -> np.ndarray:
        """Thresholds aligned with ``node_ids``; every node must be trained."""
        missing = [node for node in node_ids if node not in self.models]
        if missing:
            raise InvalidInputError("Missing trained thresholds",
                                    f"{len(missing)} nodes, first {missing[0]}")
        return np.array([self.models[node].threshold.v_th for node in node_ids])

    def summary(self) -> Dict[str, Any]:
        """Sign counts of the fitted slopes and the spread of thresholds."""
        if not self.models:
            return {"nodes": 0, "failures": len(self.failures)}
        thetas = np.array([m.coefficients.theta for m in self.models.values()])
        v_th = np.array([m.threshold.v_th for m in self.models.values()])
        sensitivity = np.array([
            m.coefficients.diagnostics.sensitivity if m.coefficients.diagnostics
            else m.coefficients.sensitivity_at(m.threshold.v_th)
            for m in self.models.values()
        ])
        provenance: Dict[str, int] = {}
        for m in self.models.values():
            key = m.threshold.provenance.value
            provenance[key] = provenance.get(key, 0) + 1
        return {
            "nodes": len(self.models),
            "failures": len(self.failures),
            "theta2_negative": int(np.sum(thetas[:, 1] < 0)),
            "theta2_positive": int(np.sum(thetas[:, 1] >= 0)),
            "sensitivity_negative": int(np.sum(sensitivity < 0)),
            "sensitivity_positive": int(np.sum(sensitivity >= 0)),
            "v_th_min": float(v_th.min()),
            "v_th_median": float(np.median(v_th)),
            "v_th_max": float(v_th.max()),
            "root_provenance": dict(sorted(provenance.items())),
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rating": self.rating,
            "band_pu": list(self.band_pu),
            "nominal_voltage": self.nominal_voltage,
            "degree": self.degree,
            "network_hash": self.network_hash,
            "baseline_hash": self.baseline_hash,
            "nodes": [self.models[node].to_dict() for node in sorted(self.models)],
            "failures": [{"node_id": node, "error": self.failures[node]}
                         for node in sorted(self.failures)],
            "summary": self.summary(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ThresholdTable':
        try:
            rating = float(data["rating"])
            band_pu = (float(data["band_pu"][0]), float(data["band_pu"][1]))
            nominal = float(data["nominal_voltage"])
            table = cls(
                rating=rating,
                band_pu=band_pu,
                nominal_voltage=nominal,
                degree=int(data.get("degree", 2)),
                network_hash=data.get("network_hash"),
                baseline_hash=data.get("baseline_hash"),
            )
            band = table.band_volts
            for entry in data["nodes"]:
                model = NodeModel.from_dict(entry, rating, band)
                table.models[model.node_id] = model
            for entry in data.get("failures", []):
                table.failures[str(entry["node_id"])] = str(entry["error"])
        except (KeyError, TypeError, ValueError, IndexError) as e:
            raise InvalidInputError("Malformed threshold table", str(e)) from e
        return table
