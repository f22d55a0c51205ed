"""Configuration sections for the feeder co-simulation pipeline."""

import json
from dataclasses import dataclass, field, fields, asdict
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Type, TypeVar

from ..utils.exceptions import InvalidConfigurationError, InvalidInputError
from ..utils.validation import (
    validate_choice,
    validate_fraction,
    validate_multiple_of,
    validate_non_negative,
    validate_positive,
    validate_positive_int,
    validate_range,
)

T = TypeVar("T")

CONTROLLER_KINDS = ("no_control", "droop", "c_aimd", "d_aimd")
PRIMARY_TOPOLOGIES = ("ieee37", "none")
EV_LOAD_MODELS = ("constant_power", "constant_current")


def _validated(section: str, check) -> None:
    try:
        check()
    except InvalidConfigurationError:
        raise
    except Exception as e:
        raise InvalidConfigurationError(f"Invalid {section} configuration", str(e)) from e


def _from_mapping(cls: Type[T], data: Optional[Dict[str, Any]], section: str) -> T:
    """Build a flat config dataclass from a mapping, rejecting unknown keys."""
    data = dict(data or {})
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise InvalidConfigurationError(f"Unknown field in {section} configuration", ", ".join(unknown))
    converted = {key: tuple(tuple(v) if isinstance(v, list) else v for v in value)
                 if isinstance(value, list) else value
                 for key, value in data.items()}
    try:
        return cls(**converted)
    except TypeError as e:
        raise InvalidConfigurationError(f"Invalid {section} configuration", str(e)) from e


@dataclass
class FeederConfig:
    """Parameters of the synthetic test feeder."""

    neighborhoods: int = 26
    transformers_per_neighborhood: int = 4
    houses_per_transformer: int = 4
    primary_topology: str = "ieee37"

    primary_voltage: float = 4800.0
    secondary_voltage: float = 240.0
    substation_rating: float = 2.5e6

    # Feeder head (substation transformer and express feeder), primary ohms
    head_resistance_ohm: float = 0.645
    head_reactance_ohm: float = 0.161
    # Primary cable per foot
    line_resistance_ohm_per_ft: float = 1.25e-5
    line_reactance_ohm_per_ft: float = 1.0e-5
    # Local transformers, percent impedance on their own rating
    transformer_rating: float = 25000.0
    transformer_r_pct: float = 0.175
    transformer_x_pct: float = 0.25
    # Service drop from the transformer secondary to each house
    service_resistance_ohm: float = 0.0075
    service_reactance_ohm: float = 0.0025
    # Each house gets its own EV connection bus behind the service bus
    ev_connections: bool = True
    ev_cable_resistance_ohm: float = 0.005
    ev_cable_reactance_ohm: float = 0.0015

    def __post_init__(self):
        def check():
            validate_positive_int(self.neighborhoods, "neighborhoods")
            validate_positive_int(self.transformers_per_neighborhood, "transformers_per_neighborhood")
            validate_positive_int(self.houses_per_transformer, "houses_per_transformer")
            self.primary_topology = validate_choice(self.primary_topology, PRIMARY_TOPOLOGIES,
                                                    "primary_topology")
            for name in ("primary_voltage", "secondary_voltage", "substation_rating",
                         "transformer_rating"):
                validate_positive(getattr(self, name), name)
            for name in ("head_resistance_ohm", "head_reactance_ohm",
                         "line_resistance_ohm_per_ft", "line_reactance_ohm_per_ft",
                         "transformer_r_pct", "transformer_x_pct",
                         "service_resistance_ohm", "service_reactance_ohm",
                         "ev_cable_resistance_ohm", "ev_cable_reactance_ohm"):
                validate_non_negative(getattr(self, name), name)
            if self.ev_connections and self.ev_cable_resistance_ohm == 0 and self.ev_cable_reactance_ohm == 0:
                raise InvalidConfigurationError("EV connection cable needs a non-zero impedance")
        _validated("feeder", check)

    @property
    def house_count(self) -> int:
        return self.neighborhoods * self.transformers_per_neighborhood * self.houses_per_transformer

    @property
    def transformer_count(self) -> int:
        return self.neighborhoods * self.transformers_per_neighborhood

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]]) -> 'FeederConfig':
        return _from_mapping(cls, data, "feeder")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


DEFAULT_MEAN_SHAPE_KW: Tuple[Tuple[float, float], ...] = (
    (16.0, 1.6), (17.0, 2.0), (18.0, 2.6), (19.0, 3.1), (20.0, 3.3),
    (21.0, 3.2), (22.0, 2.8), (23.0, 2.2), (24.0, 1.7),
)


@dataclass
class ScenarioConfig:
    """Household load generator and EV fleet parameters."""

    seed: int = 42
    penetration: float = 1.0
    horizon_s: int = 28800
    start_hour: float = 16.0

    # Piecewise-linear mean household power, (hour of day, kW) breakpoints
    mean_shape_kw: Tuple[Tuple[float, float], ...] = DEFAULT_MEAN_SHAPE_KW
    # Optional per-minute standard deviation shape; std_fraction * mean otherwise
    std_shape_kw: Optional[Tuple[Tuple[float, float], ...]] = None
    std_fraction: float = 0.35
    power_factor: float = 0.9

    calibrate: bool = True
    target_peak_va: float = 1.36e6
    calibration_band_va: Tuple[float, float] = (1.30e6, 1.45e6)

    arrival_mean_h: float = 18.0
    arrival_std_h: float = 1.5
    arrival_window_h: Tuple[float, float] = (16.0, 22.0)
    initial_soc_range: Tuple[float, float] = (0.2, 0.6)
    departure_h: Optional[float] = None

    battery_capacity_wh: float = 72000.0
    charger_rating_w: float = 10000.0
    max_current_a: float = 41.0

    def __post_init__(self):
        def check():
            if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
                raise InvalidConfigurationError("seed must be a non-negative integer", f"got {self.seed!r}")
            validate_fraction(self.penetration, "penetration")
            validate_multiple_of(self.horizon_s, 60, "horizon_s")
            validate_range(self.start_hour, 0.0, 24.0, "start_hour")
            self.mean_shape_kw = _shape(self.mean_shape_kw, "mean_shape_kw")
            if self.std_shape_kw is not None:
                self.std_shape_kw = _shape(self.std_shape_kw, "std_shape_kw")
            validate_non_negative(self.std_fraction, "std_fraction")
            validate_range(self.power_factor, 0.0, 1.0, "power_factor", min_inclusive=False)
            validate_positive(self.target_peak_va, "target_peak_va")
            low, high = self.calibration_band_va
            if not 0 < low <= self.target_peak_va <= high:
                raise InvalidConfigurationError("calibration_band_va must bracket target_peak_va",
                                                f"{self.calibration_band_va}")
            validate_positive(self.arrival_std_h, "arrival_std_h")
            start, end = self.arrival_window_h
            if not self.start_hour <= start < end:
                raise InvalidConfigurationError("arrival_window_h must be an increasing window after start_hour",
                                                f"{self.arrival_window_h}")
            soc_low, soc_high = self.initial_soc_range
            if not 0 <= soc_low <= soc_high < 1:
                raise InvalidConfigurationError("initial_soc_range must lie in [0, 1)",
                                                f"{self.initial_soc_range}")
            validate_positive(self.battery_capacity_wh, "battery_capacity_wh")
            validate_positive(self.charger_rating_w, "charger_rating_w")
            validate_positive(self.max_current_a, "max_current_a")
        _validated("scenario", check)

    @property
    def minutes(self) -> int:
        return int(self.horizon_s) // 60

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]]) -> 'ScenarioConfig':
        return _from_mapping(cls, data, "scenario")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["mean_shape_kw"] = [list(p) for p in self.mean_shape_kw]
        data["std_shape_kw"] = [list(p) for p in self.std_shape_kw] if self.std_shape_kw else None
        data["calibration_band_va"] = list(self.calibration_band_va)
        data["arrival_window_h"] = list(self.arrival_window_h)
        data["initial_soc_range"] = list(self.initial_soc_range)
        return data


def _shape(points, name: str) -> Tuple[Tuple[float, float], ...]:
    shape = tuple((float(h), float(v)) for h, v in points)
    if len(shape) < 1:
        raise InvalidConfigurationError(f"{name} needs at least one breakpoint")
    hours = [h for h, _ in shape]
    if hours != sorted(hours) or len(set(hours)) != len(hours):
        raise InvalidConfigurationError(f"{name} hours must be strictly increasing", f"{hours}")
    if any(v < 0 for _, v in shape):
        raise InvalidConfigurationError(f"{name} values must be non-negative")
    return shape


@dataclass
class LearningConfig:
    """Voltage-to-substation-power model training options."""

    sampling_s: int = 60
    degree: int = 2
    band_pu: Tuple[float, float] = (0.8, 1.1)
    theta3_floor: float = 1e-12
    theta2_floor: float = 1e-12
    degeneracy_floor: float = 1e-9
    # Ridge weight on the scaled quadratic term of the fit
    curvature_penalty: float = 100.0
    workers: int = 1

    def __post_init__(self):
        def check():
            validate_positive(self.sampling_s, "sampling_s")
            if self.degree not in (1, 2):
                raise InvalidConfigurationError("degree must be 1 or 2", f"got {self.degree!r}")
            low, high = self.band_pu
            if not 0 < low < high:
                raise InvalidConfigurationError("band_pu must be an increasing positive pair", f"{self.band_pu}")
            validate_positive(self.theta3_floor, "theta3_floor")
            validate_positive(self.theta2_floor, "theta2_floor")
            validate_positive(self.degeneracy_floor, "degeneracy_floor")
            validate_non_negative(self.curvature_penalty, "curvature_penalty")
            validate_positive_int(self.workers, "workers")
        _validated("learning", check)

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]]) -> 'LearningConfig':
        return _from_mapping(cls, data, "learning")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["band_pu"] = list(self.band_pu)
        return data


@dataclass
class AimdParams:
    """Additive-increase / multiplicative-decrease parameters."""

    alpha: float = 1.0
    beta: float = 0.5
    t_a_s: float = 10.0
    v_min_v: float = 216.0
    i_max_a: float = 41.0
    i_init_a: float = 0.0

    def __post_init__(self):
        def check():
            validate_positive(self.alpha, "alpha")
            validate_range(self.beta, 0.0, 1.0, "beta", min_inclusive=False, max_inclusive=False)
            validate_positive(self.t_a_s, "t_a_s")
            validate_positive(self.v_min_v, "v_min_v")
            validate_positive(self.i_max_a, "i_max_a")
            validate_range(self.i_init_a, 0.0, self.i_max_a, "i_init_a")
        _validated("aimd", check)


@dataclass
class DroopCurve:
    """Piecewise-linear voltage to charging power curve."""

    v_cut: float = 216.0
    v_full: float = 240.0
    p_rated: float = 10000.0
    # Fraction of the gap to the curve a charger closes per tick; 1 follows the curve directly
    smoothing: float = 0.5

    def __post_init__(self):
        def check():
            validate_positive(self.v_cut, "v_cut")
            validate_positive(self.p_rated, "p_rated")
            validate_range(self.smoothing, 0.0, 1.0, "smoothing", min_inclusive=False)
            if not self.v_cut < self.v_full:
                raise InvalidConfigurationError("v_cut must be below v_full",
                                                f"v_cut={self.v_cut}, v_full={self.v_full}")
        _validated("droop", check)


@dataclass
class ControllerConfig:
    """Controller selection and parameters."""

    controller: str = "no_control"
    aimd: AimdParams = field(default_factory=AimdParams)
    droop: DroopCurve = field(default_factory=DroopCurve)
    # Congestion level for C-AIMD and D-AIMD threshold solving; None means the substation rating
    capacity_target_va: Optional[float] = None
    nominal_ev_voltage: float = 240.0

    def __post_init__(self):
        def check():
            self.controller = validate_choice(self.controller, CONTROLLER_KINDS, "controller")
            if self.capacity_target_va is not None:
                validate_positive(self.capacity_target_va, "capacity_target_va")
            validate_positive(self.nominal_ev_voltage, "nominal_ev_voltage")
        _validated("controller", check)

    def capacity_target(self, substation_rating: float) -> float:
        return self.capacity_target_va if self.capacity_target_va is not None else substation_rating

    _AIMD_KEYS = {"alpha": "alpha", "beta": "beta", "t_a_s": "t_a_s", "v_min_v": "v_min_v",
                  "i_max_a": "i_max_a", "i_init_a": "i_init_a"}

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]]) -> 'ControllerConfig':
        data = dict(data or {})
        aimd_args = {key: data.pop(key) for key in list(data) if key in cls._AIMD_KEYS}
        droop_args = data.pop("droop", None) or {}
        unknown = sorted(set(data) - {"controller", "capacity_target_va", "nominal_ev_voltage"})
        if unknown:
            raise InvalidConfigurationError("Unknown field in controller configuration", ", ".join(unknown))
        droop = _from_mapping(DroopCurve, droop_args, "droop")
        aimd = _from_mapping(AimdParams, aimd_args, "controller")
        return cls(aimd=aimd, droop=droop, **data)

    def to_dict(self) -> Dict[str, Any]:
        data = {"controller": self.controller}
        data.update(asdict(self.aimd))
        data["droop"] = asdict(self.droop)
        data["capacity_target_va"] = self.capacity_target_va
        data["nominal_ev_voltage"] = self.nominal_ev_voltage
        return data


@dataclass
class SimConfig:
    """Time stepping, recording and solver options for one run."""

    controller: ControllerConfig = field(default_factory=ControllerConfig)
    dt_s: float = 1.0
    horizon_s: Optional[float] = None
    record_every_s: float = 1.0
    soc_record_every_s: Optional[float] = None
    series_every_s: float = 60.0
    ev_load_model: str = "constant_power"
    source_voltage_pu: float = 1.0
    tolerance_pu: float = 1e-8
    max_iterations: int = 100

    def __post_init__(self):
        def check():
            validate_positive(self.dt_s, "dt_s")
            validate_multiple_of(self.t_a_s, self.dt_s, "t_a_s")
            if self.horizon_s is not None:
                validate_multiple_of(self.horizon_s, self.dt_s, "horizon_s")
            validate_multiple_of(self.record_every_s, self.dt_s, "record_every_s")
            if self.soc_record_every_s is not None:
                validate_multiple_of(self.soc_record_every_s, self.dt_s, "soc_record_every_s")
            validate_multiple_of(self.series_every_s, self.record_every_s, "series_every_s")
            self.ev_load_model = validate_choice(self.ev_load_model, EV_LOAD_MODELS, "ev_load_model")
            validate_positive(self.source_voltage_pu, "source_voltage_pu")
            validate_positive(self.tolerance_pu, "tolerance_pu")
            validate_positive_int(self.max_iterations, "max_iterations")
        _validated("sim", check)

    @property
    def t_a_s(self) -> float:
        return self.controller.aimd.t_a_s

    @property
    def soc_every_s(self) -> float:
        return self.soc_record_every_s if self.soc_record_every_s is not None else self.t_a_s

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]],
                  controller: Optional[ControllerConfig] = None) -> 'SimConfig':
        section = _from_mapping(_SimFields, data, "sim")
        return cls(controller=controller or ControllerConfig(), **asdict(section))

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data.pop("controller")
        return data

    def with_controller(self, kind: str) -> 'SimConfig':
        """Copy of this config with a different controller kind."""
        controller = ControllerConfig.from_dict({**self.controller.to_dict(), "controller": kind})
        return SimConfig(controller=controller, **self.to_dict())


@dataclass
class _SimFields:
    dt_s: float = 1.0
    horizon_s: Optional[float] = None
    record_every_s: float = 1.0
    soc_record_every_s: Optional[float] = None
    series_every_s: float = 60.0
    ev_load_model: str = "constant_power"
    source_voltage_pu: float = 1.0
    tolerance_pu: float = 1e-8
    max_iterations: int = 100


@dataclass
class PipelineConfig:
    """All configuration sections of the end-to-end pipeline."""

    feeder: FeederConfig = field(default_factory=FeederConfig)
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    learning: LearningConfig = field(default_factory=LearningConfig)
    sim: SimConfig = field(default_factory=SimConfig)

    @property
    def controller(self) -> ControllerConfig:
        return self.sim.controller

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]]) -> 'PipelineConfig':
        data = dict(data or {})
        unknown = sorted(set(data) - {"feeder", "scenario", "learning", "controller", "sim"})
        if unknown:
            raise InvalidConfigurationError("Unknown configuration section", ", ".join(unknown))
        controller = ControllerConfig.from_dict(data.get("controller"))
        return cls(
            feeder=FeederConfig.from_dict(data.get("feeder")),
            scenario=ScenarioConfig.from_dict(data.get("scenario")),
            learning=LearningConfig.from_dict(data.get("learning")),
            sim=SimConfig.from_dict(data.get("sim"), controller),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "feeder": self.feeder.to_dict(),
            "scenario": self.scenario.to_dict(),
            "learning": self.learning.to_dict(),
            "controller": self.controller.to_dict(),
            "sim": self.sim.to_dict(),
        }

    @classmethod
    def load(cls, path: Optional[str]) -> 'PipelineConfig':
        """Load a JSON config file; a None path gives the defaults."""
        if path is None:
            return cls()
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except OSError as e:
            raise InvalidInputError(f"Cannot read config file {path}", str(e)) from e
        except ValueError as e:
            raise InvalidConfigurationError(f"Config file {path} is not valid JSON", str(e)) from e
        if not isinstance(data, dict):
            raise InvalidConfigurationError(f"Config file {path} must contain a JSON object")
        return cls.from_dict(data)

    def save(self, path: Path) -> None:
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
