"""Seeded household load and EV fleet generation."""

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import truncnorm

from ..models.config import ScenarioConfig
from ..models.network import Network
from ..models.scenario import EvSpec, HouseholdProfile, Scenario
from ..powerflow.sweep import compile_network
from ..utils.exceptions import CalibrationError, PowerFlowError, ScenarioError

logger = logging.getLogger(__name__)

LOAD_STREAM = 0
FLEET_STREAM = 1
PROFILE_DECIMALS = 3


def shape_series(points: Sequence[Tuple[float, float]], hours: np.ndarray) -> np.ndarray:
    """Piecewise-linear interpolation of ``(hour, kW)`` breakpoints, in watts."""
    shape_hours = np.array([h for h, _ in points])
    shape_kw = np.array([v for _, v in points])
    return np.interp(hours, shape_hours, shape_kw) * 1000.0


def draw_household_loads(cfg: ScenarioConfig, houses: int, seed: int) -> np.ndarray:
    """
    Per-minute Gaussian draws around the configured mean shape.

    Returns:
        A ``(minutes, houses)`` array of non-negative watts
    """
    hours = cfg.start_hour + np.arange(cfg.minutes) / 60.0
    mean = shape_series(cfg.mean_shape_kw, hours)
    if cfg.std_shape_kw is not None:
        std = shape_series(cfg.std_shape_kw, hours)
    else:
        std = cfg.std_fraction * mean
    rng = np.random.default_rng([seed, LOAD_STREAM])
    noise = rng.standard_normal(size=(cfg.minutes, houses))
    return np.maximum(0.0, mean[:, None] + std[:, None] * noise)


def _peak_apparent(net: Network, house_ids: List[str], loads_w: np.ndarray,
                   power_factor: float) -> float:
    sweep = compile_network(net)
    p = np.zeros(sweep.size)
    q = np.zeros(sweep.size)
    positions = sweep.bus_positions(house_ids)
    p[positions] = loads_w
    q[positions] = loads_w * math.tan(math.acos(power_factor))
    state = sweep.solve_arrays(p, q, 1.0)
    return sweep.substation_apparent(state)


def calibrate_scale(net: Network, house_ids: List[str], peak_loads_w: np.ndarray,
                    cfg: ScenarioConfig) -> float:
    """
    Scale factor that brings the substation apparent power at the peak
    minute to ``cfg.target_peak_va``, solved by secant iteration on the
    power-flow result.

    Raises:
        CalibrationError: If the iteration fails or the feeder collapses
    """
    target = cfg.target_peak_va
    total = float(np.sum(peak_loads_w))
    if total <= 0:
        raise CalibrationError("Cannot calibrate an all-zero load peak")

    def residual(scale: float) -> float:
        try:
            return _peak_apparent(net, house_ids, scale * peak_loads_w, cfg.power_factor) - target
        except PowerFlowError as e:
            raise CalibrationError("Power flow failed during calibration",
                                   f"scale {scale:.6g}: {e}") from e

    s0 = target * cfg.power_factor / total
    s1 = s0 * 0.98
    f0 = residual(s0)
    f1 = residual(s1)
    for iteration in range(1, 31):
        if abs(f1) <= 1e-9 * target:
            break
        if f1 == f0:
            raise CalibrationError("Calibration stalled", f"scale {s1:.6g}")
        s0, s1, f0 = s1, s1 - f1 * (s1 - s0) / (f1 - f0), f1
        if not (math.isfinite(s1) and s1 > 0):
            raise CalibrationError("Calibration diverged", f"scale {s1}")
        f1 = residual(s1)
        logger.debug("Calibration iteration %d: scale %.6f, error %.3f VA", iteration, s1, f1)
    else:
        raise CalibrationError("Calibration did not converge", f"last error {f1:.3f} VA")
    return s1


def draw_fleet(cfg: ScenarioConfig, house_ids: List[str], seed: int) -> Tuple[List[EvSpec], List[str]]:
    """
    One EV per house plus the order in which houses receive them.

    Arrivals follow a Gaussian truncated to the arrival window; initial SOC
    is uniform over ``initial_soc_range``.
    """
    n = len(house_ids)
    rng = np.random.default_rng([seed, FLEET_STREAM])
    low, high = cfg.arrival_window_h
    a = (low - cfg.arrival_mean_h) / cfg.arrival_std_h
    b = (high - cfg.arrival_mean_h) / cfg.arrival_std_h
    arrival_h = truncnorm.rvs(a, b, loc=cfg.arrival_mean_h, scale=cfg.arrival_std_h,
                              size=n, random_state=rng)
    soc = rng.uniform(cfg.initial_soc_range[0], cfg.initial_soc_range[1], size=n)
    order = rng.permutation(n)

    horizon = int(cfg.horizon_s)
    if cfg.departure_h is None:
        departure = horizon
    else:
        departure = min(horizon, int(round((cfg.departure_h - cfg.start_hour) * 3600)))
    evs = []
    for i, house in enumerate(house_ids):
        arrival = int(round((arrival_h[i] - cfg.start_hour) * 3600))
        evs.append(EvSpec(
            ev_id=f"EV-{house}",
            house_id=house,
            arrival_s=min(max(arrival, 0), departure - 1),
            departure_s=departure,
            initial_soc=float(soc[i]),
            battery_capacity_wh=cfg.battery_capacity_wh,
            charger_rating_w=cfg.charger_rating_w,
            max_current_a=cfg.max_current_a,
        ))
    return evs, [house_ids[i] for i in order]


def fleet_size(penetration: float, houses: int) -> int:
    return int(math.floor(penetration * houses + 0.5))


def generate_scenario(net: Network, cfg: ScenarioConfig = None, seed: Optional[int] = None,
                      penetration: Optional[float] = None) -> Scenario:
    """
    Generate the household and EV dataset for ``net``.

    Args:
        net: The feeder; one profile is drawn per house
        cfg: Load shape, calibration and fleet parameters
        seed: Overrides ``cfg.seed``
        penetration: Overrides ``cfg.penetration``

    Returns:
        A scenario that is identical for identical inputs

    Raises:
        CalibrationError: If the calibrated base-load peak falls outside
            ``cfg.calibration_band_va``
    """
    cfg = cfg or ScenarioConfig()
    seed = cfg.seed if seed is None else seed
    penetration = cfg.penetration if penetration is None else penetration
    if not 0 <= penetration <= 1:
        raise ScenarioError("EV penetration must lie in [0, 1]", f"{penetration}")

    house_ids = net.houses
    if not house_ids:
        raise ScenarioError("Network has no houses")
    raw = draw_household_loads(cfg, len(house_ids), seed)

    scale = 1.0
    metadata = {}
    if cfg.calibrate:
        peak_minute = int(np.argmax(raw.sum(axis=1)))
        scale = calibrate_scale(net, house_ids, raw[peak_minute], cfg)
        loads = np.round(raw * scale, PROFILE_DECIMALS)
        achieved = _peak_apparent(net, house_ids, loads[peak_minute], cfg.power_factor)
        low, high = cfg.calibration_band_va
        if not low <= achieved <= high:
            raise CalibrationError("Calibrated peak outside the configured band",
                                   f"{achieved:.0f} VA not in [{low:.0f}, {high:.0f}]")
        metadata = {"peak_minute": peak_minute, "calibrated_peak_va": achieved,
                    "target_peak_va": cfg.target_peak_va}
        logger.info("Calibrated household loads: scale %.4f, peak %.0f VA at minute %d",
                    scale, achieved, peak_minute)
    else:
        loads = np.round(raw, PROFILE_DECIMALS)

    profiles = [HouseholdProfile(house, loads[:, i], cfg.power_factor)
                for i, house in enumerate(house_ids)]
    fleet, order = draw_fleet(cfg, house_ids, seed)
    selected = set(order[:fleet_size(penetration, len(house_ids))])
    evs = [ev for ev in fleet if ev.house_id in selected]

    scenario = Scenario(
        seed=seed,
        horizon_s=int(cfg.horizon_s),
        profiles=profiles,
        evs=evs,
        ev_penetration=float(penetration),
        start_hour=cfg.start_hour,
        scale_factor=float(scale),
        ev_order=order,
        metadata=metadata,
    )
    logger.info("Generated scenario: seed %d, %d houses, %d EVs", seed, len(profiles), len(evs))
    return scenario


def with_penetration(scenario: Scenario, penetration: float) -> Scenario:
    """
    The same dataset with a smaller EV fleet.

    Houses keep their EV in ``ev_order`` order, so the baseline and the
    evaluation run share household loads and EV specifications.

    Raises:
        ScenarioError: If the requested fleet is not contained in ``scenario``
    """
    if not 0 <= penetration <= 1:
        raise ScenarioError("EV penetration must lie in [0, 1]", f"{penetration}")
    order = scenario.ev_order or [ev.house_id for ev in scenario.evs]
    wanted = set(order[:fleet_size(penetration, len(scenario.profiles))])
    present = {ev.house_id for ev in scenario.evs}
    missing = wanted - present
    if missing:
        raise ScenarioError("Scenario does not contain the requested fleet",
                            f"{len(missing)} houses without an EV, e.g. {sorted(missing)[0]}")
    return Scenario(
        seed=scenario.seed,
        horizon_s=scenario.horizon_s,
        profiles=scenario.profiles,
        evs=[ev for ev in scenario.evs if ev.house_id in wanted],
        ev_penetration=float(penetration),
        start_hour=scenario.start_hour,
        scale_factor=scenario.scale_factor,
        ev_order=list(scenario.ev_order),
        metadata=dict(scenario.metadata),
    )
