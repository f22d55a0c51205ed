"""Fixed-step co-simulation of household loads, EV chargers and the feeder."""

import logging
import math
import time
from typing import Optional

import numpy as np

from ..controllers.base import ChargingController, FleetContext, Observation
from ..controllers.manager import ControllerManager
from ..grid.storage import network_hash
from ..models.config import SimConfig
from ..models.learning import ThresholdTable
from ..models.network import Network
from ..models.results import Recording, SimResult
from ..models.scenario import Scenario
from ..powerflow.sweep import compile_network
from ..scenario.generator import with_penetration
from ..scenario.soc import soc_update_array
from ..scenario.storage import scenario_hash
from ..utils.exceptions import InvalidConfigurationError, PowerFlowError, ScenarioError, SimulationError

logger = logging.getLogger(__name__)


def _stride(period: float, dt: float) -> int:
    return max(1, int(round(period / dt)))


class CoSimulation:
    """
    One deterministic run of a controller over a scenario.

    Each step assembles the injections, re-solves the power flow when they
    changed, records, lets the controller act for the chargers whose
    decision tick it is, and integrates the batteries. A charger's ticks
    fall every T_a from its plug-in step, so the fleet does not move in
    lockstep. Commands issued at a tick apply from the next step.
    """

    def __init__(
        self,
        net: Network,
        scenario: Scenario,
        cfg: SimConfig = None,
        thresholds: Optional[ThresholdTable] = None,
        controller: Optional[ChargingController] = None,
    ):
        self.net = net
        self.scenario = scenario
        self.cfg = cfg or SimConfig()
        self.thresholds = thresholds
        self.controller = controller or ControllerManager().create(self.cfg.controller)

        horizon = self.cfg.horizon_s if self.cfg.horizon_s is not None else scenario.horizon_s
        if horizon > scenario.horizon_s:
            raise InvalidConfigurationError("Simulation horizon exceeds the scenario",
                                            f"{horizon} > {scenario.horizon_s}")
        self.horizon_s = float(horizon)
        self.dt = float(self.cfg.dt_s)
        self.steps = int(round(self.horizon_s / self.dt))

        self.sweep = compile_network(net, self.cfg.tolerance_pu, self.cfg.max_iterations)
        missing = [h for h in scenario.house_ids if not net.has_bus(h)]
        if missing:
            raise ScenarioError("Scenario house is not a bus of the network",
                                f"{len(missing)} unknown, first {missing[0]}")
        self.house_pos = self.sweep.bus_positions(scenario.house_ids)
        self.loads_w = scenario.load_matrix()
        self.loads_var = self.loads_w * np.tan(np.arccos(scenario.power_factors()))[None, :]

        self.node_ids = tuple(net.end_nodes)
        self.node_pos = self.sweep.bus_positions(self.node_ids)

        transformers = net.transformers
        self.xf_ids = tuple(branch.key for branch in transformers)
        self.xf_pos = self.sweep.branch_positions(self.xf_ids)
        self.xf_ratings = np.array([branch.rating for branch in transformers], dtype=float)
        self.xf_groups = np.array([branch.neighborhood if branch.neighborhood is not None else 0
                                   for branch in transformers], dtype=int)

        evs = [ev for ev in scenario.evs if ev.arrival_s < self.horizon_s]
        if len(evs) < len(scenario.evs):
            logger.debug("%d EVs arrive after the horizon and are left out",
                         len(scenario.evs) - len(evs))
        self.evs = evs
        nominal = self.cfg.controller.nominal_ev_voltage
        self.ev_ids = tuple(ev.ev_id for ev in evs)
        self.ev_nodes = tuple(net.ev_node(ev.house_id) for ev in evs)
        self.ev_pos = self.sweep.bus_positions(self.ev_nodes)
        self.arrival = np.array([ev.arrival_s for ev in evs], dtype=float)
        self.arrival_step = np.ceil(self.arrival / self.dt).astype(int)
        self.departure = np.minimum(np.array([ev.departure_s for ev in evs], dtype=float), self.horizon_s)
        self.capacity_wh = np.array([ev.battery_capacity_wh for ev in evs], dtype=float)
        self.max_current = np.array([min(ev.max_current_a, ev.charger_rating_w / nominal) for ev in evs],
                                    dtype=float)
        self.initial_soc = np.array([ev.initial_soc for ev in evs], dtype=float)

    def run(self) -> SimResult:
        cfg = self.cfg
        dt = self.dt
        n_ev = len(self.ev_ids)
        nominal = cfg.controller.nominal_ev_voltage
        constant_current = cfg.ev_load_model == "constant_current"

        self.controller.prepare(FleetContext(
            ev_ids=self.ev_ids,
            ev_nodes=self.ev_nodes,
            max_current=self.max_current,
            substation_rating=self.net.substation_rating,
            thresholds=self.thresholds,
        ))

        record_stride = _stride(cfg.record_every_s, dt)
        soc_stride = _stride(cfg.soc_every_s, dt)
        tick_stride = _stride(cfg.t_a_s, dt)
        phase = self.arrival_step % tick_stride
        records = math.ceil(self.steps / record_stride)
        soc_records = math.ceil(self.steps / soc_stride)

        times = np.arange(records) * record_stride * dt
        node_voltage = np.empty((records, len(self.node_ids)))
        substation = np.empty(records)
        xf_apparent = np.empty((records, len(self.xf_ids)))
        ev_current = np.empty((records, n_ev), dtype=np.float32)
        ev_power_rec = np.empty((records, n_ev), dtype=np.float32)
        soc_times = np.arange(soc_records) * soc_stride * dt
        ev_soc = np.empty((soc_records, n_ev), dtype=np.float32)

        currents = np.zeros(n_ev)
        soc = self.initial_soc.copy()
        energy_wh = np.zeros(n_ev)
        full_s = np.full(n_ev, np.nan)
        arrived = np.zeros(n_ev, dtype=bool)
        plugged = np.zeros(n_ev, dtype=bool)
        ev_voltage = np.array([self.net.bus(node).nominal_voltage for node in self.ev_nodes], dtype=float)

        p = np.zeros(self.sweep.size)
        q = np.zeros(self.sweep.size)
        state = None
        dirty = True
        minute = -1
        solves = 0
        voltages = s_sub = xf = None
        started = time.perf_counter()

        for k in range(self.steps):
            t = k * dt
            if int(t // 60) != minute:
                minute = int(t // 60)
                dirty = True

            leaving = plugged & (self.departure <= t)
            if leaving.any():
                plugged[leaving] = False
                currents[leaving] = 0.0
                dirty = True
            arriving = ~arrived & (self.arrival <= t)
            if arriving.any():
                arrived[arriving] = True
                plugged[arriving] = self.departure[arriving] > t
                currents[arriving] = self.controller.arrival_current(ev_voltage[arriving],
                                                                     self.max_current[arriving])
                currents[~plugged] = 0.0
                dirty = True

            if dirty:
                p[:] = 0.0
                q[:] = 0.0
                p[self.house_pos] = self.loads_w[minute]
                q[self.house_pos] = self.loads_var[minute]
                current_a = None
                if constant_current:
                    current_a = np.zeros(self.sweep.size)
                    np.add.at(current_a, self.ev_pos, currents)
                else:
                    np.add.at(p, self.ev_pos, nominal * currents)
                try:
                    state = self.sweep.solve_arrays(p, q, cfg.source_voltage_pu, current_a, warm=state)
                except PowerFlowError as e:
                    raise SimulationError(f"Power flow failed at t={t:g} s", str(e)) from e
                solves += 1
                dirty = False
                voltages = self.sweep.voltages(state)
                ev_voltage = voltages[self.ev_pos]
                s_sub = self.sweep.substation_apparent(state)
                xf = self.sweep.branch_apparent(state, self.xf_pos)

            power = currents * (ev_voltage if constant_current else nominal)

            if k % record_stride == 0:
                row = k // record_stride
                node_voltage[row] = voltages[self.node_pos]
                substation[row] = s_sub
                xf_apparent[row] = xf
                ev_current[row] = currents
                ev_power_rec[row] = power
            if k % soc_stride == 0:
                ev_soc[k // soc_stride] = soc

            if k % tick_stride == 0:
                self.controller.period_started(t)
            # Each charger's T_a clock starts at its own plug-in step
            due = plugged & (soc < 1.0) & (k > self.arrival_step) & (k % tick_stride == phase)
            if due.any():
                observation = Observation(time_s=t, ev_voltage=ev_voltage.copy(), substation_apparent=s_sub)
                commanded = self.controller.decide(observation, currents, due)
                if not np.array_equal(commanded, currents):
                    currents = np.asarray(commanded, dtype=float)
                    dirty = True

            charging = plugged & (power > 0)
            if charging.any():
                updated = soc_update_array(soc[charging], power[charging], dt, self.capacity_wh[charging])
                energy_wh[charging] += (updated - soc[charging]) * self.capacity_wh[charging]
                soc[charging] = updated
                done = charging & (soc >= 1.0)
                if done.any():
                    full_s[done] = t + dt
                    plugged[done] = False
                    currents[done] = 0.0
                    dirty = True

            if k and t % 3600 == 0:
                logger.info("%s: simulated %d h, %d solves", self.controller.name(), int(t // 3600), solves)

        wall = time.perf_counter() - started
        logger.info("%s finished: %d steps, %d solves, %d comm events, %.1f s",
                    self.controller.name(), self.steps, solves, self.controller.comm_events, wall)
        return SimResult(
            controller=self.controller.name(),
            dt_s=dt,
            times_s=times,
            node_ids=self.node_ids,
            node_voltage=node_voltage,
            substation_apparent=substation,
            substation_rating=self.net.substation_rating,
            transformer_ids=self.xf_ids,
            transformer_ratings=self.xf_ratings,
            transformer_neighborhoods=self.xf_groups,
            transformer_apparent=xf_apparent,
            ev_ids=self.ev_ids,
            ev_nodes=self.ev_nodes,
            ev_current=ev_current,
            ev_power=ev_power_rec,
            soc_times_s=soc_times,
            ev_soc=ev_soc,
            ev_arrival_s=self.arrival,
            ev_departure_s=self.departure,
            ev_full_s=full_s,
            ev_energy_wh=energy_wh,
            comm_events=self.controller.comm_events,
            solves=solves,
            wall_time_s=wall,
            scenario_hash=scenario_hash(self.scenario),
            network_hash=network_hash(self.net),
            metadata={"controller_kind": self.controller.kind.value,
                      "ev_load_model": cfg.ev_load_model,
                      "horizon_s": self.horizon_s},
        )


def run(net: Network, scenario: Scenario, cfg: SimConfig = None,
        thresholds: Optional[ThresholdTable] = None) -> SimResult:
    """
    Simulate ``scenario`` on ``net`` under the controller selected in ``cfg``.

    Raises:
        InvalidConfigurationError: D-AIMD without thresholds
        InvalidInputError: Thresholds missing for an EV node
        SimulationError: Power flow failure, with the simulated time
    """
    return CoSimulation(net, scenario, cfg, thresholds).run()


def baseline_inputs(scenario: Scenario, cfg: SimConfig = None):
    """The no-EV scenario and uncontrolled config a baseline run uses."""
    cfg = cfg or SimConfig()
    return with_penetration(scenario, 0.0), cfg.with_controller("no_control")


def run_baseline(net: Network, scenario: Scenario, cfg: SimConfig = None) -> Recording:
    """Run the scenario without EVs and return the channels training needs."""
    baseline, baseline_cfg = baseline_inputs(scenario, cfg)
    return run(net, baseline, baseline_cfg).recording()
