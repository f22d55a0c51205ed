"""Integration tests for the co-simulation engine, controller sweeps and comparison."""

import unittest

import numpy as np

from src.grid import build_synthetic_feeder
from src.metrics import score_run
from src.models import ControllerConfig, FeederConfig, ScoreReport, SimConfig
from src.scenario import with_penetration
from src.simulation import (
    ComparisonTable,
    CoSimulation,
    check_compatible,
    compare,
    order_rows,
    run,
    run_baseline,
    run_controllers,
    table_from_reports,
)
from src.utils.exceptions import IncompatibleArtifactsError, InvalidConfigurationError, InvalidInputError
from tests.support import SMALL_FEEDER, flat_thresholds, small_feeder, small_scenario


def sim_config(kind, **controller):
    return SimConfig(controller=ControllerConfig(controller=kind, **controller))


class TestCoSimulation(unittest.TestCase):
    """Test cases for single runs on the small feeder."""

    @classmethod
    def setUpClass(cls):
        cls.net = small_feeder()
        cls.scenario = small_scenario(cls.net)

    def test_no_control_draws_full_current(self):
        """Test that uncontrolled chargers sit at 41 A and deliver the expected energy."""
        result = run(self.net, self.scenario, sim_config("no_control"))
        self.assertEqual(result.comm_events, 0)
        self.assertEqual(result.ev_current.shape, (3600, 4))
        for i, ev in enumerate(self.scenario.evs):
            with self.subTest(ev=ev.ev_id):
                plugged = result.times_s >= ev.arrival_s
                np.testing.assert_array_equal(result.ev_current[plugged, i], 41.0)
                np.testing.assert_array_equal(result.ev_current[~plugged, i], 0.0)
                expected = 41.0 * 240.0 * (3600 - ev.arrival_s) / 3600.0
                self.assertAlmostEqual(result.ev_energy_wh[i] / expected, 1.0, places=9)
        self.assertTrue(np.all(np.isnan(result.ev_full_s)))

    def test_centralized_counts_and_ramps(self):
        """Test one broadcast per decision tick and the additive ramp to the limit."""
        result = run(self.net, self.scenario, sim_config("c_aimd", capacity_target_va=1.0e9))
        self.assertEqual(result.comm_events, 360)
        np.testing.assert_array_equal(result.ev_current[-1], 41.0)
        self.assertLessEqual(float(result.ev_current.max()), 41.0)
        increments = np.diff(result.ev_current, axis=0)
        self.assertLessEqual(float(increments.max()), 1.0)

    def test_centralized_backs_off_when_congested(self):
        result = run(self.net, self.scenario, sim_config("c_aimd", capacity_target_va=1.0))
        self.assertEqual(float(result.ev_current.max()), 0.0)
        self.assertEqual(result.ev_energy_wh.sum(), 0.0)

    def test_distributed_communicates_once(self):
        thresholds = flat_thresholds(self.net, 230.0)
        result = run(self.net, self.scenario, sim_config("d_aimd"), thresholds)
        self.assertEqual(result.comm_events, 1)
        self.assertLessEqual(float(result.ev_current.max()), 41.0)

    def test_distributed_requires_thresholds(self):
        with self.assertRaises(InvalidConfigurationError):
            run(self.net, self.scenario, sim_config("d_aimd"))

    def test_droop_stays_within_limit(self):
        result = run(self.net, self.scenario, sim_config("droop"))
        self.assertEqual(result.comm_events, 0)
        self.assertLessEqual(float(result.ev_current.max()), 41.0)
        self.assertGreater(result.ev_energy_wh.sum(), 0.0)
        settled = result.ev_current[2400:].astype(float)
        self.assertLessEqual(float(np.abs(np.diff(settled, axis=0)).max()), 2.0)
        self.assertGreaterEqual(float(result.node_voltage.min()), 216.0)

    def test_deterministic(self):
        """Test that repeated runs give identical channels."""
        first = run(self.net, self.scenario, sim_config("c_aimd"))
        second = run(self.net, self.scenario, sim_config("c_aimd"))
        np.testing.assert_array_equal(first.node_voltage, second.node_voltage)
        np.testing.assert_array_equal(first.ev_current, second.ev_current)
        self.assertEqual(first.scenario_hash, second.scenario_hash)

    def test_zero_penetration_matches_across_controllers(self):
        """Test that without EVs every controller produces the same feeder state."""
        empty = with_penetration(self.scenario, 0.0)
        results = [run(self.net, empty, sim_config(kind)) for kind in ("no_control", "droop", "c_aimd", "d_aimd")]
        for result in results[1:]:
            np.testing.assert_array_equal(result.node_voltage, results[0].node_voltage)
            np.testing.assert_array_equal(result.substation_apparent, results[0].substation_apparent)
            self.assertEqual(result.comm_events, 0)

    def test_horizon_beyond_scenario(self):
        cfg = SimConfig(controller=ControllerConfig(controller="no_control"), horizon_s=7200)
        with self.assertRaises(InvalidConfigurationError):
            CoSimulation(self.net, self.scenario, cfg)

    def test_shorter_horizon(self):
        """Test that a shorter run leaves out the EVs arriving after it."""
        cfg = SimConfig(controller=ControllerConfig(controller="no_control"), horizon_s=600)
        result = run(self.net, self.scenario, cfg)
        self.assertEqual(len(result.times_s), 600)
        self.assertEqual(result.horizon_s, 600.0)
        expected = tuple(ev.ev_id for ev in self.scenario.evs if ev.arrival_s < 600)
        self.assertEqual(result.ev_ids, expected)

    def test_constant_current_power(self):
        """Test that constant-current chargers draw no more than the limit at nominal voltage."""
        cfg = SimConfig(controller=ControllerConfig(controller="no_control"), ev_load_model="constant_current")
        result = run(self.net, self.scenario, cfg)
        self.assertLessEqual(float(result.ev_power.max()), 41.0 * 240.0 + 1e-3)
        self.assertGreater(float(result.ev_power.max()), 0.0)

    def test_recording_stride(self):
        cfg = SimConfig(controller=ControllerConfig(controller="no_control"), record_every_s=60)
        result = run(self.net, self.scenario, cfg)
        self.assertEqual(len(result.times_s), 60)
        self.assertEqual(result.record_every_s, 60.0)
        self.assertEqual(len(result.soc_times_s), 360)
        self.assertEqual(result.node_voltage.dtype, np.float64)
        self.assertEqual(result.transformer_apparent.dtype, np.float64)
        self.assertEqual(result.ev_current.dtype, np.float32)

    def test_baseline_recording(self):
        recording = run_baseline(self.net, self.scenario)
        self.assertEqual(recording.node_ids, tuple(self.net.end_nodes))
        self.assertEqual(len(recording.times_s), 3600)
        self.assertTrue(np.all(recording.substation_apparent > 0))

    def test_frames(self):
        result = run(self.net, self.scenario, sim_config("no_control"))
        frames = result.to_frames(60)
        self.assertEqual(len(frames["node_voltage"]), 60 * 4)
        self.assertEqual(list(frames["ev_current"].columns), ["time_s", "node_id", "value"])
        with self.assertRaises(InvalidInputError):
            result.to_frames(1.5)


class TestEngineInvariants(unittest.TestCase):
    """Test cases for timing and monotonicity properties of the stepping loop."""

    @classmethod
    def setUpClass(cls):
        cls.net = small_feeder()
        cls.scenario = small_scenario(cls.net)
        cls.congested = run(cls.net, cls.scenario, sim_config("c_aimd", capacity_target_va=25000.0))

    def test_commands_change_only_on_ticks(self):
        """Test that a charger's current moves only at plug-in and one step after each of its T_a ticks."""
        result = self.congested
        changes = np.diff(result.ev_current, axis=0) != 0
        for i, arrival in enumerate(result.ev_arrival_s):
            self.assertTrue(np.isnan(result.ev_full_s[i]))
            arrival_step = int(np.ceil(arrival))
            rows = np.flatnonzero(changes[:, i]) + 1
            with self.subTest(ev=result.ev_ids[i]):
                self.assertGreater(len(rows), 1)
                for row in rows:
                    tick = row - 1
                    self.assertTrue(row == arrival_step
                                    or (tick > arrival_step and (tick - arrival_step) % 10 == 0), row)

    def test_overshoot_lasts_at_most_one_period(self):
        """Test that substation loading above the C-AIMD target never lasts longer than T_a."""
        over = self.congested.substation_apparent >= 25000.0
        self.assertTrue(over.any())
        longest = run_length = 0
        for flag in over:
            run_length = run_length + 1 if flag else 0
            longest = max(longest, run_length)
        self.assertLessEqual(longest, 10)

    def test_household_load_changes_on_minutes(self):
        """Test that without EVs the feeder state is constant within every minute."""
        recording = run_baseline(self.net, self.scenario)
        per_minute = recording.substation_apparent.reshape(-1, 60)
        np.testing.assert_array_equal(np.ptp(per_minute, axis=1), 0.0)
        voltage = recording.node_voltage.reshape(60, 60, -1)
        np.testing.assert_array_equal(np.ptp(voltage, axis=1), 0.0)

    def test_state_of_charge_never_falls(self):
        thresholds = flat_thresholds(self.net, 230.0)
        for kind in ("no_control", "droop", "c_aimd", "d_aimd"):
            result = run(self.net, self.scenario, sim_config(kind), thresholds)
            with self.subTest(controller=kind):
                self.assertTrue(np.all(np.diff(result.ev_soc, axis=0) >= 0))
                self.assertTrue(np.all(result.ev_energy_wh >= 0))


class TestDroopSettling(unittest.TestCase):
    """Test cases for droop charging on a secondary with weak transformers."""

    @classmethod
    def setUpClass(cls):
        net = build_synthetic_feeder(FeederConfig(**SMALL_FEEDER, transformer_r_pct=12.0, transformer_x_pct=8.0))
        cls.result = run(net, small_scenario(net), sim_config("droop"))

    def test_currents_settle(self):
        """Test that commands stop swinging once the fleet has plugged in."""
        current = self.result.ev_current.astype(float)
        self.assertLessEqual(float(np.abs(np.diff(current, axis=0)).max()), 20.5 + 1e-4)
        settled = current[2400:]
        self.assertLessEqual(float(np.abs(np.diff(settled, axis=0)).max()), 2.0)
        self.assertTrue(np.all(settled > 0.0))
        self.assertTrue(np.all(settled < 41.0))

    def test_voltage_stays_above_cutoff(self):
        self.assertGreaterEqual(float(self.result.node_voltage.min()), 216.0)


class TestComparison(unittest.TestCase):
    """Test cases for the comparison table and controller sweeps."""

    @classmethod
    def setUpClass(cls):
        cls.net = small_feeder()
        cls.scenario = small_scenario(cls.net)
        cls.thresholds = flat_thresholds(cls.net, 230.0)
        cls.results = run_controllers(cls.net, cls.scenario, SimConfig(),
                                      ["d_aimd", "no_control", "c_aimd", "droop"], cls.thresholds)

    def test_run_controllers_keeps_input_order(self):
        self.assertEqual(list(self.results), ["d_aimd", "no_control", "c_aimd", "droop"])
        self.assertEqual(self.results["c_aimd"].controller, "C-AIMD")

    def test_table_order(self):
        """Test that rows come out in the fixed controller order."""
        table = compare(self.results)
        self.assertEqual([row.algorithm for row in table.rows], ["No-Control", "Droop", "C-AIMD", "D-AIMD"])
        self.assertEqual(table.row("D-AIMD").cos, 1)
        self.assertEqual(table.row("No-Control").cos, 0)
        self.assertEqual(table.scenario_hash, self.results["droop"].scenario_hash)

    def test_text_and_frame(self):
        table = compare(self.results)
        text = table.to_text()
        header = text.splitlines()[0]
        for title in ("Algorithm", "VVS (V-s)", "GCS (MVAh)", "LCS (kVAh)", "CUS (%)", "ACPS (kW)", "FS", "COS"):
            self.assertIn(title, header)
        self.assertEqual(len(text.splitlines()), 6)
        frame = table.to_frame()
        self.assertEqual(list(frame["algorithm"]), ["No-Control", "Droop", "C-AIMD", "D-AIMD"])

    def test_incompatible_runs(self):
        other = run(self.net, small_scenario(self.net, seed=8), sim_config("no_control"))
        with self.assertRaises(IncompatibleArtifactsError):
            compare({"a": self.results["no_control"], "b": other})

    def test_check_compatible(self):
        self.assertEqual(check_compatible({"a": ("s", "n"), "b": ("s", "n")}), ("s", "n"))
        with self.assertRaises(IncompatibleArtifactsError):
            check_compatible({"a": ("s", "n"), "b": ("s", "m")})

    def test_empty_comparison(self):
        with self.assertRaises(InvalidInputError):
            compare({})
        with self.assertRaises(InvalidInputError):
            ComparisonTable().row("C-AIMD")

    def test_from_reports(self):
        reports = {name: score_run(result) for name, result in self.results.items()}
        hashes = {name: (r.scenario_hash, r.network_hash) for name, r in self.results.items()}
        table = table_from_reports(reports, hashes)
        self.assertEqual([row.csv_row() for row in table.rows],
                         [row.csv_row() for row in compare(self.results).rows])

    def test_unknown_algorithms_sort_last(self):
        rows = [ScoreReport("Custom", 0, 0, 0, 0, 0, 1.0, 0), ScoreReport("Droop", 0, 0, 0, 0, 0, 1.0, 0)]
        self.assertEqual([row.algorithm for row in order_rows(rows)], ["Droop", "Custom"])

    def test_parallel_sweep_matches_serial(self):
        parallel = run_controllers(self.net, self.scenario, SimConfig(), ["no_control", "c_aimd"],
                                   workers=2, sink=_score)
        for kind in ("no_control", "c_aimd"):
            self.assertEqual(parallel[kind], score_run(self.results[kind]).csv_row())


def _score(result, cfg):
    return score_run(result).csv_row()


if __name__ == '__main__':
    unittest.main()
