"""Unit tests for the comparison scores."""

import unittest

import numpy as np
from hypothesis import assume, given, settings, strategies as st
from scipy import integrate

from src.metrics import acps, cos, cus, gcs, jain_fairness, lcs, power_distribution, score_run, vvs
from src.models import ScoreReport, SimResult
from src.utils.exceptions import MetricsError


def hand_result(controller="C-AIMD", comm_events=0, energy_wh=(5000.0, 2500.0)):
    """One-hour run at one-second resolution with two nodes, two transformers and two EVs."""
    steps = 3600
    times = np.arange(steps, dtype=float)
    voltage = np.full((steps, 2), 230.0)
    voltage[:100, 0] = 215.0
    substation = np.full(steps, 2.0e6)
    substation[:1800] = 2.6e6
    transformers = np.full((steps, 2), 20000.0)
    transformers[:, 1] = 30000.0
    n_ev = len(energy_wh)
    return SimResult(
        controller=controller,
        dt_s=1.0,
        times_s=times,
        node_ids=("H1", "H2"),
        node_voltage=voltage,
        substation_apparent=substation,
        substation_rating=2.5e6,
        transformer_ids=("T1", "T2"),
        transformer_ratings=np.array([25000.0, 25000.0]),
        transformer_neighborhoods=np.array([1, 2]),
        transformer_apparent=transformers,
        ev_ids=tuple(f"EV{i}" for i in range(n_ev)),
        ev_nodes=("H1", "H2")[:n_ev],
        ev_current=np.zeros((steps, n_ev)),
        ev_power=np.zeros((steps, n_ev)),
        soc_times_s=times[::10],
        ev_soc=np.zeros((360, n_ev)),
        ev_arrival_s=np.zeros(n_ev),
        ev_departure_s=np.full(n_ev, 3600.0),
        ev_full_s=np.full(n_ev, np.nan),
        ev_energy_wh=np.asarray(energy_wh, dtype=float),
        comm_events=comm_events,
    )


class TestVoltageViolation(unittest.TestCase):
    """Test cases for vvs."""

    def test_hand_integral(self):
        """Test one node at 215 V for 100 s against a 216 V minimum."""
        voltage = np.full(3600, 230.0)
        voltage[:100] = 215.0
        self.assertAlmostEqual(vvs(voltage, 216.0), 100.0)

    def test_no_violation(self):
        self.assertEqual(vvs(np.full((50, 3), 240.0), 216.0), 0.0)

    def test_averaged_over_nodes(self):
        voltage = np.full((100, 4), 240.0)
        voltage[:, 0] = 215.0
        self.assertAlmostEqual(vvs(voltage, 216.0), 25.0)
        self.assertAlmostEqual(vvs(voltage, 216.0, n=1), 100.0)

    def test_additive_over_time(self):
        """Test that integrating two halves equals integrating the whole."""
        rng = np.random.default_rng(3)
        voltage = rng.uniform(205.0, 240.0, size=(120, 3))
        whole = vvs(voltage, 216.0)
        halves = vvs(voltage[:60], 216.0) + vvs(voltage[60:], 216.0)
        self.assertAlmostEqual(whole, halves, places=9)

    def test_empty(self):
        with self.assertRaises(MetricsError):
            vvs([], 216.0)


class TestCapacityScores(unittest.TestCase):
    """Test cases for gcs, lcs and cus."""

    def test_gcs_hand_integral(self):
        self.assertAlmostEqual(gcs(np.full(3600, 2.6e6), 2.5e6), 0.1)

    def test_gcs_below_rating(self):
        self.assertEqual(gcs(np.full(3600, 2.4e6), 2.5e6), 0.0)

    def test_lcs_one_of_two_overloaded(self):
        series = np.column_stack([np.full(3600, 30000.0), np.full(3600, 20000.0)])
        average, breakdown = lcs(series, [25000.0, 25000.0], neighborhoods=[1, 2])
        self.assertAlmostEqual(average, 2.5)
        self.assertAlmostEqual(breakdown[1], 5.0)
        self.assertEqual(breakdown[2], 0.0)

    def test_lcs_mismatch(self):
        with self.assertRaises(MetricsError):
            lcs(np.zeros((10, 2)), [25000.0])
        with self.assertRaises(MetricsError):
            lcs(np.zeros((10, 2)), [25000.0, 25000.0], neighborhoods=[1])

    def test_cus(self):
        self.assertAlmostEqual(cus([1.0e6, 2.5e6], 2.5e6), 100.0)
        self.assertAlmostEqual(cus([4.27e6, 1.0e6], 2.5e6), 170.8)
        with self.assertRaises(MetricsError):
            cus([], 2.5e6)

    @given(st.floats(min_value=1e-3, max_value=1e3))
    def test_cus_is_homogeneous(self, c):
        series = np.array([1.0e6, 2.2e6, 1.7e6])
        self.assertAlmostEqual(cus(series * c, 2.5e6) / cus(series, 2.5e6), c, delta=1e-9 * c)


class TestChargingScores(unittest.TestCase):
    """Test cases for acps, jain_fairness and power_distribution."""

    def test_acps(self):
        self.assertEqual(acps([10000.0, 0.0]), 5.0)
        self.assertEqual(acps([10000.0] * 3), 10.0)
        with self.assertRaises(MetricsError):
            acps([])

    def test_jain_examples(self):
        self.assertEqual(jain_fairness([2, 2, 2, 2]), 1.0)
        self.assertEqual(jain_fairness([1, 0, 0, 0]), 0.25)
        self.assertAlmostEqual(jain_fairness([1, 2, 3]), 36.0 / 42.0, places=12)

    def test_jain_errors(self):
        for shares in ([], [0.0, 0.0], [1.0, -1.0]):
            with self.subTest(shares=shares):
                with self.assertRaises(MetricsError):
                    jain_fairness(shares)

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.floats(min_value=0.0, max_value=100.0), min_size=1, max_size=30),
           st.floats(min_value=1e-3, max_value=1e3))
    def test_jain_scale_invariant(self, shares, c):
        assume(max(shares) > 1e-3)
        scaled = [c * w for w in shares]
        self.assertAlmostEqual(jain_fairness(scaled), jain_fairness(shares), delta=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.floats(min_value=0.0, max_value=100.0), min_size=2, max_size=30),
           st.data())
    def test_jain_rewards_transfers_to_poorer(self, shares, data):
        """Test that moving power from a larger share to a smaller one never lowers the index."""
        assume(max(shares) > 1e-3)
        i = data.draw(st.integers(min_value=0, max_value=len(shares) - 1))
        j = data.draw(st.integers(min_value=0, max_value=len(shares) - 1))
        assume(shares[i] > shares[j])
        fraction = data.draw(st.floats(min_value=0.0, max_value=0.5))
        moved = list(shares)
        delta = fraction * (shares[i] - shares[j])
        moved[i] -= delta
        moved[j] += delta
        self.assertGreaterEqual(jain_fairness(moved), jain_fairness(shares) - 1e-12)

    def test_power_distribution(self):
        summary = power_distribution([2000.0, 4000.0, 6000.0, 8000.0, 10000.0])
        self.assertEqual(summary["min"], 2.0)
        self.assertEqual(summary["median"], 6.0)
        self.assertEqual(summary["max"], 10.0)
        self.assertEqual(power_distribution([]), {})


class TestIntegralScoresOnSmoothSeries(unittest.TestCase):
    """Test cases comparing vvs, gcs and lcs with a fine trapezoid integral."""

    HORIZON = 3600.0
    PERIOD = 1800.0

    def setUp(self):
        self.fine = np.linspace(0.0, self.HORIZON, 72001)

    def wave(self, times, mean, amplitude, phase):
        return mean + amplitude * np.sin(2.0 * np.pi * times / self.PERIOD + phase)

    def bound(self, amplitude, dt):
        """Left-rectangle error bound for a Lipschitz integrand over the horizon."""
        lipschitz = amplitude * 2.0 * np.pi / self.PERIOD
        return lipschitz * dt * self.HORIZON / 2.0 + 1e-9

    def test_vvs(self):
        amplitudes = np.array([6.0, 9.0, 12.0])
        phases = np.array([0.0, 1.0, 2.5])
        for dt in (1.0, 5.0, 30.0):
            times = np.arange(0.0, self.HORIZON, dt)
            voltage = self.wave(times[:, None], 220.0, amplitudes, phases)
            exact = np.mean([
                integrate.trapezoid(np.maximum(0.0, 216.0 - self.wave(self.fine, 220.0, a, p)), self.fine)
                for a, p in zip(amplitudes, phases)
            ])
            with self.subTest(dt=dt):
                self.assertGreater(exact, 0.0)
                self.assertLessEqual(abs(vvs(voltage, 216.0, dt_s=dt) - exact), self.bound(12.0, dt))

    def test_gcs(self):
        for dt in (1.0, 5.0, 30.0):
            times = np.arange(0.0, self.HORIZON, dt)
            series = self.wave(times, 2.4e6, 2.0e5, 0.3)
            excess = np.maximum(0.0, self.wave(self.fine, 2.4e6, 2.0e5, 0.3) - 2.5e6)
            exact = integrate.trapezoid(excess, self.fine) / 3600.0 / 1e6
            with self.subTest(dt=dt):
                self.assertGreater(exact, 0.0)
                self.assertLessEqual(abs(gcs(series, 2.5e6, dt_s=dt) - exact),
                                     self.bound(2.0e5, dt) / 3600.0 / 1e6)

    def test_lcs(self):
        amplitudes = np.array([3000.0, 1000.0])
        for dt in (1.0, 5.0, 30.0):
            times = np.arange(0.0, self.HORIZON, dt)
            series = self.wave(times[:, None], 24000.0, amplitudes, 0.0)
            exact = np.mean([
                integrate.trapezoid(np.maximum(0.0, self.wave(self.fine, 24000.0, a, 0.0) - 25000.0),
                                    self.fine) / 3600.0 / 1e3
                for a in amplitudes
            ])
            average, _ = lcs(series, [25000.0, 25000.0], dt_s=dt)
            with self.subTest(dt=dt):
                self.assertGreater(exact, 0.0)
                self.assertLessEqual(abs(average - exact), self.bound(3000.0, dt) / 3600.0 / 1e3)


class TestScoreRun(unittest.TestCase):
    """Test cases for score_run."""

    def test_hand_built_run(self):
        """Test every score of a run with known channels."""
        report = score_run(hand_result(comm_events=360))
        self.assertAlmostEqual(report.vvs, 50.0)
        self.assertAlmostEqual(report.gcs, 0.05)
        self.assertAlmostEqual(report.lcs, 2.5)
        self.assertEqual(report.lcs_neighborhoods, {1: 0.0, 2: 5.0})
        self.assertAlmostEqual(report.cus, 104.0)
        self.assertAlmostEqual(report.acps, 3.75)
        self.assertAlmostEqual(report.fs, 0.9, places=12)
        self.assertEqual(report.cos, 360)
        self.assertEqual(report.algorithm, "C-AIMD")

    def test_rating_override(self):
        report = score_run(hand_result(), rating=2.6e6)
        self.assertEqual(report.gcs, 0.0)
        self.assertAlmostEqual(report.cus, 100.0)

    def test_no_charging_is_fair(self):
        report = score_run(hand_result(energy_wh=(0.0, 0.0)))
        self.assertEqual(report.fs, 1.0)
        self.assertEqual(report.acps, 0.0)

    def test_no_evs(self):
        report = score_run(hand_result(energy_wh=()))
        self.assertEqual(report.acps, 0.0)
        self.assertEqual(report.fs, 1.0)

    def test_cos_passthrough(self):
        self.assertEqual(cos(hand_result(comm_events=1)), 1)

    def test_plugged_interval_average(self):
        """Test that a full battery ends the averaging window."""
        result = hand_result(energy_wh=(5000.0, 5000.0))
        result.ev_full_s = np.array([1800.0, np.nan])
        np.testing.assert_allclose(result.ev_average_powers(), [10000.0, 5000.0])

    def test_report_round_trip(self):
        report = score_run(hand_result(comm_events=2))
        self.assertEqual(ScoreReport.from_dict(report.to_dict()).csv_row(), report.csv_row())

    def test_report_rejects_invalid_scores(self):
        with self.assertRaises(MetricsError):
            ScoreReport("X", vvs=-1.0, gcs=0.0, lcs=0.0, cus=0.0, acps=0.0, fs=1.0, cos=0)
        with self.assertRaises(MetricsError):
            ScoreReport("X", vvs=0.0, gcs=0.0, lcs=0.0, cus=0.0, acps=0.0, fs=0.0, cos=0)


if __name__ == '__main__':
    unittest.main()
