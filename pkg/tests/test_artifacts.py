"""Unit tests for run directories, hashing and plot data tables."""

import json
import shutil
import tempfile
import unittest
from pathlib import Path

import numpy as np
import pandas as pd

from src.artifacts import (
    RunStore,
    canonical_json,
    sampled_ev,
    sha256_arrays,
    sha256_file,
    sha256_json,
    write_training_scatter,
)
from src.learning import extract_training_set, fit_polynomial
from src.metrics import score_run
from src.models import ControllerConfig, RunManifest, SimConfig
from src.simulation import run
from src.utils.exceptions import ArtifactCorruptedError, ArtifactNotFoundError
from tests.support import small_feeder, small_scenario


class TestHashing(unittest.TestCase):
    """Test cases for canonical serialization and hashes."""

    def test_canonical_json_sorts_keys(self):
        self.assertEqual(canonical_json({"b": 1, "a": [1, 2]}), '{"a":[1,2],"b":1}')
        self.assertEqual(sha256_json({"b": 1, "a": 2}), sha256_json({"a": 2, "b": 1}))

    def test_array_hash(self):
        first = sha256_arrays(np.arange(4.0), prefix="x")
        self.assertEqual(first, sha256_arrays(np.arange(4), prefix="x"))
        self.assertNotEqual(first, sha256_arrays(np.arange(4.0), prefix="y"))
        self.assertNotEqual(first, sha256_arrays(np.arange(1.0, 5.0), prefix="x"))


class TestRunStore(unittest.TestCase):
    """Test cases for RunStore."""

    @classmethod
    def setUpClass(cls):
        cls.net = small_feeder()
        cls.scenario = small_scenario(cls.net)
        cls.result = run(cls.net, cls.scenario,
                         SimConfig(controller=ControllerConfig(controller="no_control")))
        cls.report = score_run(cls.result)

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()
        self.store = RunStore(Path(self.temp_dir) / "out")

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def manifest(self):
        return RunManifest(controller="no_control", config_hash="cfg",
                           scenario_hash=self.result.scenario_hash,
                           network_hash=self.result.network_hash)

    def test_layout(self):
        root = self.store.root
        self.assertEqual(self.store.topology_path, root / "grid" / "topology.json")
        self.assertEqual(self.store.thresholds_path, root / "thresholds.json")
        self.assertEqual(self.store.run_dir("c_aimd"), root / "runs" / "c_aimd")

    def test_save_run_lists_outputs(self):
        """Test that the manifest records every written file with its hash."""
        manifest = self.store.save_run(self.result, self.report, self.manifest(), series_every_s=60)
        run_dir = self.store.run_dir("no_control")
        self.assertIn("scores.json", manifest.outputs)
        self.assertIn("series/node_voltage.csv", manifest.outputs)
        for relative, digest in manifest.outputs.items():
            with self.subTest(file=relative):
                self.assertEqual(sha256_file(run_dir / relative), digest)
        self.assertEqual(manifest.comm_events, 0)
        self.assertTrue((run_dir / "timing.json").exists())

    def test_repeat_save_is_byte_identical(self):
        self.store.save_run(self.result, self.report, self.manifest(), series_every_s=60)
        first = (self.store.run_dir("no_control") / "manifest.json").read_bytes()
        self.store.save_run(self.result, self.report, self.manifest(), series_every_s=60)
        self.assertEqual((self.store.run_dir("no_control") / "manifest.json").read_bytes(), first)

    def test_load_back(self):
        self.store.save_run(self.result, self.report, self.manifest(), series_every_s=60)
        manifest = self.store.load_manifest("no_control")
        self.assertEqual(manifest.scenario_hash, self.result.scenario_hash)
        self.assertEqual(self.store.load_scores("no_control").csv_row(), self.report.csv_row())
        series = self.store.load_series("no_control", "ev_current")
        self.assertEqual(list(series.columns), ["time_s", "node_id", "value"])

    def test_load_recording(self):
        """Test that a stored run gives back a recording on the thinned time axis."""
        self.store.save_run(self.result, self.report, self.manifest(), series_every_s=60)
        recording = self.store.load_recording(self.store.run_dir("no_control"))
        self.assertEqual(len(recording.times_s), 60)
        self.assertEqual(recording.node_ids, self.result.node_ids)
        np.testing.assert_allclose(recording.node_voltage, self.result.node_voltage[::60], rtol=1e-9)
        self.assertEqual(recording.scenario_hash, self.result.scenario_hash)

    def test_missing_and_corrupted(self):
        with self.assertRaises(ArtifactNotFoundError):
            self.store.load_manifest("absent")
        self.store.save_run(self.result, self.report, self.manifest(), series_every_s=60)
        run_dir = self.store.run_dir("no_control")
        (run_dir / "scores.json").write_text("{broken", encoding="utf-8")
        with self.assertRaises(ArtifactCorruptedError):
            self.store.load_scores("no_control")
        (run_dir / "manifest.json").write_text(json.dumps({"controller": "x"}), encoding="utf-8")
        with self.assertRaises(ArtifactCorruptedError):
            self.store.load_manifest("no_control")
        (run_dir / "series" / "ev_power.csv").unlink()
        with self.assertRaises(ArtifactNotFoundError):
            self.store.load_series("no_control", "ev_power")

    def test_list_and_delete(self):
        self.assertEqual(self.store.list_runs(), [])
        self.store.save_run(self.result, self.report, self.manifest(), series_every_s=60)
        self.assertEqual(self.store.list_runs(), ["no_control"])
        self.assertTrue(self.store.delete_run("no_control"))
        self.assertFalse(self.store.delete_run("no_control"))
        self.assertEqual(self.store.list_runs(), [])

    def test_plot_data(self):
        """Test that plot tables are written and listed in the manifest."""
        manifest = self.store.save_run(self.result, self.report, self.manifest(),
                                       series_every_s=60, emit_plot_data=True)
        plot_dir = self.store.run_dir("no_control") / "plot_data"
        for name in ("min_voltage.csv", "substation_apparent.csv", "ev_current_sample.csv",
                     "ev_average_power.csv", "lcs_neighborhoods.csv"):
            with self.subTest(file=name):
                self.assertTrue((plot_dir / name).exists())
                self.assertIn(f"plot_data/{name}", manifest.outputs)
        sample = pd.read_csv(plot_dir / "ev_current_sample.csv")
        index = sampled_ev(self.result)
        self.assertEqual(sample["ev_id"].iloc[0], self.result.ev_ids[index])
        self.assertEqual(self.result.ev_arrival_s[index], self.result.ev_arrival_s.min())
        averages = pd.read_csv(plot_dir / "ev_average_power.csv")
        self.assertEqual(len(averages), 4)

    def test_training_scatter(self):
        recording = self.result.recording()
        samples = extract_training_set(recording, self.net.end_nodes[0], 60)
        coefficients = fit_polynomial(samples, degree=1)
        path = write_training_scatter(samples, coefficients, Path(self.temp_dir) / "plots" / "scatter.csv")
        frame = pd.read_csv(path)
        self.assertEqual(len(frame), 60)
        self.assertEqual(list(frame.columns),
                         ["node_id", "voltage_v", "substation_apparent_va", "fitted_va"])


if __name__ == '__main__':
    unittest.main()
