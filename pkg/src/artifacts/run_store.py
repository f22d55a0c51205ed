"""Output directory layout: topology, scenario, thresholds and run directories."""

import json
import logging
import shutil
from pathlib import Path
from typing import List, Optional, Union

import pandas as pd

from ..models.results import Recording, RunManifest, ScoreReport, SimResult
from ..utils.exceptions import ArtifactCorruptedError, ArtifactNotFoundError, InvalidInputError
from .hashing import sha256_file, write_json
from .plot_data import write_run_plot_data

logger = logging.getLogger(__name__)

MANIFEST_FILE = "manifest.json"
SCORES_FILE = "scores.json"
TIMING_FILE = "timing.json"
SERIES_DIR = "series"
PLOT_DIR = "plot_data"


class RunStore:
    """
    Lays out and reads back everything the pipeline writes under one directory.

    ``runs/<name>/`` holds one simulation: ``manifest.json``, ``scores.json``,
    ``series/*.csv``, ``timing.json`` and, on request, ``plot_data/``.
    """

    def __init__(self, out_dir: Union[str, Path] = "out"):
        self.root = Path(out_dir)
        self.root.mkdir(parents=True, exist_ok=True)

    # -- fixed locations ---------------------------------------------------

    @property
    def topology_path(self) -> Path:
        return self.root / "grid" / "topology.json"

    @property
    def topology_report_path(self) -> Path:
        return self.root / "grid" / "validation.json"

    @property
    def scenario_dir(self) -> Path:
        return self.root / "scenario"

    @property
    def baseline_dir(self) -> Path:
        return self.root / "baseline"

    @property
    def thresholds_path(self) -> Path:
        return self.root / "thresholds.json"

    def run_dir(self, name: str) -> Path:
        return self.root / "runs" / name

    # -- writing -------------------------------------------------------------

    def save_run(
        self,
        result: SimResult,
        report: ScoreReport,
        manifest: RunManifest,
        series_every_s: Optional[float] = None,
        emit_plot_data: bool = False,
        directory: Optional[Path] = None,
    ) -> RunManifest:
        """
        Write a run directory and return the completed manifest.

        ``manifest.outputs`` is filled with the relative path and SHA-256 of
        every file written; wall time goes to ``timing.json`` only so the
        manifest stays byte-identical across repeated runs.
        """
        run_dir = Path(directory) if directory is not None else self.run_dir(manifest.controller)
        series_dir = run_dir / SERIES_DIR
        series_dir.mkdir(parents=True, exist_ok=True)

        written = []
        for channel, frame in result.to_frames(series_every_s).items():
            path = series_dir / f"{channel}.csv"
            frame.to_csv(path, index=False, float_format="%.10g")
            written.append(path)
        scores_path = run_dir / SCORES_FILE
        write_json(scores_path, report.to_dict())
        written.append(scores_path)
        if emit_plot_data:
            written.extend(write_run_plot_data(result, report, run_dir / PLOT_DIR))

        manifest.outputs = {str(path.relative_to(run_dir)): sha256_file(path) for path in written}
        manifest.scores = report.to_dict()
        manifest.comm_events = result.comm_events
        manifest.solves = result.solves
        write_json(run_dir / MANIFEST_FILE, manifest.to_dict())
        write_json(run_dir / TIMING_FILE, {"wall_time_s": result.wall_time_s})
        logger.info("Wrote run %s (%d files)", run_dir, len(written))
        return manifest

    # -- reading -------------------------------------------------------------

    def _resolve(self, run: Union[str, Path]) -> Path:
        path = Path(run)
        if (path / MANIFEST_FILE).exists():
            return path
        candidate = self.run_dir(str(run))
        if (candidate / MANIFEST_FILE).exists():
            return candidate
        raise ArtifactNotFoundError("Run directory not found", str(run))

    def _read_json(self, path: Path):
        if not path.exists():
            raise ArtifactNotFoundError("Artifact file not found", str(path))
        try:
            with open(path, "r", encoding="utf-8") as f:
                return json.load(f)
        except ValueError as e:
            raise ArtifactCorruptedError(f"File {path} is corrupted", str(e)) from e

    def load_manifest(self, run: Union[str, Path]) -> RunManifest:
        path = self._resolve(run) / MANIFEST_FILE
        data = self._read_json(path)
        try:
            return RunManifest.from_dict(data)
        except InvalidInputError as e:
            raise ArtifactCorruptedError(f"Manifest {path} is corrupted", str(e)) from e

    def load_scores(self, run: Union[str, Path]) -> ScoreReport:
        path = self._resolve(run) / SCORES_FILE
        data = self._read_json(path)
        try:
            return ScoreReport.from_dict(data)
        except InvalidInputError as e:
            raise ArtifactCorruptedError(f"Scores {path} are corrupted", str(e)) from e

    def load_series(self, run: Union[str, Path], channel: str) -> pd.DataFrame:
        path = self._resolve(run) / SERIES_DIR / f"{channel}.csv"
        if not path.exists():
            raise ArtifactNotFoundError("Series file not found", str(path))
        try:
            frame = pd.read_csv(path, dtype={"node_id": str})
        except (ValueError, pd.errors.ParserError) as e:
            raise ArtifactCorruptedError(f"Series {path} is corrupted", str(e)) from e
        if list(frame.columns) != ["time_s", "node_id", "value"]:
            raise ArtifactCorruptedError(f"Series {path} has unexpected columns", ", ".join(frame.columns))
        return frame

    def load_recording(self, run: Union[str, Path]) -> Recording:
        """Rebuild the voltage and substation channels of a stored run."""
        manifest = self.load_manifest(run)
        voltage = self.load_series(run, "node_voltage")
        substation = self.load_series(run, "substation_apparent")
        wide = voltage.pivot(index="time_s", columns="node_id", values="value")
        node_ids = tuple(dict.fromkeys(voltage["node_id"]))
        wide = wide[list(node_ids)]
        substation = substation.set_index("time_s")["value"]
        if not wide.index.equals(substation.index) or wide.isna().any().any():
            raise ArtifactCorruptedError("Stored voltage and substation series are misaligned", str(run))
        return Recording(
            times_s=wide.index.to_numpy(dtype=float),
            node_ids=node_ids,
            node_voltage=wide.to_numpy(dtype=float),
            substation_apparent=substation.to_numpy(dtype=float),
            scenario_hash=manifest.scenario_hash,
            network_hash=manifest.network_hash,
        )

    def list_runs(self) -> List[str]:
        """Names of the run directories under ``runs/``."""
        runs_root = self.root / "runs"
        if not runs_root.exists():
            return []
        return sorted(p.name for p in runs_root.iterdir() if (p / MANIFEST_FILE).exists())

    def delete_run(self, name: str) -> bool:
        run_dir = self.run_dir(name)
        if not run_dir.exists():
            return False
        shutil.rmtree(run_dir)
        return True

