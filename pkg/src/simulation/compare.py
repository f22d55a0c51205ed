"""Side-by-side score table of several runs."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Optional

import pandas as pd

from ..metrics.scores import score_run
from ..models.charging import ControllerKind
from ..models.results import SCORE_COLUMNS, ScoreReport, SimResult
from ..utils.exceptions import IncompatibleArtifactsError, InvalidInputError

_HEADERS = ("Algorithm", "VVS (V-s)", "GCS (MVAh)", "LCS (kVAh)", "CUS (%)", "ACPS (kW)", "FS", "COS")
_ORDER = {kind.label: i for i, kind in enumerate(ControllerKind)}


@dataclass
class ComparisonTable:
    """One score row per run, in controller order."""

    rows: List[ScoreReport] = field(default_factory=list)
    scenario_hash: Optional[str] = None
    network_hash: Optional[str] = None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([row.csv_row() for row in self.rows], columns=list(SCORE_COLUMNS))

    def to_csv(self, path) -> Path:
        path = Path(path)
        self.to_frame().to_csv(path, index=False, float_format="%.10g")
        return path

    def to_text(self) -> str:
        """Aligned plain-text rendering."""
        cells = [list(_HEADERS)]
        for row in self.rows:
            cells.append([row.algorithm, f"{row.vvs:.1f}", f"{row.gcs:.3f}", f"{row.lcs:.3f}",
                          f"{row.cus:.2f}", f"{row.acps:.2f}", f"{row.fs:.4f}", str(row.cos)])
        widths = [max(len(line[i]) for line in cells) for i in range(len(_HEADERS))]
        lines = []
        for n, line in enumerate(cells):
            first = line[0].ljust(widths[0])
            rest = [value.rjust(width) for value, width in zip(line[1:], widths[1:])]
            lines.append("  ".join([first] + rest))
            if n == 0:
                lines.append("  ".join("-" * width for width in widths))
        return "\n".join(lines) + "\n"

    def row(self, algorithm: str) -> ScoreReport:
        for row in self.rows:
            if row.algorithm == algorithm:
                return row
        raise InvalidInputError("No row for algorithm", algorithm)


def check_compatible(hashes: Mapping[str, tuple]) -> tuple:
    """
    Ensure every run shares one scenario and one network.

    ``hashes`` maps a run name to ``(scenario_hash, network_hash)``.

    Raises:
        IncompatibleArtifactsError: On any mismatch
    """
    distinct = set(hashes.values())
    if len(distinct) > 1:
        detail = ", ".join(f"{name}: scenario {s[:12] if s else None}, network {n[:12] if n else None}"
                           for name, (s, n) in sorted(hashes.items()))
        raise IncompatibleArtifactsError("Runs do not share a scenario and network", detail)
    return next(iter(distinct)) if distinct else (None, None)


def order_rows(rows: List[ScoreReport]) -> List[ScoreReport]:
    return sorted(rows, key=lambda row: (_ORDER.get(row.algorithm, len(_ORDER)), row.algorithm))


def compare(results: Mapping[str, SimResult], v_min: float = 216.0,
            rating: Optional[float] = None) -> ComparisonTable:
    """
    Score every run and gather the rows.

    Raises:
        IncompatibleArtifactsError: If the runs used different scenarios or networks
    """
    if not results:
        raise InvalidInputError("Nothing to compare")
    scenario, network = check_compatible({name: (r.scenario_hash, r.network_hash)
                                          for name, r in results.items()})
    rows = [score_run(result, v_min, rating) for result in results.values()]
    return ComparisonTable(rows=order_rows(rows), scenario_hash=scenario, network_hash=network)


def table_from_reports(reports: Dict[str, ScoreReport], hashes: Mapping[str, tuple]) -> ComparisonTable:
    """Comparison of already scored runs, e.g. loaded from run directories."""
    if not reports:
        raise InvalidInputError("Nothing to compare")
    scenario, network = check_compatible(hashes)
    return ComparisonTable(rows=order_rows(list(reports.values())),
                           scenario_hash=scenario, network_hash=network)
