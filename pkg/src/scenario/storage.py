"""Scenario profiles and specifications on disk."""

import json
import logging
from pathlib import Path
from typing import Iterable, List, Optional, Union

import numpy as np
import pandas as pd

from ..artifacts.hashing import canonical_json, sha256_arrays, write_json
from ..models.scenario import EvSpec, HouseholdProfile, Scenario
from ..utils.exceptions import (
    ArtifactCorruptedError,
    ArtifactNotFoundError,
    InvalidInputError,
    ScenarioError,
)

logger = logging.getLogger(__name__)

PROFILE_COLUMNS = ["time_min", "house_id", "power_w"]
SCENARIO_FILE = "scenario.json"
PROFILES_FILE = "profiles.csv"


def ingest_profiles(source, house_ids: Optional[Iterable[str]] = None,
                    power_factor: float = 0.9) -> List[HouseholdProfile]:
    """
    Read household profiles from a ``time_min,house_id,power_w`` CSV.

    Args:
        source: Path or open text stream
        house_ids: When given, every house must appear and no other may
        power_factor: Assigned to every profile

    Returns:
        Profiles in first-appearance order, one value per minute from 0

    Raises:
        InvalidInputError: Malformed CSV or duplicate rows
        ScenarioError: Negative power, missing minutes or unknown houses
    """
    try:
        frame = pd.read_csv(source, dtype={"house_id": str})
    except (OSError, ValueError, pd.errors.ParserError) as e:
        raise InvalidInputError("Cannot read profile CSV", str(e)) from e

    missing_columns = [c for c in PROFILE_COLUMNS if c not in frame.columns]
    if missing_columns:
        raise InvalidInputError("Profile CSV is missing columns", ", ".join(missing_columns))
    if frame[["time_min", "power_w"]].isna().any().any() or frame["house_id"].isna().any():
        raise InvalidInputError("Profile CSV has empty cells")

    minutes = frame["time_min"].to_numpy()
    if not np.all(np.equal(np.mod(minutes, 1), 0)):
        raise InvalidInputError("time_min must hold whole minutes")
    frame["time_min"] = frame["time_min"].astype(int)

    negative = frame[frame["power_w"] < 0]
    if len(negative):
        row = negative.iloc[0]
        raise ScenarioError(f"Negative power for house {row['house_id']}",
                            f"minute {int(row['time_min'])}")

    duplicated = frame[frame.duplicated(["house_id", "time_min"], keep=False)]
    if len(duplicated):
        row = duplicated.iloc[0]
        raise InvalidInputError(f"Duplicate row for house {row['house_id']}",
                                f"minute {int(row['time_min'])}")

    order = list(dict.fromkeys(frame["house_id"]))
    if house_ids is not None:
        expected = list(house_ids)
        unknown = [h for h in order if h not in set(expected)]
        if unknown:
            raise ScenarioError("Unknown house id in profile CSV", unknown[0])
        absent = [h for h in expected if h not in set(order)]
        if absent:
            raise ScenarioError("House missing from profile CSV", absent[0])
        order = expected

    length = int(frame["time_min"].max()) + 1
    profiles = []
    for house, rows in frame.groupby("house_id", sort=False):
        series = rows.set_index("time_min")["power_w"].reindex(range(length))
        gaps = np.flatnonzero(series.isna().to_numpy())
        if gaps.size:
            raise ScenarioError(f"Missing minute for house {house}", f"minute {int(gaps[0])}")
        profiles.append(HouseholdProfile(str(house), series.to_numpy(dtype=float), power_factor))
    by_house = {p.house_id: p for p in profiles}
    logger.debug("Ingested %d profiles of %d minutes", len(profiles), length)
    return [by_house[h] for h in order]


def profiles_frame(scenario: Scenario) -> pd.DataFrame:
    matrix = scenario.load_matrix()
    minutes, houses = matrix.shape
    return pd.DataFrame({
        "time_min": np.repeat(np.arange(minutes), houses),
        "house_id": np.tile(np.array(scenario.house_ids, dtype=object), minutes),
        "power_w": matrix.reshape(-1),
    }, columns=PROFILE_COLUMNS)


def export_profiles(scenario: Scenario, path) -> Path:
    path = Path(path)
    profiles_frame(scenario).to_csv(path, index=False, float_format="%.10g")
    return path


def scenario_hash(scenario: Scenario) -> str:
    """SHA-256 over the specification document and the load matrix."""
    return sha256_arrays(scenario.load_matrix(), prefix=canonical_json(scenario.spec_dict()))


def save_scenario(scenario: Scenario, directory: Union[str, Path]) -> Path:
    """Write ``scenario.json`` and ``profiles.csv`` into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    write_json(directory / SCENARIO_FILE, scenario.spec_dict())
    export_profiles(scenario, directory / PROFILES_FILE)
    logger.info("Wrote scenario to %s", directory)
    return directory


def load_scenario(directory: Union[str, Path]) -> Scenario:
    """
    Read a scenario written by ``save_scenario``.

    Raises:
        ArtifactNotFoundError: If either file is missing
        ArtifactCorruptedError: If the files cannot be parsed back
    """
    directory = Path(directory)
    spec_path = directory / SCENARIO_FILE
    csv_path = directory / PROFILES_FILE
    for path in (spec_path, csv_path):
        if not path.exists():
            raise ArtifactNotFoundError("Scenario file not found", str(path))
    try:
        with open(spec_path, "r", encoding="utf-8") as f:
            spec = json.load(f)
        houses = spec["houses"]
        profiles = ingest_profiles(csv_path, [h["house_id"] for h in houses])
        factors = {h["house_id"]: float(h["power_factor"]) for h in houses}
        profiles = [HouseholdProfile(p.house_id, p.power_w, factors[p.house_id]) for p in profiles]
        return Scenario(
            seed=int(spec["seed"]),
            horizon_s=int(spec["horizon_s"]),
            profiles=profiles,
            evs=[EvSpec.from_dict(ev) for ev in spec["evs"]],
            ev_penetration=float(spec["ev_penetration"]),
            start_hour=float(spec.get("start_hour", 16.0)),
            scale_factor=float(spec.get("scale_factor", 1.0)),
            ev_order=list(spec.get("ev_order", [])),
            metadata=dict(spec.get("metadata", {})),
        )
    except (KeyError, TypeError, ValueError, InvalidInputError, ScenarioError) as e:
        raise ArtifactCorruptedError(f"Scenario in {directory} is corrupted", str(e)) from e
