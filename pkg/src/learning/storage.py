"""Threshold tables on disk."""

import json
import logging
from pathlib import Path

from ..artifacts.hashing import sha256_json, write_json
from ..models.learning import ThresholdTable
from ..utils.exceptions import ArtifactCorruptedError, ArtifactNotFoundError, InvalidInputError

logger = logging.getLogger(__name__)


def thresholds_hash(table: ThresholdTable) -> str:
    return sha256_json(table.to_dict())


def save_thresholds(table: ThresholdTable, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    write_json(path, table.to_dict())
    logger.info("Wrote %d node thresholds to %s", len(table.models), path)
    return path


def load_thresholds(path) -> ThresholdTable:
    """
    Read a table written by ``save_thresholds``.

    Raises:
        ArtifactNotFoundError: If the file does not exist
        ArtifactCorruptedError: If it is not a threshold table
    """
    path = Path(path)
    if not path.exists():
        raise ArtifactNotFoundError("Threshold file not found", str(path))
    try:
        with open(path, "r", encoding="utf-8") as f:
            return ThresholdTable.from_dict(json.load(f))
    except (ValueError, InvalidInputError) as e:
        raise ArtifactCorruptedError(f"Threshold file {path} is corrupted", str(e)) from e
