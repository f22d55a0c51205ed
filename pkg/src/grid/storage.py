"""Topology documents on disk."""

import json
import logging
from pathlib import Path

from ..artifacts.hashing import sha256_json, write_json
from ..models.network import Network
from ..utils.exceptions import ArtifactCorruptedError, ArtifactNotFoundError, TopologyError

logger = logging.getLogger(__name__)


def network_hash(net: Network) -> str:
    """SHA-256 of the canonical topology document."""
    return sha256_json(net.to_dict())


def save_topology(net: Network, path) -> Path:
    path = Path(path)
    write_json(path, net.to_dict())
    logger.info("Wrote topology %s (%d buses)", path, len(net.buses))
    return path


def load_topology(path) -> Network:
    """
    Read a topology document written by ``save_topology``.

    Raises:
        ArtifactNotFoundError: If the file does not exist
        ArtifactCorruptedError: If it is not a valid topology document
    """
    path = Path(path)
    if not path.exists():
        raise ArtifactNotFoundError("Topology file not found", str(path))
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        return Network.from_dict(data)
    except (ValueError, TopologyError) as e:
        raise ArtifactCorruptedError(f"Topology file {path} is corrupted", str(e)) from e
