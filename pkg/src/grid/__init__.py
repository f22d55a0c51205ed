"""Radial network construction and validation."""

from .feeder import (
    build_synthetic_feeder,
    ev_bus_id,
    house_bus_id,
    neighborhood_bus_id,
    ATTACHMENT_BUSES,
    IEEE37_SEGMENTS,
    ROOT_ID,
)
from .topology import RadialReport, validate_radial, path_impedance, path_branches
from .storage import network_hash, save_topology, load_topology

__all__ = [
    "build_synthetic_feeder",
    "ev_bus_id",
    "house_bus_id",
    "neighborhood_bus_id",
    "ATTACHMENT_BUSES",
    "IEEE37_SEGMENTS",
    "ROOT_ID",
    "RadialReport",
    "validate_radial",
    "path_impedance",
    "path_branches",
    "network_hash",
    "save_topology",
    "load_topology",
]
