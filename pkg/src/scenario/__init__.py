"""Seeded household loads, EV fleets and their persistence."""

from .generator import (
    shape_series,
    draw_household_loads,
    calibrate_scale,
    draw_fleet,
    fleet_size,
    generate_scenario,
    with_penetration,
)
from .soc import soc_update, soc_update_array
from .storage import (
    PROFILE_COLUMNS,
    ingest_profiles,
    profiles_frame,
    export_profiles,
    scenario_hash,
    save_scenario,
    load_scenario,
)

__all__ = [
    "shape_series",
    "draw_household_loads",
    "calibrate_scale",
    "draw_fleet",
    "fleet_size",
    "generate_scenario",
    "with_penetration",
    "soc_update",
    "soc_update_array",
    "PROFILE_COLUMNS",
    "ingest_profiles",
    "profiles_frame",
    "export_profiles",
    "scenario_hash",
    "save_scenario",
    "load_scenario",
]
