"""Synthetic radial test feeder with secondary networks."""

import logging
from typing import List, Tuple

from ..models.config import FeederConfig
from ..models.network import Branch, BranchKind, Bus, BusKind, Network

logger = logging.getLogger(__name__)

ROOT_ID = "SUB"

# Primary tree shaped after the IEEE 37-node feeder: (from, to, length in feet).
IEEE37_SEGMENTS: Tuple[Tuple[str, str, float], ...] = (
    ("701", "702", 960), ("702", "705", 400), ("702", "713", 360), ("702", "703", 1320),
    ("703", "727", 240), ("703", "730", 600), ("704", "714", 80), ("704", "720", 800),
    ("705", "742", 320), ("705", "712", 240), ("706", "725", 280), ("707", "724", 760),
    ("707", "722", 120), ("708", "733", 320), ("708", "732", 320), ("709", "731", 600),
    ("709", "708", 320), ("710", "735", 200), ("710", "736", 1280), ("711", "741", 400),
    ("711", "740", 200), ("713", "704", 520), ("714", "718", 520), ("720", "707", 920),
    ("720", "706", 600), ("727", "744", 280), ("730", "709", 200), ("733", "734", 560),
    ("734", "737", 640), ("734", "710", 520), ("737", "738", 400), ("738", "711", 400),
    ("744", "728", 200), ("744", "729", 280),
)
IEEE37_HEAD = "701"

# Primary buses hosting the neighbourhood transformers, one neighbourhood each.
ATTACHMENT_BUSES: Tuple[str, ...] = (
    "701", "712", "713", "714", "718", "720", "722", "724", "725", "727", "728", "729", "730",
    "731", "732", "733", "734", "735", "736", "737", "738", "740", "741", "742", "744", "705",
)


def neighborhood_bus_id(neighborhood: int, transformer: int) -> str:
    """Secondary bus of a local transformer, both indices 1-based."""
    return f"N{neighborhood:02d}T{transformer}"


def house_bus_id(neighborhood: int, transformer: int, house: int) -> str:
    return f"{neighborhood_bus_id(neighborhood, transformer)}H{house}"


def ev_bus_id(house_id: str) -> str:
    return f"{house_id}E"


def _ieee37_primary(cfg: FeederConfig) -> Tuple[List[Bus], List[Branch]]:
    order = [IEEE37_HEAD]
    for from_bus, to_bus, _ in IEEE37_SEGMENTS:
        for bus_id in (from_bus, to_bus):
            if bus_id not in order:
                order.append(bus_id)
    buses = [Bus(bus_id, BusKind.PRIMARY, cfg.primary_voltage) for bus_id in order]
    branches = [Branch(ROOT_ID, IEEE37_HEAD, cfg.head_resistance_ohm, cfg.head_reactance_ohm,
                       kind=BranchKind.LINE, rating=cfg.substation_rating)]
    for from_bus, to_bus, feet in IEEE37_SEGMENTS:
        branches.append(Branch(from_bus, to_bus,
                               feet * cfg.line_resistance_ohm_per_ft,
                               feet * cfg.line_reactance_ohm_per_ft))
    return buses, branches


def build_synthetic_feeder(cfg: FeederConfig = None) -> Network:
    """
    Build the radial test feeder described by ``cfg``.

    Each neighbourhood is a group of local transformers hung off one primary
    bus; each transformer feeds its houses through service drops. A house has
    two load points: the household on its service bus and the EV charger on
    a leaf bus behind it, so the defaults give 832 load points. With
    ``ev_connections`` off the charger shares the service bus.

    Args:
        cfg: Feeder parameters; defaults give 26 neighbourhoods of four
            25 kVA transformers serving four houses each

    Returns:
        The network, identical for equal configurations
    """
    cfg = cfg or FeederConfig()
    buses = [Bus(ROOT_ID, BusKind.SUBSTATION_ROOT, cfg.primary_voltage)]
    branches: List[Branch] = []

    if cfg.primary_topology == "ieee37":
        primary_buses, primary_branches = _ieee37_primary(cfg)
        buses.extend(primary_buses)
        branches.extend(primary_branches)
        attachments = ATTACHMENT_BUSES
    else:
        attachments = (ROOT_ID,)

    z_base = cfg.secondary_voltage ** 2 / cfg.transformer_rating
    xf_r = cfg.transformer_r_pct / 100.0 * z_base
    xf_x = cfg.transformer_x_pct / 100.0 * z_base

    for nb in range(1, cfg.neighborhoods + 1):
        attach = attachments[(nb - 1) % len(attachments)]
        for t in range(1, cfg.transformers_per_neighborhood + 1):
            xf_bus = neighborhood_bus_id(nb, t)
            buses.append(Bus(xf_bus, BusKind.TRANSFORMER_SECONDARY, cfg.secondary_voltage))
            branches.append(Branch(attach, xf_bus, xf_r, xf_x, kind=BranchKind.TRANSFORMER,
                                   rating=cfg.transformer_rating, neighborhood=nb))
            for h in range(1, cfg.houses_per_transformer + 1):
                house = house_bus_id(nb, t, h)
                buses.append(Bus(house, BusKind.SERVICE, cfg.secondary_voltage))
                branches.append(Branch(xf_bus, house, cfg.service_resistance_ohm,
                                       cfg.service_reactance_ohm))
                if cfg.ev_connections:
                    ev_bus = ev_bus_id(house)
                    buses.append(Bus(ev_bus, BusKind.EV_CONNECTION, cfg.secondary_voltage))
                    branches.append(Branch(house, ev_bus, cfg.ev_cable_resistance_ohm,
                                           cfg.ev_cable_reactance_ohm))

    net = Network(buses, branches, ROOT_ID, substation_rating=cfg.substation_rating)
    logger.info("Built feeder: %d buses, %d branches, %d houses, %d transformers, %d load points",
                len(net.buses), len(net.branches), net.house_count, net.transformer_count,
                net.load_point_count)
    return net
