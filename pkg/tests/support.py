"""Small feeders, scenarios and threshold tables shared by the test modules."""

from src.grid import build_synthetic_feeder, network_hash
from src.models import (
    Branch,
    BranchKind,
    Bus,
    BusKind,
    FeederConfig,
    Network,
    NodeModel,
    PolyCoefficients,
    RootProvenance,
    ScenarioConfig,
    ThresholdTable,
    VoltageThreshold,
)
from src.scenario import generate_scenario

SMALL_FEEDER = {
    "neighborhoods": 2,
    "transformers_per_neighborhood": 1,
    "houses_per_transformer": 2,
    "primary_topology": "none",
}

SMALL_SCENARIO = {
    "seed": 7,
    "horizon_s": 3600,
    "calibrate": False,
    "arrival_mean_h": 16.2,
    "arrival_std_h": 0.1,
    "arrival_window_h": [16.0, 16.5],
}


def small_feeder() -> Network:
    """Two neighbourhoods of one transformer serving two houses, hung off the root."""
    return build_synthetic_feeder(FeederConfig(**SMALL_FEEDER))


def small_scenario(net: Network, **overrides):
    """One hour, no calibration, every EV plugged in during the first half hour."""
    params = dict(SMALL_SCENARIO)
    params["arrival_window_h"] = tuple(params["arrival_window_h"])
    params.update(overrides)
    return generate_scenario(net, ScenarioConfig(**params))


def chain_network(impedances, nominal_voltage: float = 240.0) -> Network:
    """Root ``SUB`` followed by buses ``B1..Bn`` in a line; the last one is a service bus."""
    buses = [Bus("SUB", BusKind.SUBSTATION_ROOT, nominal_voltage)]
    branches = []
    previous = "SUB"
    for i, (r, x) in enumerate(impedances, start=1):
        kind = BusKind.SERVICE if i == len(impedances) else BusKind.PRIMARY
        bus_id = f"B{i}"
        buses.append(Bus(bus_id, kind, nominal_voltage))
        branches.append(Branch(previous, bus_id, r, x, kind=BranchKind.LINE))
        previous = bus_id
    return Network(buses, branches, "SUB", substation_rating=2.5e6)


def flat_thresholds(net: Network, v_th: float = 230.0) -> ThresholdTable:
    """A threshold table assigning the same trigger voltage to every EV connection."""
    table = ThresholdTable(rating=net.substation_rating, band_pu=(0.8, 1.1),
                           nominal_voltage=240.0, network_hash=network_hash(net))
    for node in net.end_nodes:
        coefficients = PolyCoefficients(node, 1.4e7, -5.0e4, 0.0)
        threshold = VoltageThreshold(v_th, RootProvenance.LINEAR_FALLBACK, table.rating, table.band_volts)
        table.models[node] = NodeModel(coefficients, threshold)
    return table
