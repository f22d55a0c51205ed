"""Core data models for the feeder co-simulation toolkit."""

from .network import Bus, BusKind, Branch, BranchKind, Network, to_per_unit, from_per_unit
from .config import (
    FeederConfig,
    ScenarioConfig,
    LearningConfig,
    AimdParams,
    DroopCurve,
    ControllerConfig,
    SimConfig,
    PipelineConfig,
    CONTROLLER_KINDS,
)
from .power import InjectionSet, PowerFlowSolution, FeederLine
from .scenario import HouseholdProfile, EvSpec, Scenario
from .learning import (
    RegressionSamples,
    DesignMatrix,
    FitDiagnostics,
    PolyCoefficients,
    RootProvenance,
    VoltageThreshold,
    NodeModel,
    ThresholdTable,
)
from .charging import ChargerState, CongestionSignal, SignalOrigin, ControllerKind
from .results import Recording, SimResult, ScoreReport, RunManifest, SCORE_COLUMNS, PLUGGED_INTERVAL_NOTE

__all__ = [
    "Bus",
    "BusKind",
    "Branch",
    "BranchKind",
    "Network",
    "to_per_unit",
    "from_per_unit",
    "FeederConfig",
    "ScenarioConfig",
    "LearningConfig",
    "AimdParams",
    "DroopCurve",
    "ControllerConfig",
    "SimConfig",
    "PipelineConfig",
    "CONTROLLER_KINDS",
    "InjectionSet",
    "PowerFlowSolution",
    "FeederLine",
    "HouseholdProfile",
    "EvSpec",
    "Scenario",
    "RegressionSamples",
    "DesignMatrix",
    "FitDiagnostics",
    "PolyCoefficients",
    "RootProvenance",
    "VoltageThreshold",
    "NodeModel",
    "ThresholdTable",
    "ChargerState",
    "CongestionSignal",
    "SignalOrigin",
    "ControllerKind",
    "Recording",
    "SimResult",
    "ScoreReport",
    "RunManifest",
    "SCORE_COLUMNS",
    "PLUGGED_INTERVAL_NOTE",
]
