"""
Custom exception hierarchy for the feeder co-simulation toolkit.

Every exception carries the process exit code the command-line interface
reports when it escapes a command.
"""


class FeederSimError(Exception):
    """Base exception for all toolkit errors."""

    exit_code = 1

    def __init__(self, message: str, details: str = None):
        super().__init__(message)
        self.message = message
        self.details = details

    def __str__(self):
        if self.details:
            return f"{self.message}: {self.details}"
        return self.message


class InvalidConfigurationError(FeederSimError):
    """Raised when a configuration section or flag combination is invalid."""
    exit_code = 3


class ValidationError(FeederSimError):
    """Raised when a single value fails validation."""
    exit_code = 3


class InvalidInputError(FeederSimError):
    """Raised when an input file or identifier is malformed."""
    exit_code = 3


class TopologyError(FeederSimError):
    """Raised when a network is not a valid radial tree or a bus is unknown."""
    exit_code = 3


class ScenarioError(FeederSimError):
    """Raised when load profiles or EV specifications are invalid."""
    exit_code = 3


class CalibrationError(FeederSimError):
    """Raised when the calibrated base-load peak falls outside its band."""
    exit_code = 2


class PowerFlowError(FeederSimError):
    """Raised when the power-flow sweep fails to converge."""
    exit_code = 2


class VoltageCollapseError(PowerFlowError):
    """Raised when a squared voltage is driven negative."""
    pass


class DegenerateDataError(FeederSimError):
    """Raised when training data cannot identify the regression model."""
    exit_code = 2


class ThresholdError(FeederSimError):
    """Raised when no usable threshold voltage can be derived."""
    exit_code = 2


class SimulationError(FeederSimError):
    """Raised when a simulation run cannot proceed."""
    exit_code = 2


class MetricsError(FeederSimError):
    """Raised when a score cannot be computed from the given series."""
    exit_code = 2


class IncompatibleArtifactsError(FeederSimError):
    """Raised when artifacts that must share inputs do not."""
    exit_code = 4


class ArtifactNotFoundError(FeederSimError):
    """Raised when a requested artifact does not exist."""
    exit_code = 3


class ArtifactCorruptedError(FeederSimError):
    """Raised when an artifact exists but cannot be parsed."""
    exit_code = 3
