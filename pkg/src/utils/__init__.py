"""Utility functions and helper classes."""

from .exceptions import (
    FeederSimError,
    InvalidConfigurationError,
    ValidationError,
    InvalidInputError,
    TopologyError,
    ScenarioError,
    CalibrationError,
    PowerFlowError,
    VoltageCollapseError,
    DegenerateDataError,
    ThresholdError,
    SimulationError,
    MetricsError,
    IncompatibleArtifactsError,
    ArtifactNotFoundError,
    ArtifactCorruptedError,
)

from .validation import (
    validate_positive,
    validate_non_negative,
    validate_positive_int,
    validate_range,
    validate_fraction,
    validate_choice,
    validate_multiple_of,
)

from .error_recovery import (
    format_error_for_user,
    log_error_with_context,
    exit_code_for,
    ErrorRecoveryContext,
)

__all__ = [
    # Exceptions
    'FeederSimError',
    'InvalidConfigurationError',
    'InvalidInputError',
    'TopologyError',
    'ScenarioError',
    'CalibrationError',
    'PowerFlowError',
    'VoltageCollapseError',
    'DegenerateDataError',
    'ThresholdError',
    'SimulationError',
    'MetricsError',
    'IncompatibleArtifactsError',
    'ArtifactNotFoundError',
    'ArtifactCorruptedError',

    # Validation
    'ValidationError',
    'validate_positive',
    'validate_non_negative',
    'validate_positive_int',
    'validate_range',
    'validate_fraction',
    'validate_choice',
    'validate_multiple_of',

    # Error Recovery
    'format_error_for_user',
    'log_error_with_context',
    'exit_code_for',
    'ErrorRecoveryContext',
]
