"""
Unit tests for error handling and validation in the co-simulation toolkit.

This module tests the custom exception hierarchy, the exit codes attached
to it, validation functions, and error recovery helpers.
"""

import unittest
from unittest.mock import patch

from src.utils.exceptions import (
    ArtifactCorruptedError,
    ArtifactNotFoundError,
    CalibrationError,
    DegenerateDataError,
    FeederSimError,
    IncompatibleArtifactsError,
    InvalidConfigurationError,
    InvalidInputError,
    MetricsError,
    PowerFlowError,
    ScenarioError,
    SimulationError,
    ThresholdError,
    TopologyError,
    ValidationError,
    VoltageCollapseError,
)
from src.utils.validation import (
    validate_choice,
    validate_fraction,
    validate_multiple_of,
    validate_non_negative,
    validate_positive,
    validate_positive_int,
    validate_range,
)
from src.utils.error_recovery import (
    ErrorRecoveryContext,
    exit_code_for,
    format_error_for_user,
    log_error_with_context,
)


class TestCustomExceptions(unittest.TestCase):
    """Test the custom exception hierarchy."""

    def test_base_exception_with_message_only(self):
        """Test base exception with just a message."""
        error = FeederSimError("Test error")
        self.assertEqual(str(error), "Test error")
        self.assertEqual(error.message, "Test error")
        self.assertIsNone(error.details)

    def test_base_exception_with_details(self):
        """Test base exception with message and details."""
        error = FeederSimError("Test error", "Additional details")
        self.assertEqual(str(error), "Test error: Additional details")
        self.assertEqual(error.details, "Additional details")

    def test_exception_inheritance(self):
        """Test that all custom exceptions inherit from base exception."""
        exceptions = [
            InvalidConfigurationError, ValidationError, InvalidInputError, TopologyError,
            ScenarioError, CalibrationError, PowerFlowError, VoltageCollapseError,
            DegenerateDataError, ThresholdError, SimulationError, MetricsError,
            IncompatibleArtifactsError, ArtifactNotFoundError, ArtifactCorruptedError,
        ]
        for exc_class in exceptions:
            with self.subTest(exception=exc_class.__name__):
                self.assertTrue(issubclass(exc_class, FeederSimError))
        self.assertTrue(issubclass(VoltageCollapseError, PowerFlowError))

    def test_exit_codes(self):
        """Test that numerical, input and compatibility failures map to 2, 3 and 4."""
        numerical = [CalibrationError, PowerFlowError, VoltageCollapseError, DegenerateDataError,
                     ThresholdError, SimulationError, MetricsError]
        inputs = [InvalidConfigurationError, ValidationError, InvalidInputError, TopologyError,
                  ScenarioError, ArtifactNotFoundError, ArtifactCorruptedError]
        for exc_class in numerical:
            with self.subTest(exception=exc_class.__name__):
                self.assertEqual(exit_code_for(exc_class("x")), 2)
        for exc_class in inputs:
            with self.subTest(exception=exc_class.__name__):
                self.assertEqual(exit_code_for(exc_class("x")), 3)
        self.assertEqual(exit_code_for(IncompatibleArtifactsError("x")), 4)
        self.assertEqual(exit_code_for(RuntimeError("x")), 1)


class TestValidationFunctions(unittest.TestCase):
    """Test the validation helpers."""

    def test_validate_positive(self):
        self.assertEqual(validate_positive(2, "rating"), 2.0)
        for value in (0, -1, float("nan"), float("inf"), "abc", None):
            with self.subTest(value=value):
                with self.assertRaises(ValidationError):
                    validate_positive(value, "rating")

    def test_validate_non_negative(self):
        self.assertEqual(validate_non_negative(0), 0.0)
        with self.assertRaises(ValidationError):
            validate_non_negative(-0.1)

    def test_validate_positive_int(self):
        self.assertEqual(validate_positive_int(3), 3)
        for value in (0, -2, 1.5, True, "3"):
            with self.subTest(value=value):
                with self.assertRaises(ValidationError):
                    validate_positive_int(value)

    def test_validate_range(self):
        """Test open and closed bounds."""
        self.assertEqual(validate_range(0.5, 0.0, 1.0), 0.5)
        self.assertEqual(validate_range(1.0, 0.0, 1.0), 1.0)
        with self.assertRaises(ValidationError):
            validate_range(1.0, 0.0, 1.0, max_inclusive=False)
        with self.assertRaises(ValidationError):
            validate_range(0.0, 0.0, 1.0, min_inclusive=False)
        with self.assertRaises(ValidationError) as ctx:
            validate_range(2.0, 0.0, 1.0, "beta")
        self.assertIn("beta", str(ctx.exception))

    def test_validate_fraction(self):
        self.assertEqual(validate_fraction(0.0), 0.0)
        with self.assertRaises(ValidationError):
            validate_fraction(1.2)

    def test_validate_choice(self):
        """Test case-insensitive matching that returns the canonical spelling."""
        self.assertEqual(validate_choice("C_AIMD", ["no_control", "c_aimd"]), "c_aimd")
        for value in ("pid", "", None):
            with self.subTest(value=value):
                with self.assertRaises(ValidationError):
                    validate_choice(value, ["no_control", "c_aimd"])

    def test_validate_multiple_of(self):
        self.assertEqual(validate_multiple_of(28800, 60), 28800.0)
        with self.assertRaises(ValidationError):
            validate_multiple_of(61, 60)
        with self.assertRaises(ValidationError):
            validate_multiple_of(0, 60)


class TestErrorRecovery(unittest.TestCase):
    """Test the error recovery helpers."""

    def test_format_error_for_user_with_toolkit_error(self):
        error = ThresholdError("No threshold in band", "node N01T1H1")
        self.assertEqual(format_error_for_user(error, "train"),
                         "error while train: No threshold in band: node N01T1H1")

    def test_format_error_for_user_with_generic_error(self):
        message = format_error_for_user(ValueError("boom"))
        self.assertEqual(message, "error: An unexpected error occurred: boom")

    def test_log_error_with_context(self):
        with patch("src.utils.error_recovery.logger") as logger:
            log_error_with_context(PowerFlowError("diverged"), "simulate", {"exit_code": 2})
        logger.error.assert_called_once()
        extra = logger.error.call_args.kwargs["extra"]
        self.assertEqual(extra["error_type"], "PowerFlowError")
        self.assertEqual(extra["exit_code"], 2)

    def test_error_recovery_context_no_error(self):
        """Test that a clean block leaves exit code 0."""
        with ErrorRecoveryContext("simulate") as context:
            pass
        self.assertIsNone(context.error)
        self.assertEqual(context.exit_code, 0)
        self.assertEqual(context.get_user_message(), "")

    def test_error_recovery_context_with_error_no_reraise(self):
        with ErrorRecoveryContext("compare", "comparing runs", log_errors=False, reraise=False) as context:
            raise IncompatibleArtifactsError("Runs do not share a scenario")
        self.assertEqual(context.exit_code, 4)
        self.assertIn("comparing runs", context.get_user_message())

    def test_error_recovery_context_reraises(self):
        with self.assertRaises(KeyError):
            with ErrorRecoveryContext("train", log_errors=False):
                raise KeyError("node")


if __name__ == '__main__':
    unittest.main()
