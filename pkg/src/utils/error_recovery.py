"""
Error recovery utilities.

Helpers for logging failures with context, formatting them for the console
and mapping them to process exit codes.
"""

import logging
import traceback

from .exceptions import FeederSimError


logger = logging.getLogger(__name__)


def format_error_for_user(error: Exception, context: str = None) -> str:
    """
    Format an error message for console display.

    Args:
        error: The exception to format
        context: Optional context about when the error occurred

    Returns:
        Formatted error message
    """
    if isinstance(error, FeederSimError):
        base_message = str(error)
    else:
        base_message = f"An unexpected error occurred: {error}"

    if context:
        return f"error while {context}: {base_message}"
    return f"error: {base_message}"


def log_error_with_context(
    error: Exception,
    context: str,
    additional_info: dict = None
) -> None:
    """
    Log an error with contextual information.

    Args:
        error: The exception that occurred
        context: Context where the error occurred
        additional_info: Additional information to log
    """
    log_data = {
        'error_type': type(error).__name__,
        'error_message': str(error),
        'context': context,
    }

    if additional_info:
        log_data.update(additional_info)

    logger.error(f"Error in {context}: {error}", extra=log_data)
    logger.debug(traceback.format_exc())


def exit_code_for(error: BaseException) -> int:
    """Map an exception to the command-line exit code."""
    if isinstance(error, FeederSimError):
        return error.exit_code
    return 1


class ErrorRecoveryContext:
    """Context manager that logs failures of a named operation."""

    def __init__(
        self,
        operation_name: str,
        user_message: str = None,
        log_errors: bool = True,
        reraise: bool = True
    ):
        self.operation_name = operation_name
        self.user_message = user_message or operation_name
        self.log_errors = log_errors
        self.reraise = reraise
        self.error = None

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if exc_type is not None:
            self.error = exc_val

            if self.log_errors:
                log_error_with_context(
                    exc_val,
                    self.operation_name,
                    additional_info={'reraise': self.reraise}
                )

            if not self.reraise:
                return True  # Suppress the exception

        return False

    @property
    def exit_code(self) -> int:
        """Exit code for the captured error, 0 when the block succeeded."""
        if self.error is None:
            return 0
        return exit_code_for(self.error)

    def get_user_message(self) -> str:
        """Get formatted error message for console display."""
        if self.error:
            return format_error_for_user(self.error, self.user_message)
        return ""
