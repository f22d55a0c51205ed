"""
Validation utilities for configuration values and input data.

Each helper returns the validated value so it can be used inline in
``__post_init__`` methods, and raises ``ValidationError`` naming the field.
"""

import math
from typing import Optional, Sequence

from .exceptions import ValidationError


def _require_finite(value: float, field_name: str) -> float:
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{field_name} must be a number", f"got {value!r}")
    if not math.isfinite(number):
        raise ValidationError(f"{field_name} must be finite", f"got {value!r}")
    return number


def validate_positive(value: float, field_name: str = "value") -> float:
    """
    Validate that a value is a finite number strictly greater than zero.

    Args:
        value: Value to validate
        field_name: Name of the field for error messages

    Returns:
        The value as float

    Raises:
        ValidationError: If validation fails
    """
    number = _require_finite(value, field_name)
    if number <= 0:
        raise ValidationError(f"{field_name} must be positive", f"got {value}")
    return number


def validate_non_negative(value: float, field_name: str = "value") -> float:
    """Validate that a value is a finite number >= 0."""
    number = _require_finite(value, field_name)
    if number < 0:
        raise ValidationError(f"{field_name} must be non-negative", f"got {value}")
    return number


def validate_positive_int(value: int, field_name: str = "value") -> int:
    """Validate that a value is an integer >= 1 (booleans rejected)."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{field_name} must be an integer", f"got {value!r}")
    if value < 1:
        raise ValidationError(f"{field_name} must be at least 1", f"got {value}")
    return value


def validate_range(
    value: float,
    min_value: Optional[float] = None,
    max_value: Optional[float] = None,
    field_name: str = "value",
    min_inclusive: bool = True,
    max_inclusive: bool = True,
) -> float:
    """
    Validate that a value lies within a (possibly open) interval.

    Args:
        value: Value to validate
        min_value: Lower bound, or None for unbounded
        max_value: Upper bound, or None for unbounded
        field_name: Name of the field for error messages
        min_inclusive: Whether the lower bound is allowed
        max_inclusive: Whether the upper bound is allowed

    Returns:
        The value as float

    Raises:
        ValidationError: If validation fails
    """
    number = _require_finite(value, field_name)
    if min_value is not None:
        if number < min_value or (not min_inclusive and number == min_value):
            bound = "at least" if min_inclusive else "greater than"
            raise ValidationError(f"{field_name} must be {bound} {min_value}", f"got {value}")
    if max_value is not None:
        if number > max_value or (not max_inclusive and number == max_value):
            bound = "at most" if max_inclusive else "less than"
            raise ValidationError(f"{field_name} must be {bound} {max_value}", f"got {value}")
    return number


def validate_fraction(value: float, field_name: str = "fraction") -> float:
    """Validate a value in the closed unit interval."""
    return validate_range(value, 0.0, 1.0, field_name)


def validate_choice(value: str, valid_choices: Sequence[str], field_name: str = "choice") -> str:
    """
    Validate that a value is one of the allowed choices (case-insensitive).

    Returns:
        The matching choice as spelled in ``valid_choices``
    """
    if not isinstance(value, str) or not value.strip():
        raise ValidationError(f"{field_name} cannot be empty")
    for choice in valid_choices:
        if value.strip().lower() == choice.lower():
            return choice
    choices_str = "', '".join(valid_choices)
    raise ValidationError(f"{field_name} must be one of: '{choices_str}'", f"got '{value}'")


def validate_multiple_of(value: float, base: float, field_name: str = "value") -> float:
    """Validate that ``value`` is an integer multiple of ``base``."""
    number = validate_positive(value, field_name)
    ratio = number / base
    if abs(ratio - round(ratio)) > 1e-9:
        raise ValidationError(f"{field_name} must be a multiple of {base}", f"got {value}")
    return number
