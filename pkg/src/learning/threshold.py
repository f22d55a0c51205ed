"""Trigger voltages from fitted models."""

import math
from typing import Tuple

from ..models.learning import PolyCoefficients, RootProvenance, VoltageThreshold
from ..utils.exceptions import ThresholdError


def solve_threshold(
    coefficients: PolyCoefficients,
    rating: float,
    band: Tuple[float, float],
    theta3_floor: float = 1e-12,
    theta2_floor: float = 1e-12,
) -> VoltageThreshold:
    """
    Voltage at which the model predicts ``rating``.

    Solves ``theta1 + theta2 V + theta3 V^2 = rating`` inside ``band``. When
    both roots lie in the band the larger one is kept. The quadratic term is
    dropped when ``|theta3| V_high^2 / rating`` is below ``theta3_floor``.

    Raises:
        ThresholdError: No real root in the band, or a linear model whose
            slope is negligible
    """
    low, high = band
    theta1, theta2, theta3 = coefficients.theta
    reference = max(abs(rating), 1.0)
    c = theta1 - rating
    node = coefficients.node_id

    if abs(theta3) * high * high / reference < theta3_floor:
        if abs(theta2) * high / reference < theta2_floor:
            raise ThresholdError(f"Uninformative linear model at node {node}",
                                 f"theta2={theta2:.3e}")
        root = -c / theta2
        if not low <= root <= high:
            raise ThresholdError(f"No threshold in band at node {node}",
                                 f"linear root {root:.3f} V not in [{low:.1f}, {high:.1f}]")
        return VoltageThreshold(root, RootProvenance.LINEAR_FALLBACK, rating, (low, high))

    disc = theta2 * theta2 - 4.0 * theta3 * c
    if disc < 0:
        raise ThresholdError(f"No real threshold at node {node}", f"discriminant {disc:.3e}")
    # Cancellation-free pair of roots
    q = -0.5 * (theta2 + math.copysign(math.sqrt(disc), theta2))
    roots = [q / theta3]
    if q != 0:
        roots.append(c / q)
    smaller, larger = min(roots), max(roots)
    if low <= larger <= high:
        return VoltageThreshold(larger, RootProvenance.QUADRATIC_UPPER, rating, (low, high))
    if low <= smaller <= high:
        return VoltageThreshold(smaller, RootProvenance.QUADRATIC_LOWER, rating, (low, high))
    raise ThresholdError(f"No threshold in band at node {node}",
                         f"roots {smaller:.3f} V and {larger:.3f} V not in [{low:.1f}, {high:.1f}]")
