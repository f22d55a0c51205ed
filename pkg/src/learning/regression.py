"""Least-squares fit of substation apparent power against a local voltage."""

import logging

import numpy as np
from scipy import linalg

from ..models.learning import DesignMatrix, FitDiagnostics, PolyCoefficients, RegressionSamples
from ..utils.exceptions import DegenerateDataError, InvalidInputError

logger = logging.getLogger(__name__)

MAX_CONDITION = 1e12


def build_design_matrix(voltages) -> DesignMatrix:
    """
    Stack rows ``[1, V, V^2]``.

    Raises:
        DegenerateDataError: With fewer than three samples
    """
    v = np.asarray(voltages, dtype=float).reshape(-1)
    return DesignMatrix(np.column_stack([np.ones_like(v), v, v * v]))


def _to_raw_basis(a: np.ndarray, center: float, scale: float):
    """Map coefficients of ``u = (V - center) / scale`` back to powers of ``V``."""
    a0, a1, a2 = a
    theta3 = a2 / scale ** 2
    theta2 = a1 / scale - 2.0 * a2 * center / scale ** 2
    theta1 = a0 - a1 * center / scale + a2 * center ** 2 / scale ** 2
    return float(theta1), float(theta2), float(theta3)


def fit_polynomial(samples: RegressionSamples, degree: int = 2,
                   degeneracy_floor: float = 1e-9, curvature_penalty: float = 0.0) -> PolyCoefficients:
    """
    Least-squares coefficients of ``S = theta1 + theta2 V + theta3 V^2``.

    The voltages are centred and scaled before an SVD-based solve, and the
    coefficients are mapped back to the raw voltage basis. With
    ``degree=1`` the quadratic term is fixed at zero.

    A positive ``curvature_penalty`` adds ``penalty * n * a2^2`` to the
    squared error, where ``a2`` is the quadratic coefficient in the scaled
    basis and ``n`` the sample count. Feeder data is close to linear in
    ``V^2`` over its narrow voltage range; the penalty moves that trend into
    ``theta2``.

    Args:
        samples: Time-aligned voltage and apparent power pairs
        degree: 1 or 2
        degeneracy_floor: Smallest relative voltage spread accepted
        curvature_penalty: Ridge weight on the scaled quadratic term; 0 gives
            the ordinary least-squares fit

    Returns:
        Coefficients with fit diagnostics attached

    Raises:
        DegenerateDataError: Too few samples, no voltage variation, or an
            ill-conditioned system
    """
    if degree not in (1, 2):
        raise InvalidInputError("Polynomial degree must be 1 or 2", f"{degree}")
    if curvature_penalty < 0:
        raise InvalidInputError("Curvature penalty must be non-negative", f"{curvature_penalty}")
    design = build_design_matrix(samples.voltages)
    v = samples.voltages
    s = samples.apparent

    center = float(np.mean(v))
    spread = float(np.std(v))
    if spread <= degeneracy_floor * max(abs(center), 1.0):
        raise DegenerateDataError(f"Insufficient voltage variation at node {samples.node_id}",
                                  f"std {spread:.3e} V over {design.samples} samples")

    u = (v - center) / spread
    basis = np.column_stack([np.ones_like(u), u, u * u])[:, :degree + 1]
    system, target = basis, s
    if degree == 2 and curvature_penalty > 0:
        ridge = np.array([[0.0, 0.0, np.sqrt(curvature_penalty * len(u))]])
        system = np.vstack([basis, ridge])
        target = np.append(s, 0.0)
    solution, _, rank, singular = linalg.lstsq(system, target, lapack_driver="gelsd")
    if rank < degree + 1:
        raise DegenerateDataError(f"Rank-deficient design matrix at node {samples.node_id}",
                                  f"rank {rank} < {degree + 1}")
    condition = float(singular[0] / singular[-1])
    if not np.isfinite(condition) or condition > MAX_CONDITION:
        raise DegenerateDataError(f"Ill-conditioned fit at node {samples.node_id}",
                                  f"condition {condition:.3e}")

    a = np.zeros(3)
    a[:degree + 1] = solution
    theta1, theta2, theta3 = _to_raw_basis(a, center, spread)

    predicted = basis @ solution
    residual = s - predicted
    rmse = float(np.sqrt(np.mean(residual ** 2)))
    total = float(np.sum((s - np.mean(s)) ** 2))
    r_squared = 1.0 - float(np.sum(residual ** 2)) / total if total > 0 else 1.0

    coefficients = PolyCoefficients(
        node_id=samples.node_id,
        theta1=theta1,
        theta2=theta2,
        theta3=theta3,
        condition=condition,
        degree=degree,
    )
    coefficients.diagnostics = FitDiagnostics(
        rmse=rmse,
        r_squared=r_squared,
        samples=design.samples,
        condition=condition,
        v_mean=center,
        v_min=float(np.min(v)),
        v_max=float(np.max(v)),
        sensitivity=coefficients.sensitivity_at(center),
    )
    logger.debug("Fitted node %s: theta=%s, rmse %.1f VA", samples.node_id,
                 coefficients.theta, rmse)
    return coefficients


def estimate_load(coefficients: PolyCoefficients, voltage):
    """Substation apparent power predicted at ``voltage`` (scalar or array)."""
    return coefficients.theta1 + coefficients.theta2 * voltage + coefficients.theta3 * voltage * voltage
