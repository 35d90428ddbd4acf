"""
Gauge (connection) matrices γ_mn = i⟨ψ_m|∂_φ|ψ_n⟩ of the two Kramers pairs.

The path is the circle φ = ωt at fixed θ, so ∂_φ is the only derivative
needed. States are taken in the Kramers frame (|m⟩, Θ|m⟩); for the ±1/2
pair that flips the sign of the |−1/2⟩ column, which leaves eigengauges
untouched and puts the off-diagonal element at +sinθ.
"""
import logging
import math

import numpy as np

from app.config import get_settings
from app.errors import InvalidParameterError, PhiDependenceError
from app.field.schemas import FieldConfig, Regime
from app.field.service import instantaneous_eigenbasis, lab_hamiltonian
from app.gauge.schemas import GaugeMatrix, Subspace
from utils.linalg import freeze

logger = logging.getLogger(__name__)

SAMPLE_PHI = math.pi / 4
SECOND_SAMPLE_PHI = SAMPLE_PHI + 1.0

# Geometry only depends on θ; these rates just have to keep the levels apart.
_DEFAULT_RATES = {"c": 1.0, "b": 0.0, "omega": 1.0}


def _check_theta(theta: float) -> None:
    if not 0 <= theta <= math.pi:
        raise InvalidParameterError(f"theta must lie in [0, π], got {theta}")


def _gauge(subspace: Subspace, theta: float, matrix: np.ndarray) -> GaugeMatrix:
    eig = np.linalg.eigvalsh(matrix)[::-1]
    return GaugeMatrix(
        subspace=subspace,
        theta=float(theta),
        matrix=freeze(matrix),
        eigengauges=(float(eig[0]), float(eig[1])),
    )


def gauge_matrix_analytic(subspace: Subspace, theta: float) -> GaugeMatrix:
    _check_theta(theta)
    if subspace is Subspace.THREE_HALVES:
        matrix = np.diag([1.5 * math.cos(theta), -1.5 * math.cos(theta)])
    else:
        matrix = np.array(
            [
                [0.5 * math.cos(theta), math.sin(theta)],
                [math.sin(theta), -0.5 * math.cos(theta)],
            ]
        )
    return _gauge(subspace, theta, matrix)


def _kramers_states(subspace: Subspace, config: FieldConfig, phi: float) -> np.ndarray:
    h = lab_hamiltonian(config, Regime.ABELIAN)
    basis = instantaneous_eigenbasis(h, phi / config.omega)
    return basis.vectors[:, list(subspace.indices)] * subspace.kramers_signs


def _central_difference(subspace: Subspace, config: FieldConfig, phi: float, dphi: float) -> np.ndarray:
    psi = _kramers_states(subspace, config, phi)
    forward = _kramers_states(subspace, config, phi + dphi)
    backward = _kramers_states(subspace, config, phi - dphi)
    gamma = 1j * psi.conj().T @ (forward - backward) / (2 * dphi)
    return (gamma + gamma.conj().T) / 2


def gauge_matrix_numeric(
    subspace: Subspace,
    theta: float,
    dphi: float | None = None,
    config: FieldConfig | None = None,
) -> GaugeMatrix:
    """Finite-difference connection on the instantaneous eigenvectors at φ = π/4.

    ``config`` supplies c, b and ω for the laboratory Hamiltonian; its own
    theta is replaced by ``theta``. A second sample point checks that the
    result does not depend on φ.
    """
    _check_theta(theta)
    dphi = get_settings().gauge_dphi if dphi is None else dphi
    if not 0 < dphi <= 1e-3:
        raise InvalidParameterError(f"dphi must lie in (0, 1e-3], got {dphi}")
    rates = _DEFAULT_RATES if config is None else config.model_dump(exclude={"theta"})
    cfg = FieldConfig(theta=theta, **rates)

    gamma = _central_difference(subspace, cfg, SAMPLE_PHI, dphi)
    check = _central_difference(subspace, cfg, SECOND_SAMPLE_PHI, dphi)
    deviation = float(np.max(np.abs(gamma - check)))
    bound = 10 * dphi**2
    if deviation > bound:
        raise PhiDependenceError(deviation, bound)
    imaginary = float(np.max(np.abs(gamma.imag)))
    if imaginary > bound:
        logger.warning("numeric gauge has imaginary part %.3e at theta=%.4f", imaginary, theta)
    return _gauge(subspace, theta, np.real(gamma))


def eigengauge(theta: float) -> tuple[float, float]:
    """±(1/2)√(4 − 3cos²θ), the eigenvalues of the ±1/2 gauge matrix."""
    _check_theta(theta)
    g = 0.5 * math.sqrt(4 - 3 * math.cos(theta) ** 2)
    return g, -g
