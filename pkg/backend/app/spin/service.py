"""
Spin matrices and rotations.

The ladder construction uses ⟨m+1|s+|m⟩ = √(j(j+1) − m(m+1)) with the basis
ordered m = +j … −j, so s+ sits on the superdiagonal. Rotations follow the
z-then-y Euler composition D(θ, φ) = e^{−iφ·sz}·e^{−iθ·sy}; with that choice
D·sz·D† equals the spin component along (sinθcosφ, sinθsinφ, cosθ).
"""
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from app.errors import InvalidParameterError
from app.spin.schemas import SpinOperators, WignerRotation
from utils.linalg import freeze

SPIN_THREE_HALVES = 1.5


def _validate_spin(j: float) -> float:
    if not np.isfinite(j):
        raise InvalidParameterError(f"spin quantum number must be finite, got {j!r}")
    two_j = round(2 * j)
    if abs(2 * j - two_j) > 1e-12 or two_j < 1:
        raise InvalidParameterError(f"spin quantum number must be a positive half-integer, got {j!r}")
    return two_j / 2


@lru_cache(maxsize=16)
def _spin_operators(j: float) -> SpinOperators:
    m = j - np.arange(int(round(2 * j)) + 1)
    # s+ raises m, i.e. moves one index towards the start of the descending basis
    s_plus = np.diag(np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1)), k=1).astype(complex)
    s_minus = s_plus.conj().T
    sx = (s_plus + s_minus) / 2
    sy = (s_plus - s_minus) / 2j
    sz = np.diag(m).astype(complex)
    s_squared = j * (j + 1) * np.eye(m.size, dtype=complex)
    return SpinOperators(
        j=j,
        sx=freeze(sx),
        sy=freeze(sy),
        sz=freeze(sz),
        s_squared=freeze(s_squared),
    )


def spin_operators(j: float) -> SpinOperators:
    return _spin_operators(_validate_spin(j))


def rotated_sz(ops: SpinOperators, theta, phi) -> np.ndarray:
    """sinθcosφ·sx + sinθsinφ·sy + cosθ·sz.

    ``phi`` may be an array, in which case a stack of matrices with the
    leading axis of ``phi`` is returned.
    """
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    cx = (st * np.cos(phi))[..., None, None]
    cy = (st * np.sin(phi))[..., None, None]
    return cx * ops.sx + cy * ops.sy + np.cos(theta) * ops.sz


@lru_cache(maxsize=256)
def _polar_rotation(j: float, theta: float) -> np.ndarray:
    return freeze(expm(-1j * theta * spin_operators(j).sy))


def wigner_rotation(j: float, theta: float, phi: float) -> WignerRotation:
    j = _validate_spin(j)
    if not (np.isfinite(theta) and np.isfinite(phi)):
        raise InvalidParameterError("rotation angles must be finite")
    ops = spin_operators(j)
    # sz is diagonal, so its exponential is a phase per row
    azimuthal = np.exp(-1j * phi * ops.m_values)[:, None]
    matrix = azimuthal * _polar_rotation(j, float(theta))
    return WignerRotation(j=j, theta=float(theta), phi=float(phi), matrix=freeze(matrix))
