"""
Dressed-state reduction of the ±1/2 subspace.

The amplitudes obey Ċ = i·H_eff(t)·C with an off-diagonal coupling rotating
at e^{ibt}. Writing C = F(t)·α with F(t) = diag(e^{−iω₊t}, e^{−iω₋t}) and
ω± = ∓b/2 leaves iα̇ = H_D·α with a constant H_D, so

    C(t) = F(t)·exp(−i·H_D·t)·C(0).

The eigenvalues of H_D are ±Λ; the reported branch is λ = Λ − b/2 and the
companion −Λ − b/2 (their sum is −b). The gauge is λ/ω and depends on
x = b/ω and θ only.
"""
import math

import numpy as np
from scipy.linalg import expm

from app.dressed.schemas import Ansatz, DressedSolution, EffectiveHamiltonian, LimitGauges
from app.errors import InvalidParameterError
from utils.linalg import freeze


def _check_rates(omega: float, b: float) -> None:
    if not omega > 0:
        raise InvalidParameterError(f"omega must be positive, got {omega}")
    if b < 0:
        raise InvalidParameterError(f"b must be non-negative, got {b}")


def _radicand(x, theta):
    """4sin²θ + cos²θ + x² − 2x·cosθ, written as (x − cosθ)² + 4sin²θ."""
    return (x - np.cos(theta)) ** 2 + 4 * np.sin(theta) ** 2


def effective_hamiltonian(
    omega: float, b: float, theta: float, ansatz: Ansatz = Ansatz.STANDARD
) -> EffectiveHamiltonian:
    _check_rates(omega, b)
    return EffectiveHamiltonian(omega=float(omega), b=float(b), theta=float(theta), ansatz=ansatz)


def dress(omega: float, b: float, theta: float, ansatz: Ansatz = Ansatz.STANDARD) -> DressedSolution:
    _check_rates(omega, b)
    sign = ansatz.field_sign
    x = b / omega
    detuning = -0.5 * omega * math.cos(theta) + sign * 0.5 * b
    coupling = -omega * math.sin(theta)
    h = np.array([[detuning, coupling], [coupling, -detuning]])
    evals, evecs = np.linalg.eigh(h)

    big_lambda = 0.5 * omega * math.sqrt(_radicand(sign * x, theta))
    shift = big_lambda - 0.5 * b
    return DressedSolution(
        omega=float(omega),
        b=float(b),
        theta=float(theta),
        ansatz=ansatz,
        x=x,
        h_dressed=freeze(h),
        eigenvalues=freeze(evals[::-1].copy()),
        eigenvectors=freeze(evecs[:, ::-1].copy()),
        big_lambda=big_lambda,
        energy_shift=shift,
        companion_shift=-big_lambda - 0.5 * b,
        gauge=shift / omega,
        dressing_frequencies=(-sign * 0.5 * b, sign * 0.5 * b),
    )


def dressing_frame(solution: DressedSolution, t: float) -> np.ndarray:
    w_plus, w_minus = solution.dressing_frequencies
    return np.diag([np.exp(-1j * w_plus * t), np.exp(-1j * w_minus * t)])


def dressed_propagator(solution: DressedSolution, t: float) -> np.ndarray:
    """Closed-form propagator F(t)·exp(−i·H_D·t) of the effective equation."""
    return dressing_frame(solution, t) @ expm(-1j * solution.h_dressed * t)


def _gauge(x, theta):
    return 0.5 * (np.sqrt(_radicand(x, theta)) - x)


def gauge_exact(x, theta):
    """λ/ω = (1/2)(√(4sin²θ + cos²θ + x² − 2x·cosθ) − x); accepts arrays."""
    if np.any(np.asarray(x) < 0):
        raise InvalidParameterError("x = b/omega must be non-negative")
    value = _gauge(x, theta)
    return float(value) if np.ndim(value) == 0 else value


def gauge_signed(x, theta):
    """Same closed form without the x ≥ 0 check; negative x is the reversed field sense."""
    return _gauge(x, theta)


def limit_gauges(theta: float) -> LimitGauges:
    """Magnitudes of the x → 0 and x → ∞ gauges.

    The reported STANDARD branch starts at +(1/2)√(4 − 3cos²θ) and tends to
    −(1/2)cosθ; the REVERSED branch tends to +(1/2)cosθ.
    """
    if not 0 <= theta <= math.pi:
        raise InvalidParameterError(f"theta must lie in [0, π], got {theta}")
    return LimitGauges(
        non_abelian=0.5 * math.sqrt(4 - 3 * math.cos(theta) ** 2),
        abelian=0.5 * abs(math.cos(theta)),
    )
