from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np


class Ansatz(str, Enum):
    """Choice of dressing frequencies ω±.

    STANDARD uses ω± = ∓b/2 and removes the time dependence of the effective
    equation as written. REVERSED uses ω± = ±b/2, which does the same for
    the opposite field sense (b → −b).
    """

    STANDARD = "standard"
    REVERSED = "reversed"

    @property
    def field_sign(self) -> float:
        return 1.0 if self is Ansatz.STANDARD else -1.0


@dataclass(frozen=True)
class EffectiveHamiltonian:
    omega: float
    b: float
    theta: float
    ansatz: Ansatz = Ansatz.STANDARD

    @property
    def signed_b(self) -> float:
        return self.ansatz.field_sign * self.b

    def __call__(self, t):
        """2×2 matrix at time t, or a (n, 2, 2) stack for an array of times."""
        t = np.asarray(t, dtype=float)
        half = 0.5 * self.omega * np.cos(self.theta)
        coupling = self.omega * np.sin(self.theta) * np.exp(1j * self.signed_b * t)
        out = np.empty(t.shape + (2, 2), dtype=complex)
        out[..., 0, 0] = half
        out[..., 1, 1] = -half
        out[..., 0, 1] = coupling
        out[..., 1, 0] = np.conj(coupling)
        return out


@dataclass(frozen=True)
class DressedSolution:
    omega: float
    b: float
    theta: float
    ansatz: Ansatz
    x: float
    h_dressed: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    big_lambda: float
    energy_shift: float
    companion_shift: float
    gauge: float
    dressing_frequencies: tuple[float, float]


class LimitGauges(NamedTuple):
    non_abelian: float
    abelian: float
