from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SpinOperators:
    """Angular-momentum matrices in the basis m = +j, +j−1, …, −j."""

    j: float
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray
    s_squared: np.ndarray

    @property
    def dim(self) -> int:
        return self.sz.shape[0]

    @property
    def m_values(self) -> np.ndarray:
        return np.real(np.diag(self.sz))


@dataclass(frozen=True)
class WignerRotation:
    """e^{−iφ·sz}·e^{−iθ·sy}; its columns are the rotated |j, m⟩ states."""

    j: float
    theta: float
    phi: float
    matrix: np.ndarray
