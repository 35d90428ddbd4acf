from dataclasses import dataclass
from enum import Enum

import numpy as np


class Subspace(str, Enum):
    THREE_HALVES = "3/2"
    ONE_HALF = "1/2"

    @property
    def indices(self) -> tuple[int, int]:
        """Positions of (+m, −m) in the m = +3/2 … −3/2 basis."""
        return (0, 3) if self is Subspace.THREE_HALVES else (1, 2)

    @property
    def kramers_signs(self) -> np.ndarray:
        # Θ|m⟩ = (−1)^{j−m}|−m⟩ for j = 3/2
        return np.array([1.0, 1.0]) if self is Subspace.THREE_HALVES else np.array([1.0, -1.0])


@dataclass(frozen=True)
class GaugeMatrix:
    subspace: Subspace
    theta: float
    matrix: np.ndarray
    eigengauges: tuple[float, float]
