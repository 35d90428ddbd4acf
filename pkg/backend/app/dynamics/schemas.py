import math
from dataclasses import dataclass, field

import numpy as np

from app.dressed.schemas import Ansatz
from app.field.schemas import FieldConfig, Regime


@dataclass(frozen=True)
class PropagatorResult:
    """Time-ordered propagator plus the checkpoints it was built from.

    ``estimated_error`` is the Richardson step-halving estimate
    ‖U_N − U_{N/2}‖/15; ``unitarity_error`` is ‖U†U − I‖.
    """

    dimension: int
    t_final: float
    u: np.ndarray
    step_count: int
    estimated_error: float
    unitarity_error: float
    checkpoint_times: np.ndarray
    checkpoints: np.ndarray
    # effective (2×2) runs
    omega: float | None = None
    b: float | None = None
    theta: float | None = None
    ansatz: Ansatz | None = None
    # laboratory (4×4) runs
    config: FieldConfig | None = None
    regime: Regime | None = None
    cycles: int | None = None


@dataclass(frozen=True)
class PhaseResult:
    """Phases per drive cycle for one level, in radians.

    ``geometric_phase`` is wrapped to (−π, π]; the full value is
    ``geometric_phase + 2π·winding``.
    """

    state_label: str
    m: float
    total_phase: float
    dynamical_phase: float
    geometric_phase: float
    winding: int
    subspace: str = field(default="")

    @property
    def unwrapped_geometric_phase(self) -> float:
        return self.geometric_phase + 2 * math.pi * self.winding
