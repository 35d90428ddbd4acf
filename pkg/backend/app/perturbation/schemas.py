from dataclasses import dataclass
from enum import Enum


class Limit(str, Enum):
    ABELIAN = "abelian"
    NON_ABELIAN = "non_abelian"
    EXACT = "exact"


@dataclass(frozen=True)
class PerturbationReport:
    """Perturbative gauge around one limit next to the exact value, in units of ω.

    ``correction`` is the published leading term (second order around the
    Abelian limit, first order around the non-Abelian one). ``first_order``
    and ``second_order`` are the literal Rayleigh–Schrödinger terms for the
    reported branch; ``dressing_shift`` is the uniform −x/2 that every
    branch carries. ``approximate_gauge`` adds up what applies to the limit.
    """

    limit: Limit
    x: float
    theta: float
    unperturbed_gauge: float
    correction: float
    valid: bool
    singular: bool
    exact_gauge: float
    approximate_gauge: float
    abs_error: float
    first_order: float
    second_order: float
    dressing_shift: float
    exact_slope: float | None = None
    exact_curvature: float | None = None


@dataclass(frozen=True)
class SingularityLocus:
    b: float
    validity_threshold: float
    reflected: bool
    note: str
