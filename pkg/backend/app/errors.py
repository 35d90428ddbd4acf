"""Exceptions raised by the physics services.

Everything derives from ``ValueError`` so callers that only care about
"bad input or failed check" can catch one type. The CLI maps
``InvalidParameterError`` to exit status 2; the HTTP layer turns any
``GeoPhaseError`` into a 400 payload.
"""


class GeoPhaseError(ValueError):
    pass


class InvalidParameterError(GeoPhaseError):
    pass


class DomainError(GeoPhaseError):
    """A formula is evaluated where it divides by zero."""


class LinearizationBoundError(InvalidParameterError):
    pass


class StepCountError(InvalidParameterError):
    def __init__(self, steps: int, required: int):
        super().__init__(f"{steps} integration steps requested, at least {required} required")
        self.steps = steps
        self.required = required


class ConventionDriftError(GeoPhaseError):
    """Instantaneous eigenvectors no longer line up with the Wigner frame."""

    def __init__(self, label: str, overlap: float, threshold: float):
        super().__init__(
            f"eigenvector for m={label} overlaps its Wigner column by {overlap:.6f} "
            f"(threshold {threshold})"
        )
        self.overlap = overlap


class PhiDependenceError(GeoPhaseError):
    def __init__(self, deviation: float, bound: float):
        super().__init__(f"numeric gauge varies along the path by {deviation:.3e} (bound {bound:.3e})")
        self.deviation = deviation


class UnitarityError(GeoPhaseError):
    def __init__(self, drift: float, bound: float):
        super().__init__(f"propagator unitarity drift {drift:.3e} exceeds {bound:.1e}")
        self.drift = drift


class SubspaceMixingError(GeoPhaseError):
    def __init__(self, leakage: float, bound: float):
        super().__init__(
            f"subspace mixing: ±1/2 / ±3/2 leakage {leakage:.3e} exceeds {bound:.1e}; "
            "omega is too large compared to c"
        )
        self.leakage = leakage
