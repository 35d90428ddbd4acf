from dataclasses import dataclass

from app.perturbation.schemas import Limit


@dataclass(frozen=True)
class SensitivityReport:
    """Partial derivatives of the dimensionless gauge, per unit angular frequency.

    Limit reports carry the published magnitudes; the EXACT report carries
    signed derivatives of λ/ω together with the part contributed by the
    uniform −x/2 dressing shift (``shift_db``, ``shift_domega``).
    """

    limit: Limit
    dgamma_domega: float
    dgamma_db: float
    evaluated_at: tuple[float, float, float]
    valid: bool = True
    shift_domega: float = 0.0
    shift_db: float = 0.0


@dataclass(frozen=True)
class NoiseSample:
    sigma_b: float
    sigma_omega: float
    n_samples: int
    seed: int
    mean_gauge: float
    measured_std: float
    linearized_std: float
