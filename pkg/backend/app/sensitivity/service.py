"""
Sensitivity of the gauge λ/ω to fluctuations of b and ω.

Around each limit the published leading-order partials are evaluated as
magnitudes. ``exact_sensitivity`` differentiates the closed form directly:
with x = b/ω and dγ/dx = (1/2)[(x − cosθ)/√((x − cosθ)² + 4sin²θ) − 1],

    ∂γ/∂b = (1/ω)·dγ/dx,   ∂γ/∂ω = −(x/ω)·dγ/dx.

Converting to accumulated phase multiplies by 2π per drive cycle.

The Monte Carlo check draws independent Gaussian δb, δω in blocks with
spawned seeds; block sums are combined with ``math.fsum`` so the result does
not depend on block order or on the number of workers.
"""
import logging
import math
import numpy as np
from joblib import Parallel, delayed

from app.config import get_settings
from app.dressed.service import gauge_signed
from app.errors import DomainError, InvalidParameterError, LinearizationBoundError
from app.perturbation.schemas import Limit
from app.sensitivity.schemas import NoiseSample, SensitivityReport

logger = logging.getLogger(__name__)

ABELIAN_MIN_X = 10.0
NON_ABELIAN_MAX_X = 0.1
LINEARIZATION_FRACTION = 0.05
MIN_SAMPLES = 10_000


def analytic_sensitivity(limit: Limit, b: float, omega: float, theta: float) -> SensitivityReport:
    if not omega > 0:
        raise InvalidParameterError(f"omega must be positive, got {omega}")
    sin2 = math.sin(theta) ** 2
    cos = abs(math.cos(theta))
    root = math.sqrt(4 - 3 * cos**2)
    x = b / omega
    if limit is Limit.ABELIAN:
        if b == 0:
            raise DomainError("the Abelian partials diverge at b = 0")
        return SensitivityReport(
            limit=limit,
            dgamma_domega=sin2 / b,
            dgamma_db=omega * sin2 / b**2,
            evaluated_at=(b, omega, theta),
            valid=x >= ABELIAN_MIN_X,
        )
    if limit is Limit.NON_ABELIAN:
        return SensitivityReport(
            limit=limit,
            dgamma_domega=b * cos / (2 * omega**2 * root),
            dgamma_db=cos / (2 * omega * root),
            evaluated_at=(b, omega, theta),
            valid=x <= NON_ABELIAN_MAX_X,
        )
    raise InvalidParameterError("use exact_sensitivity for the full-regime partials")


def _gauge_slope(x, theta):
    detuning = x - np.cos(theta)
    root = np.sqrt(detuning**2 + 4 * np.sin(theta) ** 2)
    # at the θ = 0, x = 1 kink take the x > cosθ side
    ratio = np.divide(detuning, root, out=np.ones_like(root, dtype=float), where=root > 0)
    return 0.5 * (ratio - 1)


def exact_sensitivity(b: float, omega: float, theta: float) -> SensitivityReport:
    if not omega > 0:
        raise InvalidParameterError(f"omega must be positive, got {omega}")
    x = b / omega
    slope = float(_gauge_slope(np.float64(x), theta))
    return SensitivityReport(
        limit=Limit.EXACT,
        dgamma_domega=-x * slope / omega,
        dgamma_db=slope / omega,
        evaluated_at=(b, omega, theta),
        shift_domega=x / (2 * omega),
        shift_db=-1 / (2 * omega),
    )


def _noise_block(task) -> tuple[float, float]:
    seed, size, b, omega, theta, sigma_b, sigma_omega, reference = task
    rng = np.random.default_rng(seed)
    b_samples = b + sigma_b * rng.standard_normal(size)
    omega_samples = omega + sigma_omega * rng.standard_normal(size)
    deviation = gauge_signed(b_samples / omega_samples, theta) - reference
    return math.fsum(deviation), math.fsum(deviation * deviation)


def monte_carlo_phase_noise(
    b: float,
    omega: float,
    theta: float,
    sigma_b: float,
    sigma_omega: float,
    n: int = 100_000,
    seed: int = 0,
    workers: int | None = None,
) -> NoiseSample:
    """Spread of λ/ω under Gaussian noise on (b, ω) next to its linearized prediction.

    The gauge varies on the scale of ω near b = 0, so the δb bound is taken
    relative to max(b, ω); δω is bounded relative to ω.
    """
    settings = get_settings()
    if sigma_b < 0 or sigma_omega < 0:
        raise InvalidParameterError("noise amplitudes must be non-negative")
    if sigma_b > LINEARIZATION_FRACTION * max(b, omega) or sigma_omega > LINEARIZATION_FRACTION * omega:
        raise LinearizationBoundError(
            f"sigma_b={sigma_b:g}, sigma_omega={sigma_omega:g} exceed "
            f"{LINEARIZATION_FRACTION:.0%} of the nominal scale"
        )
    if n < MIN_SAMPLES:
        raise InvalidParameterError(f"at least {MIN_SAMPLES} samples required, got {n}")

    reference = float(gauge_signed(b / omega, theta))
    block = settings.mc_block_size
    sizes = [block] * (n // block) + ([n % block] if n % block else [])
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    tasks = [(s, size, b, omega, theta, sigma_b, sigma_omega, reference) for s, size in zip(seeds, sizes)]

    workers = workers or settings.workers
    parts = Parallel(n_jobs=workers)(delayed(_noise_block)(task) for task in tasks)

    total = math.fsum(p[0] for p in parts)
    total_sq = math.fsum(p[1] for p in parts)
    variance = max(0.0, (total_sq - total * total / n) / (n - 1))

    partials = exact_sensitivity(b, omega, theta)
    linearized = math.hypot(partials.dgamma_db * sigma_b, partials.dgamma_domega * sigma_omega)
    logger.debug("monte carlo n=%d seed=%d std=%.4e linearized=%.4e", n, seed, math.sqrt(variance), linearized)
    return NoiseSample(
        sigma_b=sigma_b,
        sigma_omega=sigma_omega,
        n_samples=n,
        seed=seed,
        mean_gauge=reference + total / n,
        measured_std=math.sqrt(variance),
        linearized_std=linearized,
    )
