"""
Perturbation theory on the dressed Hamiltonian around its two limits.

Everything is in units of ω, so h_D = H_D/ω = [[(x − cosθ)/2, −sinθ],
[−sinθ, −(x − cosθ)/2]] and the reported gauge is its upper eigenvalue
minus x/2.

  * Abelian side (x ≫ 1): unperturbed diagonal part, perturbation the
    off-diagonal coupling. First order vanishes, second order is
    sin²θ/(x − cosθ), singular at x = cosθ.
  * Non-Abelian side (x ≪ 1): unperturbed h_D at x = 0, perturbation
    diag(x/2, −x/2). The published first-order term is x·cosθ/(2√(4 − 3cos²θ));
    the uniform −x/2 dressing shift is kept as its own entry.
"""
import math

import numpy as np

from app.dressed.service import gauge_exact
from app.errors import InvalidParameterError
from app.perturbation.schemas import Limit, PerturbationReport, SingularityLocus

SINGULAR_WINDOW = 1e-9


def rayleigh_schrodinger(h0: np.ndarray, dh: np.ndarray) -> tuple[float, float, float]:
    """(E₀, E₁, E₂) for the upper level of a Hermitian h0 perturbed by dh."""
    evals, evecs = np.linalg.eigh(h0)
    top = int(np.argmax(evals))
    state = evecs[:, top]
    first = float(np.real(np.vdot(state, dh @ state)))
    second = 0.0
    for k in range(evals.size):
        if k == top:
            continue
        gap = evals[top] - evals[k]
        coupling = abs(np.vdot(evecs[:, k], dh @ state)) ** 2
        second += math.inf if gap == 0 else coupling / gap
    return float(evals[top]), first, float(second)


def abelian_correction(x: float, theta: float) -> PerturbationReport:
    if not x > 0:
        raise InvalidParameterError(f"x must be positive around the Abelian limit, got {x}")
    cos, sin = math.cos(theta), math.sin(theta)
    detuning = x - cos
    singular = abs(detuning) < SINGULAR_WINDOW

    h0 = np.diag([detuning / 2, -detuning / 2])
    dh = np.array([[0.0, -sin], [-sin, 0.0]])
    _, first, second = rayleigh_schrodinger(h0, dh)

    unperturbed = -0.5 * cos
    correction = math.nan if singular else sin**2 / detuning
    exact = gauge_exact(x, theta)
    approximate = unperturbed + correction
    return PerturbationReport(
        limit=Limit.ABELIAN,
        x=float(x),
        theta=float(theta),
        unperturbed_gauge=unperturbed,
        correction=correction,
        valid=x > abs(cos) and not singular,
        singular=singular,
        exact_gauge=exact,
        approximate_gauge=approximate,
        abs_error=abs(approximate - exact),
        first_order=first,
        second_order=math.nan if singular else second,
        dressing_shift=-0.5 * x,
    )


def non_abelian_correction(x: float, theta: float) -> PerturbationReport:
    if x < 0:
        raise InvalidParameterError(f"x must be non-negative, got {x}")
    cos, sin = math.cos(theta), math.sin(theta)
    root = math.sqrt(4 - 3 * cos**2)

    h0 = np.array([[-cos / 2, -sin], [-sin, cos / 2]])
    dh = np.diag([x / 2, -x / 2])
    e0, first, second = rayleigh_schrodinger(h0, dh)

    exact = gauge_exact(x, theta)
    approximate = e0 + first - 0.5 * x
    return PerturbationReport(
        limit=Limit.NON_ABELIAN,
        x=float(x),
        theta=float(theta),
        unperturbed_gauge=0.5 * root,
        correction=x * cos / (2 * root),
        valid=x < 1,
        singular=False,
        exact_gauge=exact,
        approximate_gauge=approximate,
        abs_error=abs(approximate - exact),
        first_order=first,
        second_order=second,
        dressing_shift=-0.5 * x,
        exact_slope=-0.5 * (1 + cos / root),
        exact_curvature=sin**2 / root**3,
    )


def singularity_locus(theta: float, omega: float) -> SingularityLocus:
    """b = ω·cosθ, where the Abelian second-order term diverges."""
    if not omega > 0:
        raise InvalidParameterError(f"omega must be positive, got {omega}")
    b = omega * math.cos(theta)
    reflected = b < 0
    note = (
        f"the Abelian decomposition holds for b > {abs(b):.6g}"
        if not reflected
        else f"cosθ < 0: the pole sits at negative b; the decomposition holds for b > ω|cosθ| = {abs(b):.6g}"
    )
    return SingularityLocus(b=b, validity_threshold=abs(b), reflected=reflected, note=note)
