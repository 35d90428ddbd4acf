"""
Self-check suite behind ``cli validate``.

``fast`` runs the closed-form and finite-difference checks (seconds);
``full`` adds the integration oracles, including the 4-level run at
c/ω = 1000 which takes about a million RK4 steps.
"""
import logging
import math
import tempfile
from collections.abc import Callable
from pathlib import Path

import numpy as np

from app.config import get_settings
from app.dressed.service import dress, dressed_propagator, gauge_exact
from app.dynamics.service import extract_phases, propagate_effective, propagate_full
from app.errors import GeoPhaseError
from app.field.schemas import FieldConfig, Regime
from app.gauge.schemas import Subspace
from app.gauge.service import eigengauge, gauge_matrix_analytic, gauge_matrix_numeric
from app.perturbation.schemas import Limit
from app.perturbation.service import abelian_correction, non_abelian_correction, singularity_locus
from app.sensitivity.service import analytic_sensitivity, exact_sensitivity, monte_carlo_phase_noise
from app.spin.service import SPIN_THREE_HALVES, spin_operators, wigner_rotation
from app.sweep.service import run_preset
from app.validation.schemas import CheckResult, Level, ValidationReport
from utils.dataset_store import read_dataset, save_dataset
from utils.linalg import frobenius, unitarity_error

logger = logging.getLogger(__name__)

THETA = 1.0


def _result(name: str, measured: float, threshold: float, passed: bool | None = None, detail: str = "") -> CheckResult:
    if passed is None:
        passed = bool(np.isfinite(measured) and measured <= threshold)
    return CheckResult(name=name, passed=passed, measured=float(measured), threshold=float(threshold), detail=detail)


# ── fast ──────────────────────────────────────────────────────────────────────

def check_spin_commutators() -> CheckResult:
    ops = spin_operators(SPIN_THREE_HALVES)
    residual = max(
        frobenius(ops.sx @ ops.sy - ops.sy @ ops.sx - 1j * ops.sz),
        frobenius(ops.sy @ ops.sz - ops.sz @ ops.sy - 1j * ops.sx),
        frobenius(ops.sz @ ops.sx - ops.sx @ ops.sz - 1j * ops.sy),
        frobenius(ops.sx @ ops.sx + ops.sy @ ops.sy + ops.sz @ ops.sz - ops.s_squared),
    )
    return _result("spin_commutators", residual, 1e-12)


def check_wigner_unitarity() -> CheckResult:
    worst = max(
        unitarity_error(wigner_rotation(SPIN_THREE_HALVES, theta, phi).matrix)
        for theta in np.linspace(0, math.pi, 7)
        for phi in np.linspace(0, 2 * math.pi, 7)
    )
    return _result("wigner_unitarity", worst, 1e-12)


def check_non_abelian_endpoint() -> CheckResult:
    thetas = np.linspace(0, math.pi, 13)
    worst = max(abs(gauge_exact(0.0, t) - eigengauge(t)[0]) for t in thetas)
    return _result("non_abelian_endpoint", worst, 1e-12, detail=f"gauge(0, 1.0) = {gauge_exact(0.0, THETA):.9f}")


def check_abelian_endpoint() -> CheckResult:
    worst = max(abs(gauge_exact(1e3, t) + 0.5 * math.cos(t)) for t in (0.5, 1.0, 1.4))
    return _result("abelian_endpoint", worst, 1e-3)


def check_gauge_matrices() -> CheckResult:
    worst = 0.0
    for subspace in Subspace:
        for theta in np.linspace(0.1, 3.0, 7):
            numeric = gauge_matrix_numeric(subspace, theta).matrix
            worst = max(worst, float(np.max(np.abs(numeric - gauge_matrix_analytic(subspace, theta).matrix))))
    return _result("gauge_matrices", worst, 1e-6)


def check_gauge_geometry() -> CheckResult:
    with_field = FieldConfig(c=1.0, b=0.3, omega=1.0, theta=THETA)
    worst = max(
        float(
            np.max(
                np.abs(
                    gauge_matrix_numeric(subspace, THETA, config=with_field).matrix
                    - gauge_matrix_numeric(subspace, THETA).matrix
                )
            )
        )
        for subspace in Subspace
    )
    return _result("gauge_geometry_invariance", worst, 1e-8)


def check_monotonic_transition() -> CheckResult:
    x = np.linspace(0.0, 50.0, 1000)
    steepest = max(float(np.max(np.diff(gauge_exact(x, t)))) for t in (0.3, 1.0, 2.0, 2.8))
    return _result("monotonic_transition", steepest, 0.0, passed=steepest < 0)


def check_fig2_collapse() -> CheckResult:
    frame = run_preset("fig2", points=1000)
    curves = np.stack([group["gauge_exact"].to_numpy() for _, group in frame.groupby("curve")])
    spread = float(np.max(curves.max(axis=0) - curves.min(axis=0)))
    return _result("fig2_collapse", spread, 1e-12)


def check_abelian_perturbation() -> CheckResult:
    cos = math.cos(THETA)
    worst = 0.0
    for x in np.geomspace(5.0, 1e3, 200):
        report = abelian_correction(x, THETA)
        deviation = report.exact_gauge + 0.5 * cos
        worst = max(worst, abs(report.correction - deviation) / abs(deviation))
    return _result("abelian_perturbation", worst, 0.05)


def check_singularity() -> CheckResult:
    omega = 10.0
    locus = singularity_locus(THETA, omega)
    offset = abs(locus.b - omega * math.cos(THETA))
    flagged = abelian_correction(locus.b / omega, THETA).singular
    return _result("abelian_singularity", offset, 0.0, passed=flagged and offset == 0.0)


def check_non_abelian_slope() -> CheckResult:
    worst = 0.0
    for theta in (0.5, 1.0, 2.0):
        x = 1e-3
        report = non_abelian_correction(x, theta)
        worst = max(worst, abs(report.first_order / x - 0.5 - report.exact_slope))
    return _result("non_abelian_slope", worst, 1e-12)


def check_sensitivity_limits() -> CheckResult:
    worst = 0.0
    omega = 1.0
    for theta in (0.5, 1.0):
        b = 1e3 * omega
        exact = exact_sensitivity(b, omega, theta)
        analytic = analytic_sensitivity(Limit.ABELIAN, b, omega, theta)
        worst = max(
            worst,
            abs(abs(exact.dgamma_db) - analytic.dgamma_db) / analytic.dgamma_db,
            abs(abs(exact.dgamma_domega) - analytic.dgamma_domega) / analytic.dgamma_domega,
        )
        b = 1e-3 * omega
        exact = exact_sensitivity(b, omega, theta)
        analytic = analytic_sensitivity(Limit.NON_ABELIAN, b, omega, theta)
        # compare the θ-dependent part, with the uniform dressing shift removed
        worst = max(
            worst,
            abs(abs(exact.dgamma_db - exact.shift_db) - analytic.dgamma_db) / analytic.dgamma_db,
            abs(abs(exact.dgamma_domega - exact.shift_domega) - analytic.dgamma_domega) / analytic.dgamma_domega,
        )
    return _result("sensitivity_limits", worst, 0.01)


def check_monte_carlo() -> CheckResult:
    sample = monte_carlo_phase_noise(100.0, 1.0, THETA, sigma_b=1.0, sigma_omega=0.0, n=100_000, seed=11)
    mismatch = abs(sample.measured_std / sample.linearized_std - 1)
    return _result("monte_carlo_linearization", mismatch, 0.05)


def check_robustness_direction() -> CheckResult:
    sigma_b = 0.01
    small_x = monte_carlo_phase_noise(0.01, 1.0, THETA, sigma_b, 0.0, n=20_000, seed=3)
    large_x = monte_carlo_phase_noise(100.0, 1.0, THETA, sigma_b, 0.0, n=20_000, seed=3)
    ratio = small_x.measured_std / large_x.measured_std
    return _result("robustness_direction", ratio, 1.0, passed=ratio > 1.0, detail="std(x=0.01) / std(x=100)")


def check_determinism() -> CheckResult:
    """Two fig2 runs with the same seed write identical files that read back intact."""
    header = {"preset": "fig2", "seed": 7}
    with tempfile.TemporaryDirectory() as tmp:
        paths = [
            save_dataset(run_preset("fig2", points=101, seed=7), header, Path(tmp) / f"run{k}.csv") for k in range(2)
        ]
        identical = paths[0].read_bytes() == paths[1].read_bytes()
        loaded_header, loaded = read_dataset(paths[0])
    expected = run_preset("fig2", points=101, seed=7)
    measured = float(np.max(np.abs(loaded["gauge_exact"].to_numpy() - expected["gauge_exact"].to_numpy())))
    passed = identical and loaded_header == header and len(loaded) == len(expected) and measured <= 1e-12
    return _result("determinism", measured, 1e-12, passed=passed)


# ── full ──────────────────────────────────────────────────────────────────────

def check_effective_oracle() -> CheckResult:
    worst = 0.0
    for omega in (0.5, 1.0, 2.0, 5.0, 10.0):
        for x in (0.0, 0.1, 1.0, 3.0, 10.0):
            for theta in (0.1, 0.5, 1.0, 1.5, 2.5):
                b = x * omega
                t = 2 * math.pi / omega
                result = propagate_effective(omega, b, theta, t, estimate_error=False)
                closed = dressed_propagator(dress(omega, b, theta), t)
                worst = max(worst, frobenius(result.u - closed))
    return _result("effective_oracle", worst, 1e-8)


def _four_level_run():
    config = FieldConfig(c=1000.0, b=0.0, omega=1.0, theta=THETA)
    result = propagate_full(config, Regime.ABELIAN, cycles=1, estimate_error=False)
    return result, extract_phases(result)


def check_four_level() -> list[CheckResult]:
    result, phases = _four_level_run()
    three_halves = 3 * math.pi * math.cos(THETA)
    one_half = 2 * math.pi * eigengauge(THETA)[0]
    outer = sorted(p.unwrapped_geometric_phase for p in (phases[0], phases[3]))
    inner = sorted(p.unwrapped_geometric_phase for p in (phases[1], phases[2]))
    return [
        _result("four_level_unitarity", result.unitarity_error, get_settings().unitarity_tolerance),
        _result(
            "four_level_three_halves",
            max(abs(outer[0] + three_halves), abs(outer[1] - three_halves)) / three_halves,
            0.01,
        ),
        _result(
            "four_level_one_half",
            max(abs(inner[0] + one_half), abs(inner[1] - one_half)) / one_half,
            0.01,
        ),
    ]


def check_pole_oracle() -> CheckResult:
    frame = run_preset("pole", points=7)
    worst = float(np.max(np.abs(frame["oracle_gauge"] - frame["gauge_exact"])))
    return _result("pole_oracle", worst, 1e-8)


FAST_CHECKS: list[Callable[[], CheckResult]] = [
    check_spin_commutators,
    check_wigner_unitarity,
    check_non_abelian_endpoint,
    check_abelian_endpoint,
    check_gauge_matrices,
    check_gauge_geometry,
    check_monotonic_transition,
    check_fig2_collapse,
    check_abelian_perturbation,
    check_singularity,
    check_non_abelian_slope,
    check_sensitivity_limits,
    check_monte_carlo,
    check_robustness_direction,
    check_determinism,
]

FULL_CHECKS: list[Callable] = [check_effective_oracle, check_pole_oracle, check_four_level]


def _run(check: Callable, report: ValidationReport) -> None:
    try:
        outcome = check()
    except GeoPhaseError as exc:
        name = check.__name__.removeprefix("check_")
        outcome = CheckResult(name=name, passed=False, measured=math.nan, threshold=math.nan, detail=str(exc))
    for result in outcome if isinstance(outcome, list) else [outcome]:
        logger.info(
            "%s %s: measured=%.3e threshold=%.3e",
            "PASS" if result.passed else "FAIL",
            result.name,
            result.measured,
            result.threshold,
        )
        report.checks.append(result)


def validate(level: Level = Level.FAST) -> ValidationReport:
    level = Level(level)
    report = ValidationReport(level=level)
    for check in FAST_CHECKS:
        _run(check, report)
    if level is Level.FULL:
        for check in FULL_CHECKS:
            _run(check, report)
    return report
