"""
Parameter sweeps and the figure presets.

A sweep evaluates the requested column groups on a 1-D grid and returns a
``pandas.DataFrame`` with one row per grid point, in grid order. A failure in
one column group fills that group with NaN and is reported in the row's
``error`` column; rows are never dropped.
"""
import logging
import math
import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from app.config import get_settings
from app.dressed.service import dress, gauge_exact
from app.dynamics.service import oracle_gauge
from app.errors import GeoPhaseError, InvalidParameterError
from app.perturbation.service import abelian_correction, non_abelian_correction
from app.sensitivity.service import exact_sensitivity
from app.sweep.schemas import FixedParameters, SweepSpec

logger = logging.getLogger(__name__)

FIG_THETA = 1.0  # 57.3°
FIG2_OMEGAS = (1.0, 10.0, 100.0)
FIG2_X_MAX = 50.0
FIG3_OMEGA = 10.0
FIG3_B_MAX = 100.0
SURFACE_B_MAX = 100.0
SURFACE_OMEGA_RANGE = (1.0, 100.0)

COLUMNS = {
    "gauge_exact": ["gauge_exact"],
    "dressed": ["dressed_gauge", "big_lambda", "companion_shift"],
    "oracle": ["oracle_gauge", "oracle_error"],
    "perturbation": [
        "abelian_perturbation",
        "abelian_valid",
        "abelian_singular",
        "non_abelian_perturbation",
        "non_abelian_valid",
    ],
    "sensitivity": ["dgamma_db", "dgamma_domega"],
}


def grid(spec: SweepSpec) -> np.ndarray:
    if spec.log:
        return np.geomspace(spec.start, spec.stop, spec.points)
    return np.linspace(spec.start, spec.stop, spec.points)


def _point(spec: SweepSpec, value: float) -> tuple[float, float, float]:
    fixed = spec.fixed
    b, omega, theta = fixed.b, fixed.omega, fixed.theta
    if spec.axis == "b":
        b = value
    elif spec.axis == "omega":
        omega = value
    elif spec.axis == "theta":
        theta = value
    else:
        b = value * omega
    return float(b), float(omega), float(theta)


def _evaluate(output: str, spec: SweepSpec, b: float, omega: float, theta: float) -> dict:
    x = b / omega
    if output == "gauge_exact":
        return {"gauge_exact": gauge_exact(x, theta)}
    if output == "dressed":
        solution = dress(omega, b, theta, spec.ansatz)
        return {
            "dressed_gauge": solution.gauge,
            "big_lambda": solution.big_lambda,
            "companion_shift": solution.companion_shift,
        }
    if output == "oracle":
        measured = oracle_gauge(omega, b, theta, spec.ansatz, steps=spec.steps)
        return {"oracle_gauge": measured, "oracle_error": abs(measured - dress(omega, b, theta, spec.ansatz).gauge)}
    if output == "perturbation":
        row = {"abelian_valid": False, "abelian_singular": False, "abelian_perturbation": math.nan}
        if x > 0:
            abelian = abelian_correction(x, theta)
            row.update(
                abelian_perturbation=abelian.approximate_gauge,
                abelian_valid=abelian.valid,
                abelian_singular=abelian.singular,
            )
        non_abelian = non_abelian_correction(x, theta)
        row.update(non_abelian_perturbation=non_abelian.approximate_gauge, non_abelian_valid=non_abelian.valid)
        return row
    report = exact_sensitivity(b, omega, theta)
    return {"dgamma_db": report.dgamma_db, "dgamma_domega": report.dgamma_domega}


def _row(task) -> dict:
    index, spec, value = task
    b, omega, theta = _point(spec, value)
    row = {"index": index, "b": b, "omega": omega, "theta": theta, "x": b / omega}
    errors = []
    for output in spec.outputs:
        try:
            row.update(_evaluate(output, spec, b, omega, theta))
        except GeoPhaseError as exc:
            logger.warning("sweep row %d (%s=%g): %s failed: %s", index, spec.axis, value, output, exc)
            row.update({column: math.nan for column in COLUMNS[output]})
            errors.append(f"{output}: {exc}")
    row["error"] = "; ".join(errors)
    return row


def run_sweep(spec: SweepSpec, workers: int | None = None) -> pd.DataFrame:
    workers = workers or get_settings().workers
    tasks = [(i, spec, float(v)) for i, v in enumerate(grid(spec))]
    logger.info("sweep over %s: %d points, outputs=%s", spec.axis, len(tasks), ",".join(spec.outputs))
    rows = Parallel(n_jobs=workers)(delayed(_row)(task) for task in tasks)

    columns = ["index", "b", "omega", "theta", "x"]
    for output in spec.outputs:
        columns += [c for c in COLUMNS[output] if c not in columns]
    columns.append("error")
    return pd.DataFrame(rows, columns=columns).sort_values("index", kind="stable").reset_index(drop=True)


# ── Presets ───────────────────────────────────────────────────────────────────

def fig2_specs(points: int = 501, seed: int = 0) -> list[SweepSpec]:
    """Gauge against b for ω ∈ {1, 10, 100} at θ = 57.3°."""
    return [
        SweepSpec(
            axis="b",
            start=0.0,
            stop=FIG2_X_MAX * omega,
            points=points,
            fixed=FixedParameters(omega=omega, theta=FIG_THETA),
            outputs=["gauge_exact"],
            seed=seed,
        )
        for omega in FIG2_OMEGAS
    ]


def fig3_specs(points: int = 1001, seed: int = 0) -> list[SweepSpec]:
    """Exact gauge next to both perturbative expansions, θ = 57.3°, ω = 10."""
    return [
        SweepSpec(
            axis="b",
            start=0.0,
            stop=FIG3_B_MAX,
            points=points,
            fixed=FixedParameters(omega=FIG3_OMEGA, theta=FIG_THETA),
            outputs=["gauge_exact", "perturbation"],
            seed=seed,
        )
    ]


def surface_specs(points: int = 101, seed: int = 0) -> list[SweepSpec]:
    """Gauge over the (b, ω) product grid at θ = 57.3°, one b-sweep per ω."""
    return [
        SweepSpec(
            axis="b",
            start=0.0,
            stop=SURFACE_B_MAX,
            points=points,
            fixed=FixedParameters(omega=float(omega), theta=FIG_THETA),
            outputs=["gauge_exact"],
            seed=seed,
        )
        for omega in np.linspace(*SURFACE_OMEGA_RANGE, points)
    ]


def pole_specs(points: int = 31, seed: int = 0, steps: int = 2000) -> list[SweepSpec]:
    """θ = 0: the ±1/2 levels cross at x = 1 and the gauge is piecewise linear."""
    return [
        SweepSpec(
            axis="x",
            start=0.0,
            stop=3.0,
            points=points,
            fixed=FixedParameters(omega=1.0, theta=0.0),
            outputs=["gauge_exact", "dressed", "oracle"],
            steps=steps,
            seed=seed,
        )
    ]


PRESETS = {"fig2": fig2_specs, "fig3": fig3_specs, "surface": surface_specs, "pole": pole_specs}


def preset_specs(name: str, points: int | None = None, seed: int = 0) -> list[SweepSpec]:
    if name not in PRESETS:
        raise InvalidParameterError(f"unknown preset '{name}', expected one of {', '.join(PRESETS)}")
    factory = PRESETS[name]
    return factory(seed=seed) if points is None else factory(points=points, seed=seed)


def run_preset(name: str, points: int | None = None, seed: int = 0, workers: int | None = None) -> pd.DataFrame:
    """Concatenate the preset's curves; ``curve`` numbers them in order."""
    frames = []
    for curve, spec in enumerate(preset_specs(name, points, seed)):
        frame = run_sweep(spec, workers)
        frame.insert(0, "curve", curve)
        frames.append(frame)
    return pd.concat(frames, ignore_index=True)
