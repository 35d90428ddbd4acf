"""
Command-line entry point.

  cd backend && python -m app.cli <command> [options]

Angles are given in degrees on the command line (``--theta-deg 57.3``) and
in radians in JSON config files (``theta_rad``). Datasets go to stdout or
``--out``; logs go to stderr.

Exit status: 0 success, 1 a check failed, 2 bad input.
"""
import argparse
import json
import logging
import math
import sys
from pathlib import Path

import pandas as pd
import uvicorn
from pydantic import ValidationError

from app.config import configure_logging, get_settings
from app.dressed.schemas import Ansatz
from app.dressed.service import dress
from app.dynamics.service import extract_phases, propagate_full
from app.errors import DomainError, GeoPhaseError, InvalidParameterError
from app.field.schemas import FieldConfig, Regime
from app.gauge.schemas import Subspace
from app.gauge.service import gauge_matrix_analytic, gauge_matrix_numeric
from app.perturbation.schemas import Limit
from app.perturbation.service import abelian_correction, non_abelian_correction, singularity_locus
from app.sensitivity.service import analytic_sensitivity, exact_sensitivity, monte_carlo_phase_noise
from app.sweep.schemas import FixedParameters, SweepSpec
from app.sweep.service import PRESETS, preset_specs, run_preset, run_sweep
from app.validation.schemas import Level
from app.validation.service import validate
from utils.dataset_store import render_dataset, save_dataset

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_BAD_INPUT = 0, 1, 2

DEFAULTS = {"c": 1000.0, "b": 0.0, "omega": 1.0, "theta_rad": 1.0}
SWEEP_KEYS = ("axis", "start", "stop", "points", "log", "outputs", "steps")


# ── configuration ─────────────────────────────────────────────────────────────

def load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidParameterError(f"cannot read config {path}: {e}") from e


def resolve_parameters(args: argparse.Namespace, file_config: dict) -> dict:
    """Defaults, then the config file, then command-line flags."""
    params = dict(DEFAULTS)
    params.update({k: file_config[k] for k in DEFAULTS if k in file_config})
    for key in ("c", "b", "omega"):
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    if getattr(args, "theta_deg", None) is not None:
        params["theta_rad"] = math.radians(args.theta_deg)
    return params


def field_config(params: dict) -> FieldConfig:
    try:
        return FieldConfig(**params)
    except ValidationError as e:
        raise InvalidParameterError(str(e)) from e


# ── output ────────────────────────────────────────────────────────────────────

def emit(frame: pd.DataFrame, header: dict, args: argparse.Namespace) -> None:
    if args.out:
        path = save_dataset(frame, header, args.out, args.format)
        logger.info("wrote %d rows to %s", len(frame), path)
    else:
        sys.stdout.write(render_dataset(frame, header, args.format))


def _header(command: str, args: argparse.Namespace, **extra) -> dict:
    return {"command": command, "seed": args.seed, **extra}


# ── commands ──────────────────────────────────────────────────────────────────

def cmd_gauge(args, params) -> int:
    theta = params["theta_rad"]
    rows = []
    for subspace in Subspace:
        gauge = gauge_matrix_numeric(subspace, theta) if args.numeric else gauge_matrix_analytic(subspace, theta)
        m = gauge.matrix
        rows.append(
            {
                "subspace": subspace.value,
                "g00": m[0, 0], "g01": m[0, 1], "g10": m[1, 0], "g11": m[1, 1],
                "eigengauge_plus": gauge.eigengauges[0],
                "eigengauge_minus": gauge.eigengauges[1],
            }
        )
    emit(pd.DataFrame(rows), _header("gauge", args, theta_rad=theta, numeric=args.numeric), args)
    return EXIT_OK


def cmd_dress(args, params) -> int:
    rows = []
    for ansatz in ([Ansatz(args.ansatz)] if args.ansatz else list(Ansatz)):
        s = dress(params["omega"], params["b"], params["theta_rad"], ansatz)
        rows.append(
            {
                "ansatz": ansatz.value,
                "x": s.x,
                "big_lambda": s.big_lambda,
                "energy_shift": s.energy_shift,
                "companion_shift": s.companion_shift,
                "gauge": s.gauge,
                "omega_plus": s.dressing_frequencies[0],
                "omega_minus": s.dressing_frequencies[1],
            }
        )
    emit(pd.DataFrame(rows), _header("dress", args, config=field_config(params).to_json_dict()), args)
    return EXIT_OK


def cmd_simulate(args, params) -> int:
    config = field_config(params)
    result = propagate_full(config, Regime(args.regime), cycles=args.cycles, steps=args.steps)
    phases = extract_phases(result)
    frame = pd.DataFrame(
        [
            {
                "state": p.state_label,
                "m": p.m,
                "subspace": p.subspace,
                "total_phase": p.total_phase,
                "dynamical_phase": p.dynamical_phase,
                "geometric_phase": p.geometric_phase,
                "winding": p.winding,
                "unwrapped_geometric_phase": p.unwrapped_geometric_phase,
            }
            for p in phases
        ]
    )
    header = _header(
        "simulate",
        args,
        config=config.to_json_dict(),
        regime=args.regime,
        cycles=args.cycles,
        steps=result.step_count,
        unitarity_error=result.unitarity_error,
        estimated_error=result.estimated_error,
    )
    emit(frame, header, args)
    return EXIT_OK


def cmd_perturb(args, params) -> int:
    x = params["b"] / params["omega"]
    theta = params["theta_rad"]
    reports = []
    if x > 0:
        reports.append(abelian_correction(x, theta))
    reports.append(non_abelian_correction(x, theta))
    frame = pd.DataFrame(
        [
            {
                "limit": r.limit.value,
                "x": r.x,
                "unperturbed_gauge": r.unperturbed_gauge,
                "correction": r.correction,
                "approximate_gauge": r.approximate_gauge,
                "exact_gauge": r.exact_gauge,
                "abs_error": r.abs_error,
                "valid": r.valid,
                "singular": r.singular,
                "first_order": r.first_order,
                "second_order": r.second_order,
                "dressing_shift": r.dressing_shift,
            }
            for r in reports
        ]
    )
    locus = singularity_locus(theta, params["omega"])
    header = _header("perturb", args, config=field_config(params).to_json_dict(), singularity_b=locus.b, note=locus.note)
    emit(frame, header, args)
    return EXIT_OK


def cmd_sense(args, params) -> int:
    b, omega, theta = params["b"], params["omega"], params["theta_rad"]
    reports = [exact_sensitivity(b, omega, theta), analytic_sensitivity(Limit.NON_ABELIAN, b, omega, theta)]
    if b > 0:
        reports.append(analytic_sensitivity(Limit.ABELIAN, b, omega, theta))
    rows = [
        {
            "limit": r.limit.value,
            "dgamma_db": r.dgamma_db,
            "dgamma_domega": r.dgamma_domega,
            "valid": r.valid,
            "shift_db": r.shift_db,
            "shift_domega": r.shift_domega,
        }
        for r in reports
    ]
    header = _header("sense", args, config=field_config(params).to_json_dict())
    if args.sigma_b is not None or args.sigma_omega is not None:
        sample = monte_carlo_phase_noise(
            b, omega, theta, args.sigma_b or 0.0, args.sigma_omega or 0.0, n=args.samples, seed=args.seed
        )
        header["noise"] = {
            "sigma_b": sample.sigma_b,
            "sigma_omega": sample.sigma_omega,
            "n_samples": sample.n_samples,
            "mean_gauge": sample.mean_gauge,
            "measured_std": sample.measured_std,
            "linearized_std": sample.linearized_std,
        }
    emit(pd.DataFrame(rows), header, args)
    return EXIT_OK


def build_sweep_spec(args, params, file_config: dict) -> SweepSpec:
    raw = {k: file_config[k] for k in SWEEP_KEYS if k in file_config}
    for key in ("axis", "start", "stop", "points", "steps"):
        value = getattr(args, key, None)
        if value is not None:
            raw[key] = value
    if args.log:
        raw["log"] = True
    if args.outputs:
        raw["outputs"] = [o.strip() for o in args.outputs.split(",") if o.strip()]
    axis = raw.get("axis")
    if axis is None:
        raise InvalidParameterError("sweep needs --axis (b, omega, theta or x)")
    if axis == "theta":
        for key in ("start", "stop"):
            if getattr(args, key, None) is not None:
                raw[key] = math.radians(raw[key])

    fixed = {"c": params["c"], "b": params["b"], "omega": params["omega"], "theta": params["theta_rad"]}
    if axis == "x":
        fixed.pop("b")
    else:
        fixed.pop(axis)
    try:
        return SweepSpec(fixed=FixedParameters(**fixed), seed=args.seed, **raw)
    except ValidationError as e:
        raise InvalidParameterError(str(e)) from e


def cmd_sweep(args, params, file_config) -> int:
    if args.preset:
        return _emit_preset(args.preset, args)
    spec = build_sweep_spec(args, params, file_config)
    frame = run_sweep(spec, workers=args.workers)
    emit(frame, _header("sweep", args, spec=spec.model_dump(mode="json", by_alias=True)), args)
    return EXIT_OK


def _emit_preset(name: str, args) -> int:
    specs = preset_specs(name, args.points, args.seed)
    frame = run_preset(name, args.points, args.seed, workers=args.workers)
    header = _header(name, args, specs=[s.model_dump(mode="json", by_alias=True) for s in specs])
    emit(frame, header, args)
    return EXIT_OK


def cmd_validate(args) -> int:
    report = validate(Level(args.level))
    sys.stdout.write(json.dumps(report.to_dict(), indent=2) + "\n")
    for failure in report.failures():
        logger.error("check %s failed: measured %.3e, threshold %.3e %s",
                     failure.name, failure.measured, failure.threshold, failure.detail)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_serve(args) -> int:
    uvicorn.run("app.main:app", host=args.host, port=args.port, log_level=get_settings().log_level.lower())
    return EXIT_OK


# ── parser ────────────────────────────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with c, b, omega, theta_rad and optional sweep keys")
    common.add_argument("--theta-deg", type=float, help="cone angle in degrees (default 57.3°, i.e. 1 rad)")
    common.add_argument("--omega", type=float, help="drive angular frequency")
    common.add_argument("--b", type=float, help="magnetic splitting")
    common.add_argument("--c", type=float, help="quadrupole coupling")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="write the dataset here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=None)
    common.add_argument("--log-level", default=None)

    parser = argparse.ArgumentParser(prog="geophase", description="Spin-3/2 geometric phase toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    gauge = sub.add_parser("gauge", parents=[common], help="gauge matrices of both Kramers pairs")
    gauge.add_argument("--numeric", action="store_true", help="finite differences instead of closed forms")

    dressed = sub.add_parser("dress", parents=[common], help="dressed Hamiltonian and energy shift")
    dressed.add_argument("--ansatz", choices=[a.value for a in Ansatz], default=None)

    simulate = sub.add_parser("simulate", parents=[common], help="integrate the 4-level problem and extract phases")
    simulate.add_argument("--cycles", type=int, default=1)
    simulate.add_argument("--steps", type=int, default=None)
    simulate.add_argument("--regime", choices=[r.value for r in Regime], default=Regime.ABELIAN.value)

    sub.add_parser("perturb", parents=[common], help="perturbative gauge around both limits")

    sense = sub.add_parser("sense", parents=[common], help="sensitivity to b and omega")
    sense.add_argument("--sigma-b", type=float, default=None)
    sense.add_argument("--sigma-omega", type=float, default=None)
    sense.add_argument("--samples", type=int, default=100_000)

    sweep = sub.add_parser("sweep", parents=[common], help="one-dimensional parameter sweep")
    sweep.add_argument("--axis", choices=("b", "omega", "theta", "x"))
    sweep.add_argument("--start", type=float, help="degrees when the axis is theta")
    sweep.add_argument("--stop", type=float, help="degrees when the axis is theta")
    sweep.add_argument("--points", type=int)
    sweep.add_argument("--log", action="store_true")
    sweep.add_argument("--outputs", help="comma-separated: gauge_exact,dressed,oracle,perturbation,sensitivity")
    sweep.add_argument("--steps", type=int, help="RK4 steps for oracle columns")
    sweep.add_argument("--preset", choices=tuple(PRESETS))

    fig2 = sub.add_parser("fig2", parents=[common], help="gauge against b for omega in 1, 10, 100")
    fig2.add_argument("--points", type=int, default=None)
    fig2.add_argument("--surface", action="store_true", help="gauge on the (b, omega) product grid instead")
    fig3 = sub.add_parser("fig3", parents=[common], help="exact against perturbative gauge")
    fig3.add_argument("--points", type=int, default=None)

    check = sub.add_parser("validate", parents=[common], help="run the self-check suite")
    check.add_argument("level", nargs="?", choices=[lv.value for lv in Level], default=Level.FAST.value)

    serve = sub.add_parser("serve", parents=[common], help="serve the HTTP API")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        file_config = load_config(args.config)
        params = resolve_parameters(args, file_config)
        if args.command == "validate":
            return cmd_validate(args)
        if args.command == "serve":
            return cmd_serve(args)
        if args.command == "fig2" and args.surface:
            return _emit_preset("surface", args)
        if args.command in ("fig2", "fig3"):
            return _emit_preset(args.command, args)
        if args.command == "sweep":
            return cmd_sweep(args, params, file_config)
        handlers = {
            "gauge": cmd_gauge,
            "dress": cmd_dress,
            "simulate": cmd_simulate,
            "perturb": cmd_perturb,
            "sense": cmd_sense,
        }
        return handlers[args.command](args, params)
    except (InvalidParameterError, DomainError, ValidationError) as e:
        logger.error("%s", e)
        return EXIT_BAD_INPUT
    except GeoPhaseError as e:
        logger.error("%s", e)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
