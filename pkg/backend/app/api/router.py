import logging
import math
from dataclasses import asdict

from fastapi import APIRouter
from fastapi.responses import JSONResponse

from app.api.schemas import DressRequest, GaugeRequest, PerturbRequest, SenseRequest
from app.dressed.service import dress
from app.errors import GeoPhaseError
from app.gauge.schemas import Subspace
from app.gauge.service import eigengauge, gauge_matrix_analytic, gauge_matrix_numeric
from app.perturbation.service import abelian_correction, non_abelian_correction, singularity_locus
from app.sensitivity.service import analytic_sensitivity, exact_sensitivity, monte_carlo_phase_noise
from app.sweep.schemas import SweepSpec
from app.sweep.service import PRESETS, preset_specs, run_preset, run_sweep

logger = logging.getLogger(__name__)
router = APIRouter()


def _error(exc: Exception) -> JSONResponse:
    logger.info("rejected request: %s", exc)
    return JSONResponse({"error": True, "message": str(exc)}, status_code=400)


def _finite(payload: dict) -> dict:
    """NaN is not valid JSON; report it as null."""
    return {k: None if isinstance(v, float) and not math.isfinite(v) else v for k, v in payload.items()}


def _records(frame) -> list[dict]:
    return frame.astype(object).where(frame.notna(), None).to_dict(orient="records")


def _gauge_payload(subspace: Subspace, body: GaugeRequest) -> dict:
    if body.numeric:
        gauge = gauge_matrix_numeric(subspace, body.theta_rad, dphi=body.dphi)
    else:
        gauge = gauge_matrix_analytic(subspace, body.theta_rad)
    return {
        "subspace": subspace.value,
        "matrix": gauge.matrix.tolist(),
        "eigengauges": list(gauge.eigengauges),
    }


@router.post("/gauge")
def gauge(body: GaugeRequest):
    try:
        subspaces = [body.subspace] if body.subspace else list(Subspace)
        return {
            "theta_rad": body.theta_rad,
            "eigengauge": list(eigengauge(body.theta_rad)),
            "gauges": [_gauge_payload(s, body) for s in subspaces],
        }
    except GeoPhaseError as e:
        return _error(e)


@router.post("/dress")
def dressed(body: DressRequest):
    try:
        solution = dress(body.omega, body.b, body.theta_rad, body.ansatz)
    except GeoPhaseError as e:
        return _error(e)
    return {
        "ansatz": solution.ansatz.value,
        "x": solution.x,
        "h_dressed": solution.h_dressed.tolist(),
        "eigenvalues": solution.eigenvalues.tolist(),
        "big_lambda": solution.big_lambda,
        "energy_shift": solution.energy_shift,
        "companion_shift": solution.companion_shift,
        "gauge": solution.gauge,
        "dressing_frequencies": list(solution.dressing_frequencies),
    }


@router.post("/perturb")
def perturb(body: PerturbRequest):
    x = body.b / body.omega
    try:
        if body.limit == "abelian":
            report = abelian_correction(x, body.theta_rad)
        else:
            report = non_abelian_correction(x, body.theta_rad)
        locus = singularity_locus(body.theta_rad, body.omega)
    except GeoPhaseError as e:
        return _error(e)
    payload = asdict(report)
    payload["limit"] = report.limit.value
    payload["singularity"] = asdict(locus)
    return _finite(payload)


@router.post("/sense")
def sense(body: SenseRequest):
    try:
        if body.limit.value == "exact":
            report = exact_sensitivity(body.b, body.omega, body.theta_rad)
        else:
            report = analytic_sensitivity(body.limit, body.b, body.omega, body.theta_rad)
        payload = _finite(asdict(report))
        payload["limit"] = report.limit.value
        if body.sigma_b is not None:
            sample = monte_carlo_phase_noise(
                body.b, body.omega, body.theta_rad, body.sigma_b, body.sigma_omega, n=body.n, seed=body.seed
            )
            payload["noise"] = asdict(sample)
        return payload
    except GeoPhaseError as e:
        return _error(e)


@router.post("/sweep")
def sweep(spec: SweepSpec):
    frame = run_sweep(spec)
    return {"config": spec.model_dump(mode="json", by_alias=True), "rows": _records(frame)}


@router.get("/presets/{name}")
def preset(name: str, points: int | None = None):
    if name not in PRESETS:
        return JSONResponse({"error": True, "message": f"unknown preset '{name}'"}, status_code=404)
    try:
        specs = preset_specs(name, points)
        frame = run_preset(name, points)
    except (GeoPhaseError, ValueError) as e:
        return _error(e)
    return {
        "preset": name,
        "config": [s.model_dump(mode="json", by_alias=True) for s in specs],
        "rows": _records(frame),
    }
