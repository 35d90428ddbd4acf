"""
Brute-force Schrödinger integration, used as the oracle for every closed form.

Two problems are integrated with the same RK4 core:

  * the 2×2 effective equation Ċ = i·H_eff(t)·C of the ±1/2 amplitudes;
  * the full 4×4 laboratory problem iU̇ = H(t)·U.

Geometric phases are read off the one-cycle propagator expressed in the
instantaneous eigenbasis, with the dynamical phase −∫E dt removed and the
eigenphases of each Kramers block followed through the checkpoints so that
windings are not lost.
"""
import logging
import math

import numpy as np
from scipy.integrate import cumulative_simpson

from app.config import get_settings
from app.dressed.schemas import Ansatz
from app.dressed.service import dress, dressing_frame, effective_hamiltonian
from app.dynamics.integrator import rk4_propagate
from app.dynamics.schemas import PhaseResult, PropagatorResult
from app.errors import InvalidParameterError, StepCountError, SubspaceMixingError, UnitarityError
from app.field.schemas import FieldConfig, Regime
from app.field.service import M_LABELS, hamiltonian_at, instantaneous_eigenbasis, lab_hamiltonian, level_energies
from app.gauge.schemas import Subspace
from utils.linalg import frobenius, unitarity_error, wrap_phase

logger = logging.getLogger(__name__)

# Ċ = SCHRODINGER_SIGN·H_eff·C. The dressed closed form F(t)·exp(−i·H_D·t) only
# reproduces the integration with +i, which pins the convention.
SCHRODINGER_SIGN = 1j

M_VALUES = (1.5, 0.5, -0.5, -1.5)


def shortest_period(omega: float, b: float) -> float:
    periods = [2 * math.pi / omega]
    if b > 0:
        periods.append(2 * math.pi / b)
    return min(periods)


def required_effective_steps(omega: float, b: float, t_final: float) -> int:
    per_period = get_settings().min_steps_per_period
    return max(1, math.ceil(per_period * t_final / shortest_period(omega, b) - 1e-9))


def _finish(generator, dim, t_final, steps, record_every, estimate_error, **context) -> PropagatorResult:
    settings = get_settings()
    logger.debug("propagating %dx%d over t=%.6g in %d steps", dim, dim, t_final, steps)
    trajectory = rk4_propagate(generator, dim, t_final, steps, record_every)

    drift = unitarity_error(trajectory.u)
    if drift > settings.unitarity_abort:
        raise UnitarityError(drift, settings.unitarity_abort)
    if drift > settings.unitarity_tolerance:
        logger.warning("unitarity drift %.3e above %.1e; increase steps", drift, settings.unitarity_tolerance)

    estimated = math.nan
    if estimate_error and steps >= 2:
        coarse = rk4_propagate(generator, dim, t_final, steps // 2).u
        estimated = frobenius(trajectory.u - coarse) / 15.0
    logger.debug("propagation done: drift=%.3e estimated_error=%.3e", drift, estimated)

    return PropagatorResult(
        dimension=dim,
        t_final=float(t_final),
        u=trajectory.u,
        step_count=steps,
        estimated_error=estimated,
        unitarity_error=drift,
        checkpoint_times=trajectory.times,
        checkpoints=trajectory.snapshots,
        **context,
    )


def propagate_effective(
    omega: float,
    b: float,
    theta: float,
    t_final: float,
    steps: int | None = None,
    ansatz: Ansatz = Ansatz.STANDARD,
    record_every: int | None = None,
    estimate_error: bool = True,
) -> PropagatorResult:
    """Integrate the ±1/2 amplitude equation; ``steps`` defaults to the minimum allowed."""
    if not t_final > 0:
        raise InvalidParameterError(f"t_final must be positive, got {t_final}")
    h = effective_hamiltonian(omega, b, theta, ansatz)
    required = required_effective_steps(omega, b, t_final)
    steps = required if steps is None else steps
    if steps < required:
        raise StepCountError(steps, required)

    def generator(t):
        return SCHRODINGER_SIGN * h(t)

    return _finish(
        generator, 2, t_final, steps, record_every, estimate_error,
        omega=float(omega), b=float(b), theta=float(theta), ansatz=ansatz,
    )


def full_step_budget(config: FieldConfig, regime: Regime, cycles: int) -> tuple[int, int]:
    """(default, minimum) step counts resolving the fastest spectral period 2π/max|E|."""
    settings = get_settings()
    e_max = float(np.max(np.abs(level_energies(lab_hamiltonian(config, regime)))))
    periods = cycles * max(e_max, config.omega) / config.omega
    return (
        math.ceil(settings.full_steps_per_period * periods),
        math.ceil(settings.min_full_steps_per_period * periods),
    )


def propagate_full(
    config: FieldConfig,
    regime: Regime = Regime.ABELIAN,
    cycles: int = 1,
    steps: int | None = None,
    estimate_error: bool = True,
) -> PropagatorResult:
    settings = get_settings()
    if cycles < 1:
        raise InvalidParameterError(f"cycles must be at least 1, got {cycles}")
    if not config.is_adiabatic():
        logger.warning(
            "omega/c = %.3g exceeds %.1g; the ±1/2 and ±3/2 subspaces will not decouple",
            config.omega / config.c,
            settings.adiabatic_ratio_threshold,
        )
    default_steps, minimum = full_step_budget(config, regime, cycles)
    steps = default_steps if steps is None else steps
    if steps < minimum:
        raise StepCountError(steps, minimum)
    h = lab_hamiltonian(config, regime)

    def generator(t):
        return -1j * hamiltonian_at(h, t)

    record_every = max(1, steps // (cycles * settings.checkpoints_per_cycle))
    return _finish(
        generator, 4, cycles * config.period, steps, record_every, estimate_error,
        config=config, regime=regime, cycles=cycles,
    )


def _pairing_cost(angles: np.ndarray, predicted: np.ndarray) -> tuple[float, np.ndarray]:
    unwrapped = angles + 2 * math.pi * np.round((predicted - angles) / (2 * math.pi))
    return float(np.sum(np.abs(unwrapped - predicted))), unwrapped


def _track_eigenphases(blocks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Follow the two eigenphases of a stack of 2×2 unitaries continuously from identity.

    Each step is matched against a linear extrapolation of the previous two,
    which keeps the branches apart when both cross ±π together.
    """
    current = np.zeros(2)
    previous = current.copy()
    vectors = np.eye(2, dtype=complex)
    for k, block in enumerate(blocks[1:], start=1):
        evals, evecs = np.linalg.eig(block)
        predicted = current + (current - previous) if k > 1 else current
        angles = np.angle(evals)
        cost, straight = _pairing_cost(angles, predicted)
        swapped_cost, swapped = _pairing_cost(angles[::-1], predicted)
        previous = current
        if swapped_cost < cost:
            current, vectors = swapped, evecs[:, ::-1]
        else:
            current, vectors = straight, evecs
    return current, vectors


def extract_phases(result: PropagatorResult, config: FieldConfig | None = None) -> list[PhaseResult]:
    """Total, dynamical and geometric phase per cycle for m = +3/2 … −3/2.

    Within each Kramers block the geometric phases are the monodromy
    eigenphases; the branch whose eigenvector leans on |+m⟩ is labelled +m.
    """
    settings = get_settings()
    cfg = config or result.config
    if result.dimension != 4 or cfg is None:
        raise InvalidParameterError("phase extraction needs a 4-level laboratory propagation")
    cycles = result.t_final / cfg.period
    n_cycles = round(cycles)
    if n_cycles < 1 or abs(cycles - n_cycles) > 1e-9 * max(1.0, cycles):
        raise InvalidParameterError(f"propagation spans {cycles:.6f} drive cycles, expected an integer")

    h = lab_hamiltonian(cfg, result.regime or Regime.ABELIAN)
    times = result.checkpoint_times
    bases = [instantaneous_eigenbasis(h, t) for t in times]
    v0 = bases[0].vectors
    projected = np.array([basis.vectors.conj().T @ u @ v0 for basis, u in zip(bases, result.checkpoints)])
    energies = np.array([basis.energies for basis in bases])
    dynamical = -cumulative_simpson(energies, x=times, axis=0, initial=0.0)

    monodromy = projected[-1]
    leakage = float(
        max(
            np.max(np.abs(monodromy[np.ix_([0, 3], [1, 2])])),
            np.max(np.abs(monodromy[np.ix_([1, 2], [0, 3])])),
        )
    )
    if leakage > settings.mixing_tolerance:
        raise SubspaceMixingError(leakage, settings.mixing_tolerance)

    phases: dict[int, PhaseResult] = {}
    for subspace in (Subspace.THREE_HALVES, Subspace.ONE_HALF):
        idx = list(subspace.indices)
        blocks = np.exp(-1j * dynamical[:, idx])[:, :, None] * projected[:, idx][:, :, idx]
        geometric, vectors = _track_eigenphases(blocks)
        # the branch with more weight on |+m⟩ belongs to +m
        order = (0, 1) if abs(vectors[0, 0]) >= abs(vectors[0, 1]) else (1, 0)
        for position, branch in zip(idx, order):
            per_cycle = geometric[branch] / n_cycles
            dyn = dynamical[-1, position] / n_cycles
            wrapped, winding = wrap_phase(per_cycle)
            phases[position] = PhaseResult(
                state_label=M_LABELS[position],
                m=M_VALUES[position],
                total_phase=float(dyn + per_cycle),
                dynamical_phase=float(dyn),
                geometric_phase=float(wrapped),
                winding=int(winding),
                subspace=subspace.value,
            )
    return [phases[k] for k in range(4)]


def quasi_energies(result: PropagatorResult) -> np.ndarray:
    """Dressed-frame quasi-energies of an effective run, folded into (−π/t, π/t], descending."""
    if result.dimension != 2:
        raise InvalidParameterError("quasi-energies are defined for effective (2×2) runs")
    solution = dress(result.omega, result.b, result.theta, result.ansatz)
    rotated = dressing_frame(solution, result.t_final).conj().T @ result.u
    energies = -np.angle(np.linalg.eigvals(rotated)) / result.t_final
    return np.sort(energies)[::-1]


def fold_energy(energy: float, t: float) -> float:
    """Map an energy onto the quasi-energy zone (−π/t, π/t] used by ``quasi_energies``."""
    return float(-np.angle(np.exp(-1j * energy * t)) / t)


def oracle_gauge(
    omega: float, b: float, theta: float, ansatz: Ansatz = Ansatz.STANDARD, steps: int | None = None
) -> float:
    """λ/ω measured from integration over t = π/(b + 3ω).

    Λ ≤ (b + 3ω)/2, so Λt ≤ π/2 and the dressed-frame eigenphases need no unfolding.
    """
    t_probe = math.pi / (b + 3 * omega)
    if steps is None:
        steps = max(required_effective_steps(omega, b, t_probe), get_settings().min_steps_per_period)
    result = propagate_effective(omega, b, theta, t_probe, steps=steps, ansatz=ansatz, estimate_error=False)
    big_lambda = float(quasi_energies(result)[0])
    return (big_lambda - 0.5 * b) / omega


def population_transfer(
    omega: float,
    b: float,
    theta: float,
    t_final: float,
    steps: int | None = None,
    ansatz: Ansatz = Ansatz.STANDARD,
) -> float:
    """Largest population reached in |−1/2⟩ when starting in |+1/2⟩."""
    steps = steps or required_effective_steps(omega, b, t_final)
    result = propagate_effective(
        omega, b, theta, t_final, steps=steps, ansatz=ansatz,
        record_every=max(1, steps // 2048), estimate_error=False,
    )
    return float(np.max(np.abs(result.checkpoints[:, 1, 0]) ** 2))
