import dataclasses
import logging
import math

import numpy as np
import pytest

from app.dressed.schemas import Ansatz
from app.dressed.service import dress, dressed_propagator, effective_hamiltonian
from app.dynamics import service
from app.dynamics.integrator import rk4_propagate
from app.dynamics.service import (
    extract_phases,
    fold_energy,
    full_step_budget,
    oracle_gauge,
    population_transfer,
    propagate_effective,
    propagate_full,
    quasi_energies,
    required_effective_steps,
)
from app.errors import InvalidParameterError, StepCountError, SubspaceMixingError
from app.field.schemas import FieldConfig, Regime
from app.gauge.service import eigengauge
from utils.linalg import frobenius


@pytest.mark.parametrize(
    "omega, x, theta",
    [(1.0, 0.0, 1.0), (2.0, 3.0, 0.5), (0.5, 10.0, 2.5), (10.0, 1.0, 1.5), (5.0, 0.1, 0.1)],
)
def test_effective_oracle_matches_closed_form(omega, x, theta):
    b = x * omega
    t = 2 * math.pi / omega
    result = propagate_effective(omega, b, theta, t)
    closed = dressed_propagator(dress(omega, b, theta), t)
    assert frobenius(result.u - closed) <= 1e-8
    assert result.unitarity_error < 1e-9
    assert result.estimated_error < 1e-8


def test_reversed_ansatz_oracle():
    omega, b, theta = 1.0, 2.0, 1.0
    t = 2 * math.pi
    result = propagate_effective(omega, b, theta, t, ansatz=Ansatz.REVERSED)
    closed = dressed_propagator(dress(omega, b, theta, Ansatz.REVERSED), t)
    assert frobenius(result.u - closed) <= 1e-8


def test_flipped_schrodinger_sign_breaks_agreement(monkeypatch):
    monkeypatch.setattr(service, "SCHRODINGER_SIGN", -1j)
    omega, b, theta = 1.0, 1.0, 1.0
    result = propagate_effective(omega, b, theta, 2 * math.pi, estimate_error=False)
    closed = dressed_propagator(dress(omega, b, theta), 2 * math.pi)
    assert frobenius(result.u - closed) > 0.1


def test_too_few_steps_rejected():
    required = required_effective_steps(1.0, 5.0, 2 * math.pi)
    assert required == 5000
    with pytest.raises(StepCountError) as info:
        propagate_effective(1.0, 5.0, 1.0, 2 * math.pi, steps=required - 1)
    assert info.value.required == required


def test_non_positive_duration_rejected():
    with pytest.raises(InvalidParameterError):
        propagate_effective(1.0, 0.0, 1.0, 0.0)


def test_checkpoints_include_both_ends():
    result = propagate_effective(1.0, 0.0, 1.0, 2 * math.pi, record_every=100, estimate_error=False)
    assert result.checkpoint_times[0] == 0.0
    assert result.checkpoint_times[-1] == pytest.approx(2 * math.pi)
    assert len(result.checkpoints) == len(result.checkpoint_times) == 11
    assert np.allclose(result.checkpoints[0], np.eye(2))
    assert np.allclose(result.checkpoints[-1], result.u)


def test_quasi_energies_fold_the_dressed_spectrum():
    omega, b = 10.0, 5.0
    t = 2 * math.pi / 10
    result = propagate_effective(omega, b, 1.0, t)
    big_lambda = dress(omega, b, 1.0).big_lambda
    expected = sorted([fold_energy(big_lambda, t), fold_energy(-big_lambda, t)], reverse=True)
    assert quasi_energies(result) == pytest.approx(expected, abs=1e-7)


def test_fold_energy_zone():
    t = 1.0
    assert fold_energy(0.3, t) == pytest.approx(0.3)
    assert fold_energy(1.5 * math.pi, t) == pytest.approx(-0.5 * math.pi)


@pytest.mark.parametrize("ansatz", list(Ansatz))
@pytest.mark.parametrize("omega, b, theta", [(1.0, 0.0, 1.0), (2.0, 5.0, 0.6), (1.0, 40.0, 2.0)])
def test_oracle_gauge_matches_dressed_gauge(ansatz, omega, b, theta):
    assert oracle_gauge(omega, b, theta, ansatz) == pytest.approx(dress(omega, b, theta, ansatz).gauge, abs=1e-8)


def test_oracle_gauge_at_level_crossing():
    # θ = 0, x = 2: the gauge is (1/2)|1 − x| − x/2
    assert oracle_gauge(1.0, 2.0, 0.0) == pytest.approx(-0.5, abs=1e-8)


def test_population_transfer_between_limits():
    assert population_transfer(1.0, 0.0, math.pi / 2, math.pi) == pytest.approx(1.0, abs=1e-4)
    assert population_transfer(1.0, 100.0, 1.0, 2 * math.pi) < 5e-3


def test_phase_extraction_needs_four_levels():
    result = propagate_effective(1.0, 0.0, 1.0, 1.0, estimate_error=False)
    with pytest.raises(InvalidParameterError):
        extract_phases(result)
    with pytest.raises(InvalidParameterError):
        quasi_energies(propagate_full(FieldConfig(c=10.25, omega=1.0, theta=1.0), estimate_error=False))


def test_full_propagation_rejects_bad_cycles_and_steps():
    config = FieldConfig(c=10.25, omega=1.0, theta=1.0)
    with pytest.raises(InvalidParameterError):
        propagate_full(config, cycles=0)
    with pytest.raises(StepCountError):
        propagate_full(config, steps=10)


def test_fractional_cycles_rejected():
    config = FieldConfig(c=10.25, omega=1.0, theta=1.0)
    result = propagate_full(config, estimate_error=False)
    shifted = dataclasses.replace(result, t_final=1.5 * config.period)
    with pytest.raises(InvalidParameterError):
        extract_phases(shifted)


def test_non_adiabatic_run_reports_mixing(caplog):
    config = FieldConfig(c=10.25, b=0.0, omega=1.0, theta=1.0)
    with caplog.at_level(logging.WARNING, logger="app.dynamics.service"):
        result = propagate_full(config, estimate_error=False)
    assert "will not decouple" in caplog.text
    with pytest.raises(SubspaceMixingError) as info:
        extract_phases(result)
    assert info.value.leakage > 1e-3


@pytest.mark.slow
def test_four_level_non_abelian_phases():
    theta = 1.0
    config = FieldConfig(c=1000.0, b=0.0, omega=1.0, theta=theta)
    result = propagate_full(config, Regime.ABELIAN, cycles=1, estimate_error=False)
    assert result.unitarity_error < 1e-9
    phases = extract_phases(result)
    assert [p.state_label for p in phases] == ["+3/2", "+1/2", "-1/2", "-3/2"]

    three_halves = 3 * math.pi * math.cos(theta)
    assert phases[0].unwrapped_geometric_phase == pytest.approx(three_halves, rel=0.01)
    assert phases[3].unwrapped_geometric_phase == pytest.approx(-three_halves, rel=0.01)

    one_half = 2 * math.pi * eigengauge(theta)[0]
    inner = sorted(p.unwrapped_geometric_phase for p in phases[1:3])
    assert inner == pytest.approx([-one_half, one_half], rel=0.01)
    for p in phases:
        assert p.total_phase == pytest.approx(p.dynamical_phase + p.unwrapped_geometric_phase)


@pytest.mark.slow
def test_four_level_abelian_phase_follows_dressed_gauge():
    theta, x = 1.0, 50.0
    config = FieldConfig(c=1000.0, b=x, omega=1.0, theta=theta)
    phases = extract_phases(propagate_full(config, Regime.ABELIAN, cycles=1, estimate_error=False))
    # the lab field points along +z', which is the reversed sense of the effective equation
    expected = 2 * math.pi * dress(1.0, x, theta, Ansatz.REVERSED).gauge
    assert phases[1].geometric_phase == pytest.approx(expected, rel=0.02)
    assert phases[1].subspace == "1/2"


def test_rk4_error_drops_sixteenfold_when_steps_double():
    omega, b, theta = 1.0, 1.0, 1.0
    t = 2 * math.pi
    h = effective_hamiltonian(omega, b, theta)
    closed = dressed_propagator(dress(omega, b, theta), t)

    def error(steps):
        trajectory = rk4_propagate(lambda times: service.SCHRODINGER_SIGN * h(times), 2, t, steps)
        return frobenius(trajectory.u - closed)

    assert 14.0 < error(40) / error(80) < 18.0


@pytest.mark.parametrize("theta", [0.4, 1.0, 2.2])
def test_oracle_gauge_depends_only_on_x(theta):
    x = 2.0
    assert oracle_gauge(10.0, 10.0 * x, theta) == pytest.approx(oracle_gauge(1.0, x, theta), abs=1e-10)


def test_default_full_budget_keeps_acceptance_run_unitary():
    config = FieldConfig(c=1000.0, b=0.0, omega=1.0, theta=1.0)
    default_steps, minimum = full_step_budget(config, Regime.ABELIAN, cycles=1)
    assert default_steps >= 1_200_000
    assert minimum < default_steps
