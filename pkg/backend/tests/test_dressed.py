import math

import numpy as np
import pytest

from app.dressed.schemas import Ansatz
from app.dressed.service import (
    dress,
    dressed_propagator,
    effective_hamiltonian,
    gauge_exact,
    gauge_signed,
    limit_gauges,
)
from app.errors import InvalidParameterError


def test_non_abelian_endpoint():
    assert gauge_exact(0.0, 1.0) == pytest.approx(0.5 * math.sqrt(4 - 3 * math.cos(1.0) ** 2), abs=1e-15)
    assert gauge_exact(0.0, 1.0) == pytest.approx(0.8837732, abs=1e-6)


@pytest.mark.parametrize("theta", [0.5, 1.0, 1.4])
def test_abelian_endpoint(theta):
    assert abs(gauge_exact(1e3, theta) + 0.5 * math.cos(theta)) < 1e-3


def test_dressed_hamiltonian_entries():
    omega, b, theta = 2.0, 3.0, 0.7
    s = dress(omega, b, theta)
    expected = np.array(
        [
            [-0.5 * omega * math.cos(theta) + 0.5 * b, -omega * math.sin(theta)],
            [-omega * math.sin(theta), 0.5 * omega * math.cos(theta) - 0.5 * b],
        ]
    )
    assert np.allclose(s.h_dressed, expected)
    assert s.eigenvalues == pytest.approx([s.big_lambda, -s.big_lambda])
    assert s.dressing_frequencies == pytest.approx((-1.5, 1.5))


def test_shift_and_companion_sum_to_minus_b():
    s = dress(1.0, 4.0, 1.0)
    assert s.energy_shift + s.companion_shift == pytest.approx(-4.0)
    assert s.energy_shift == pytest.approx(s.big_lambda - 2.0)
    assert s.gauge == pytest.approx(s.energy_shift / 1.0)


def test_gauge_depends_on_ratio_only():
    assert dress(1.0, 2.0, 1.0).gauge == pytest.approx(dress(10.0, 20.0, 1.0).gauge, abs=1e-14)
    assert dress(3.0, 6.0, 1.0).gauge == pytest.approx(gauge_exact(2.0, 1.0), abs=1e-14)


def test_reversed_ansatz_flips_field_sense():
    omega, b, theta = 1.0, 2.0, 1.0
    s = dress(omega, b, theta, Ansatz.REVERSED)
    expected = 0.5 * omega * math.sqrt((b / omega + math.cos(theta)) ** 2 + 4 * math.sin(theta) ** 2)
    assert s.big_lambda == pytest.approx(expected)
    assert s.dressing_frequencies == pytest.approx((1.0, -1.0))
    assert s.gauge == pytest.approx(gauge_signed(-2.0, theta) - 2.0)


def test_ansatze_coincide_without_field():
    assert dress(1.0, 0.0, 1.0).gauge == pytest.approx(dress(1.0, 0.0, 1.0, Ansatz.REVERSED).gauge)


def test_gauge_is_strictly_decreasing():
    x = np.linspace(0, 50, 1000)
    for theta in (0.3, 1.0, 2.0):
        assert np.all(np.diff(gauge_exact(x, theta)) < 0)


def test_gauge_at_theta_zero_is_piecewise_linear():
    x = np.array([0.0, 0.5, 2.0, 3.0])
    assert np.allclose(gauge_exact(x, 0.0), 0.5 * np.abs(1 - x) - 0.5 * x)


def test_gauge_exact_types_and_domain():
    assert isinstance(gauge_exact(1.0, 1.0), float)
    assert gauge_exact(np.array([0.0, 1.0]), 1.0).shape == (2,)
    with pytest.raises(InvalidParameterError):
        gauge_exact(-0.1, 1.0)


def test_limit_gauges():
    limits = limit_gauges(2.0)
    assert limits.non_abelian == pytest.approx(0.5 * math.sqrt(4 - 3 * math.cos(2.0) ** 2))
    assert limits.abelian == pytest.approx(0.5 * abs(math.cos(2.0)))


@pytest.mark.parametrize("omega, b", [(0.0, 1.0), (-1.0, 1.0), (1.0, -0.5)])
def test_rejects_bad_rates(omega, b):
    with pytest.raises(InvalidParameterError):
        dress(omega, b, 1.0)


def test_effective_hamiltonian_stack():
    h = effective_hamiltonian(1.0, 2.0, 0.8)
    stack = h(np.linspace(0, 1, 3))
    assert stack.shape == (3, 2, 2)
    assert np.allclose(stack, np.conj(np.swapaxes(stack, -1, -2)))
    assert stack[2, 0, 1] == pytest.approx(math.sin(0.8) * np.exp(2j))


@pytest.mark.parametrize("ansatz", list(Ansatz))
def test_closed_form_solves_effective_equation(ansatz):
    omega, b, theta = 1.3, 2.1, 0.9
    h = effective_hamiltonian(omega, b, theta, ansatz)
    s = dress(omega, b, theta, ansatz)
    assert np.allclose(dressed_propagator(s, 0.0), np.eye(2))
    t, dt = 0.7, 1e-5
    u = dressed_propagator(s, t)
    derivative = (dressed_propagator(s, t + dt) - dressed_propagator(s, t - dt)) / (2 * dt)
    assert np.allclose(derivative, 1j * h(t) @ u, atol=1e-7)
    assert np.allclose(u.conj().T @ u, np.eye(2), atol=1e-12)
